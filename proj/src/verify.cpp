#include "lpwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "lpwave/io.hpp"
#include "lpwave/transforms.hpp"

namespace lpwave {

namespace {

constexpr double kPi = std::numbers::pi;

// splitmix64 seeding + explicit Box-Muller keeps streams identical across
// standard libraries.
std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed, std::uint64_t stream) {
        state = seed ^ (0x517cc1b727220a95ULL * (stream + 1));
        for (int i = 0; i < 4; ++i) splitmix(state);
    }
    double uniform() {  // [0, 1)
        return double(splitmix(state) >> 11) * 0x1.0p-53;
    }
    cplx gaussian() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return cplx(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)) /
               std::sqrt(2.0);
    }
    cplx unimodular() { return std::polar(1.0, 2.0 * kPi * uniform()); }
    std::int64_t below(std::int64_t n) {
        return static_cast<std::int64_t>(splitmix(state) % std::uint64_t(n));
    }
};

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

EnsembleSpec EnsembleSpec::parse_law(const std::string& name, int count, std::uint64_t seed) {
    EnsembleSpec es;
    es.count = count;
    es.seed = seed;
    if (name == "gaussian-complex")
        es.law = Law::GaussianComplex;
    else if (name == "unimodular-random-phase")
        es.law = Law::Unimodular;
    else
        throw config_error("unknown ensemble amplitude law: " + name);
    if (count < 8) throw config_error("ensemble count must be >= 8");
    return es;
}

SpaceTimeField random_field(const GridSpec& g, const EnsembleSpec& es, int sample,
                            const LatticePredicate& pred) {
    SpaceTimeField u(g, Rep::SpaceTimeFourier);
    Rng rng(es.seed, std::uint64_t(sample));
    const std::int64_t sp = g.spatial_points();
    std::vector<int> k(g.n());
    std::vector<double> xi2cache(sp);
    for (std::int64_t s = 0; s < sp; ++s) xi2cache[s] = g.xi_norm_sq(s);
    for (int m = 0; m < g.nt(); ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s) {
            g.spatial_signed(s, k.data());
            if (!pred(tau, xi2cache[s], k.data())) continue;
            u.data()[std::int64_t(m) * sp + s] =
                es.law == EnsembleSpec::Law::GaussianComplex ? rng.gaussian() : rng.unimodular();
        }
    }
    return u;
}

SpatialField random_spatial_field(const GridSpec& g, const EnsembleSpec& es, int sample,
                                  const LatticePredicate& pred) {
    SpatialField u(g, SpatialField::SRep::Fourier);
    Rng rng(es.seed, 0x5151ULL + std::uint64_t(sample));
    std::vector<int> k(g.n());
    for (std::int64_t s = 0; s < g.spatial_points(); ++s) {
        g.spatial_signed(s, k.data());
        if (!pred(0.0, g.xi_norm_sq(s), k.data())) continue;
        u.data()[s] = es.law == EnsembleSpec::Law::GaussianComplex ? rng.gaussian()
                                                                   : rng.unimodular();
    }
    return u;
}

void EstimateReport::finalize() {
    max_ratio = 0.0;
    for (double r : ratios) max_ratio = std::max(max_ratio, r);
    median_ratio = median_of(ratios);
    if (!std::isnan(ceiling)) pass = max_ratio <= ceiling;
}

double strichartz_gamma(int n, double q, double r) {
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    return n / 2.0 - n * inv_r - inv_q;
}

bool strichartz_admissible(int n, double q, double r) {
    const double sig = (n - 1) / 2.0;
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    return inv_q + sig * inv_r <= sig / 2.0 + 1e-9 && q >= 2.0 && r >= 2.0;
}

EstimateReport strichartz_ratio(const GridSpec& g, double q, double r, double lambda,
                                const EnsembleSpec& es) {
    if (!strichartz_admissible(g.n(), q, r)) {
        const double sig = (g.n() - 1) / 2.0;
        throw config_error("strichartz_ratio: inadmissible (q, r): requires 1/q + sigma/r <= "
                           "sigma/2 with sigma = " +
                           std::to_string(sig) + " and q, r >= 2");
    }
    EstimateReport rep;
    rep.id = "strichartz";
    const double gamma = strichartz_gamma(g.n(), q, r);
    rep.params = {{"q", q}, {"r", r}, {"lambda", lambda}, {"gamma", gamma}, {"n", double(g.n())}};
    rep.warned = g.n() <= 5;
    if (rep.warned) rep.note = "outside the paper's range 5 < n";
    for (int i = 0; i < es.count; ++i) {
        SpatialField u = random_spatial_field(
            g, es, i, [&](double, double xi2, const int*) { return xi2 < 4.0 * lambda * lambda; });
        const double denom = std::pow(lambda, gamma) * spatial_l2(u);
        if (denom == 0.0) continue;
        SpaceTimeField ev = half_wave(u, +1);
        rep.ratios.push_back(mixed_norm(convert(ev, Rep::Physical), q, r) / denom);
    }
    rep.finalize();
    return rep;
}

EstimateReport local_strichartz_ratio(const GridSpec& g, double lambda, double d,
                                      const EnsembleSpec& es, int sectors_per_sample) {
    if (g.n() < 2) throw config_error("local_strichartz_ratio: requires n >= 2");
    const double delta = std::sqrt(lambda * d);
    if (delta > lambda)
        throw std::domain_error("local_strichartz_ratio: (lambda d)^{1/2} exceeds lambda");
    auto sectors = s_omega_sectors(g.n(), lambda, d);
    auto table = sectors->assign_table(g, lambda * lambda / 4.0, 16.0 * lambda * lambda);

    EstimateReport rep;
    rep.id = "local_strichartz";
    rep.params = {{"lambda", lambda}, {"d", d}, {"delta", delta},
                  {"sectors", double(sectors->count())}, {"n", double(g.n())}};
    const double rhs_factor =
        std::pow(lambda, (g.n() + 1) / 4.0) * std::pow(d, (g.n() - 3) / 4.0);

    // Restrict to sectors that own lattice points.
    std::vector<int> occupied;
    {
        std::set<int> occ;
        for (std::int64_t s = 0; s < g.spatial_points(); ++s)
            if ((*table)[s] >= 0) occ.insert((*table)[s]);
        occupied.assign(occ.begin(), occ.end());
    }
    double sq_ratio_max = 0.0;
    for (int i = 0; i < es.count && !occupied.empty(); ++i) {
        Rng rng(es.seed, 0xab1e + std::uint64_t(i));
        std::set<int> chosen;
        const int want = std::min<int>(sectors_per_sample, static_cast<int>(occupied.size()));
        while (static_cast<int>(chosen.size()) < want)
            chosen.insert(occupied[rng.below(static_cast<std::int64_t>(occupied.size()))]);

        SpatialField u = random_spatial_field(g, es, i, [&](double, double, const int*) {
            return true;  // masked below per sector
        });
        // union field over chosen sectors for the square-sum variant
        SpatialField uu(g, SpatialField::SRep::Fourier);
        double sqsum = 0.0;
        for (int omega : chosen) {
            SpatialField uw(g, SpatialField::SRep::Fourier);
            for (std::int64_t s = 0; s < g.spatial_points(); ++s)
                if ((*table)[s] == omega) {
                    uw.data()[s] = u.data()[s];
                    uu.data()[s] = u.data()[s];
                }
            const double denom = rhs_factor * spatial_l2(uw);
            if (denom == 0.0) continue;
            SpaceTimeField ev = half_wave(uw, +1);
            const double lhs = mixed_norm(convert(ev, Rep::Physical), 2.0,
                                          std::numeric_limits<double>::infinity());
            rep.ratios.push_back(lhs / denom);
            sqsum += lhs * lhs;
        }
        const double udenom = rhs_factor * spatial_l2(uu);
        if (udenom > 0.0) sq_ratio_max = std::max(sq_ratio_max, std::sqrt(sqsum) / udenom);
    }
    rep.params.emplace_back("square_sum_ratio", sq_ratio_max);
    rep.finalize();
    return rep;
}

namespace {

double l1_l2_shell(const SpaceTimeField& u, double lambda) {
    MultiplierSymbol s = shell_symbol(u.grid(), lambda);
    SpaceTimeField masked = apply(s, convert(u, Rep::SpaceTimeFourier));
    SpaceTimeField sf = convert(masked, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const double dxn = std::pow(g.dx(), g.n());
    double acc = 0.0;
    for (int m = 0; m < g.nt(); ++m) {
        double slice = 0.0;
        for (std::int64_t sdx = 0; sdx < g.spatial_points(); ++sdx)
            slice += std::norm(sf.at(m, sdx));
        acc += std::sqrt(slice * dxn) * g.dt();
    }
    return acc;
}

}  // namespace

EstimateReport y_outer_block_ratio(const GridSpec& g, double lambda, double d,
                                   const EnsembleSpec& es) {
    if (g.n() < 2) throw config_error("y_outer_block_ratio: requires n >= 2");
    EstimateReport rep;
    rep.id = "y_outer_block";
    rep.params = {{"lambda", lambda}, {"d", d}, {"n", double(g.n())}};
    rep.warned = g.n() <= 5;
    if (rep.warned) rep.note = "paper range is 5 < n";
    const DyadicLadder st = frequency_shells(g);
    const DyadicLadder cl = cone_shells(g);
    const int shell_idx = st.index_of(lambda);
    const int dc = cl.index_of(d);
    if (shell_idx < 0 || dc < 0) throw config_error("y_outer_block_ratio: lambda or d unresolvable");
    const double rhs_factor =
        std::pow(lambda, (g.n() - 4) / 2.0) * std::pow(d / lambda, (g.n() - 5) / 4.0);
    for (int i = 0; i < es.count; ++i) {
        SpaceTimeField u = random_field(g, es, i, [&](double tau, double xi2, const int*) {
            if (xi2 < lambda * lambda / 4.0 || xi2 > 16.0 * lambda * lambda) return false;
            const double r2 = tau * tau + xi2;
            if (r2 == 0.0 || st.classify(std::sqrt(r2)) != shell_idx) return false;
            if (lattice::on_cone(tau, xi2)) return false;
            const double mod = std::fabs(std::fabs(tau) - std::sqrt(xi2));
            return cl.classify(mod) == dc;
        });
        const double rhs = rhs_factor * l1_l2_shell(u, lambda);
        if (rhs == 0.0) continue;
        rep.ratios.push_back(z_square_sum(u, lambda, d, /*invert_xi=*/true) / rhs);
    }
    rep.finalize();
    return rep;
}

EstimateReport y_l2_ratio(const GridSpec& g, double lambda, double d, const EnsembleSpec& es) {
    EstimateReport rep;
    rep.id = "y_l2";
    rep.params = {{"lambda", lambda}, {"d", d}, {"n", double(g.n())}};
    const DyadicLadder st = frequency_shells(g);
    const DyadicLadder cl = cone_shells(g);
    const int shell_idx = st.index_of(lambda);
    const int dc = cl.index_of(d);
    if (shell_idx < 0 || dc < 0) throw config_error("y_l2_ratio: lambda or d unresolvable");
    for (int i = 0; i < es.count; ++i) {
        SpaceTimeField u = random_field(g, es, i, [&](double tau, double xi2, const int*) {
            const double r2 = tau * tau + xi2;
            if (r2 == 0.0 || st.classify(std::sqrt(r2)) != shell_idx) return false;
            if (lattice::on_cone(tau, xi2)) return false;
            const double mod = std::fabs(std::fabs(tau) - std::sqrt(xi2));
            return cl.classify(mod) == dc;
        });
        const double y = y_norm(u, lambda);
        if (y == 0.0) continue;
        const double lhs =
            std::sqrt(d) * l2_coeff_norm(u) * std::sqrt(g.cell_measure());
        rep.ratios.push_back(lhs / y);
    }
    rep.finalize();
    return rep;
}

EstimateReport angular_reconstruction_ratio(const GridSpec& g, double lambda, double delta,
                                            const EnsembleSpec& es, const std::string& which) {
    if (g.n() < 2) throw config_error("angular_reconstruction_ratio: requires n >= 2");
    EstimateReport rep;
    rep.id = "angular_reconstruction_" + which;
    rep.params = {{"lambda", lambda}, {"delta", delta}, {"n", double(g.n())}};
    auto sectors = std::make_shared<AngularSectorSet>(g.n(), lambda, delta);
    auto table = sectors->assign_table(g, lambda * lambda / 4.0, 16.0 * lambda * lambda);
    const DyadicLadder st = frequency_shells(g);
    const int shell_idx = st.index_of(lambda);
    auto norm_of = [&](const SpaceTimeField& u) {
        return which == "y" ? y_norm(u, lambda) : x_half_norm(u, lambda, 1.0);
    };
    for (int i = 0; i < es.count; ++i) {
        SpaceTimeField u = random_field(g, es, i, [&](double tau, double xi2, const int*) {
            const double r2 = tau * tau + xi2;
            return r2 > 0.0 && st.classify(std::sqrt(r2)) == shell_idx;
        });
        const double total = norm_of(u);
        if (total == 0.0) continue;
        double sq = 0.0;
        const std::int64_t sp = g.spatial_points();
        for (int omega = 0; omega < sectors->count(); ++omega) {
            SpaceTimeField uw(g, Rep::SpaceTimeFourier);
            bool any = false;
            for (int m = 0; m < g.nt(); ++m)
                for (std::int64_t s = 0; s < sp; ++s) {
                    if ((*table)[s] != omega) continue;
                    const cplx v = u.data()[std::int64_t(m) * sp + s];
                    if (v == cplx(0.0)) continue;
                    uw.data()[std::int64_t(m) * sp + s] = v;
                    any = true;
                }
            if (!any) continue;
            const double part = norm_of(uw);
            sq += part * part;
        }
        rep.ratios.push_back(std::sqrt(sq) / total);
    }
    rep.finalize();
    return rep;
}

EstimateReport energy_ratio(const GridSpec& g, double s, const EnsembleSpec& es) {
    EstimateReport rep;
    rep.id = "energy";
    rep.params = {{"s", s}, {"n", double(g.n())}};
    for (int i = 0; i < es.count; ++i) {
        SpaceTimeField u =
            random_field(g, es, i, [&](double, double, const int*) { return true; });
        const double fs = fs_norm(u, s);
        if (fs == 0.0) continue;
        const std::vector<double> a = sobolev_time_profile(u, s);
        const std::vector<double> b = sobolev_time_profile(time_derivative_spectral(u), s - 1.0);
        double sup = 0.0;
        for (int m = 0; m < g.nt(); ++m) sup = std::max({sup, a[m], b[m]});
        rep.ratios.push_back(sup / fs);
    }
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Support geometry
// ---------------------------------------------------------------------------

namespace {

struct LatticePoint {
    double tau;
    double xin;          // |xi|
    double mod_signed;   // tau - sign(tau) |xi| evaluated as tau -+ |xi| per half
    std::vector<int> k;
};

double point_mod(const LatticePoint& p) { return std::fabs(std::fabs(p.tau) - p.xin); }

/// Enumerate lattice points with |(tau,xi)| in [r_lo, r_hi), modulation in
/// [mod_lo, mod_hi) (closed at the cone: mod_lo = 0 includes it) and the
/// given tau sign (0 = both).
std::vector<LatticePoint> enumerate_support(const GridSpec& g, double r_lo, double r_hi,
                                            double mod_lo, double mod_hi, int sign) {
    std::vector<LatticePoint> out;
    const int kb = static_cast<int>(std::ceil(r_hi * g.L()));
    const int jb = static_cast<int>(std::ceil(r_hi * g.T()));
    const int kmax = std::min(kb, g.nx() / 2);
    const int jmax = std::min(jb, g.nt() / 2);
    std::vector<int> k(g.n(), -kmax);
    while (true) {
        double ksq = 0.0;
        for (int a = 0; a < g.n(); ++a) ksq += double(k[a]) * k[a];
        const double xi2 = ksq / (g.L() * g.L());
        const double xin = std::sqrt(xi2);
        if (xi2 < r_hi * r_hi) {
            for (int j = -jmax; j <= jmax; ++j) {
                const double tau = j / g.T();
                if (sign != 0 && sign * tau <= 0.0) continue;
                const double r2 = tau * tau + xi2;
                if (r2 < r_lo * r_lo || r2 >= r_hi * r_hi) continue;
                const double mod = std::fabs(std::fabs(tau) - xin);
                if (mod < mod_lo || mod >= mod_hi) continue;
                out.push_back({tau, xin, tau - (tau >= 0 ? xin : -xin), k});
            }
        }
        int a = g.n() - 1;
        while (a >= 0 && ++k[a] > kmax) k[a--] = -kmax;
        if (a < 0) break;
    }
    return out;
}

/// Rejection-sample one support point; returns false if the draw failed.
bool sample_support(const GridSpec& g, Rng& rng, double r_lo, double r_hi, double mod_lo,
                    double mod_hi, int sign, LatticePoint& out) {
    const int kmax = std::min(static_cast<int>(std::ceil(r_hi * g.L())), g.nx() / 2);
    const int jmax = std::min(static_cast<int>(std::ceil(r_hi * g.T())), g.nt() / 2);
    std::vector<int> k(g.n());
    for (int tries = 0; tries < 64; ++tries) {
        double ksq = 0.0;
        for (int a = 0; a < g.n(); ++a) {
            k[a] = static_cast<int>(rng.below(2 * kmax + 1)) - kmax;
            ksq += double(k[a]) * k[a];
        }
        const double xi2 = ksq / (g.L() * g.L());
        if (xi2 >= r_hi * r_hi) continue;
        const double xin = std::sqrt(xi2);
        // Enumerate the tau lattice values compatible with the constraints.
        std::vector<int> js;
        for (int j = -jmax; j <= jmax; ++j) {
            const double tau = j / g.T();
            if (sign != 0 && sign * tau <= 0.0) continue;
            const double r2 = tau * tau + xi2;
            if (r2 < r_lo * r_lo || r2 >= r_hi * r_hi) continue;
            const double mod = std::fabs(std::fabs(tau) - xin);
            if (mod < mod_lo || mod >= mod_hi) continue;
            js.push_back(j);
        }
        if (js.empty()) continue;
        const int j = js[rng.below(static_cast<std::int64_t>(js.size()))];
        const double tau = j / g.T();
        out = {tau, xin, tau - (tau >= 0 ? xin : -xin), k};
        return true;
    }
    return false;
}

double angle_pm(const std::vector<int>& kp, int sign_u, const std::vector<int>& kv) {
    // angle between sign_u * xi' and xi via atan2(|cross|, dot)
    const int n = static_cast<int>(kp.size());
    double dot = 0.0, np = 0.0, nv = 0.0;
    for (int a = 0; a < n; ++a) {
        dot += double(kp[a]) * kv[a];
        np += double(kp[a]) * kp[a];
        nv += double(kv[a]) * kv[a];
    }
    if (np == 0.0 || nv == 0.0) return 0.0;
    dot *= sign_u;
    const double cross_sq = std::max(0.0, np * nv - dot * dot);
    return std::atan2(std::sqrt(cross_sq), dot);
}

struct PairAccum {
    double max_theta_ratio = 0.0;
    double max_out_mod_over_mu = 0.0;
    std::int64_t contributing = 0;
    std::int64_t violations = 0;
    int sign_violations = 0;
    std::map<int, std::set<int>> omega2_of_omega1;
    std::map<int, std::set<int>> omega3_of_omega1;
    std::vector<SupportCheckReport::Violation> samples;

    void merge(const PairAccum& o) {
        max_theta_ratio = std::max(max_theta_ratio, o.max_theta_ratio);
        max_out_mod_over_mu = std::max(max_out_mod_over_mu, o.max_out_mod_over_mu);
        contributing += o.contributing;
        violations += o.violations;
        sign_violations += o.sign_violations;
        for (const auto& [w1, set2] : o.omega2_of_omega1)
            omega2_of_omega1[w1].insert(set2.begin(), set2.end());
        for (const auto& [w1, set3] : o.omega3_of_omega1)
            omega3_of_omega1[w1].insert(set3.begin(), set3.end());
        for (const auto& v : o.samples)
            if (samples.size() < 32) samples.push_back(v);
    }
    void record_violation(const std::string& what, const LatticePoint& up, int,
                          const LatticePoint& vp) {
        ++violations;
        if (samples.size() < 32) {
            SupportCheckReport::Violation viol;
            viol.what = what;
            viol.taup = up.tau;
            viol.tau = vp.tau;
            viol.xip.assign(up.k.begin(), up.k.end());
            viol.xi.assign(vp.k.begin(), vp.k.end());
            samples.push_back(viol);
        }
    }
};

}  // namespace

SupportCheckReport bilinear_support_check(const GridSpec& g, const SupportCheckConfig& cfg) {
    SupportCheckReport rep;
    rep.lemma = cfg.lemma;
    rep.params = {{"lambda", cfg.lambda}, {"mu", cfg.mu},      {"d", cfg.d},
                  {"c", cfg.c},           {"n", double(g.n())}};
    if (cfg.lambda < 8.0 * cfg.mu)
        throw config_error("bilinear_support_check: requires lambda/mu >= 8");
    const bool bterm = cfg.lemma == "b-term";
    if (!bterm && !(cfg.d < cfg.c * cfg.mu))
        throw config_error("bilinear_support_check: wide/small lemmas require d < c mu");
    if (bterm && !(cfg.c * cfg.mu <= cfg.d && cfg.d <= 2.0 * cfg.mu))
        throw config_error("bilinear_support_check: b-term requires c mu <= d <~ mu");

    const double lam = cfg.lambda, mu = cfg.mu, d = cfg.d, c = cfg.c;
    const double inf = std::numeric_limits<double>::infinity();

    // Factor supports. Modulation ranges include the cone itself; the
    // geometric reading of S_{.,<=d} is {mod < 2d}.
    const double u_mod_hi = bterm ? inf : 2.0 * d;
    const double v_mod_hi = bterm ? c * mu : 2.0 * d;

    // Angular systems.
    const double wide_scale = std::sqrt(d / mu);
    const double small_scale = std::sqrt(d / lam);
    auto omega1_wide = std::make_shared<AngularSectorSet>(g.n(), lam, lam * wide_scale);
    auto omega2_sys = std::make_shared<AngularSectorSet>(g.n(), mu, std::sqrt(mu * d));
    auto omega13_small = s_omega_sectors(g.n(), lam, d);

    std::vector<LatticePoint> vlist;
    std::vector<std::vector<LatticePoint>> ulist(2);  // sign index 0:+, 1:-
    if (cfg.exhaustive) {
        vlist = enumerate_support(g, lam, 2.0 * lam, 0.0, v_mod_hi, +1);
        ulist[0] = enumerate_support(g, mu, 2.0 * mu, 0.0, u_mod_hi, +1);
        ulist[1] = enumerate_support(g, mu, 2.0 * mu, 0.0, u_mod_hi, -1);
        const std::int64_t total =
            static_cast<std::int64_t>(vlist.size()) *
            (static_cast<std::int64_t>(ulist[0].size()) + static_cast<std::int64_t>(ulist[1].size()));
        if (total > (std::int64_t(1) << 33))
            throw config_error("bilinear_support_check: exhaustive pair count too large; "
                               "use sampled mode");
    }

    auto examine = [&](const LatticePoint& up, int sign_u, const LatticePoint& vp,
                       PairAccum& acc) {
        std::vector<int> ks(g.n());
        double ks_sq = 0.0;
        for (int a = 0; a < g.n(); ++a) {
            ks[a] = up.k[a] + vp.k[a];
            ks_sq += double(ks[a]) * ks[a];
        }
        const double xin = std::sqrt(ks_sq) / g.L();
        const double tau = up.tau + vp.tau;
        const double r = std::sqrt(tau * tau + xin * xin);
        const double out_mod = std::fabs(std::fabs(tau) - xin);
        const bool in_shell = r >= lam && r < 2.0 * lam;

        if (bterm) {
            // Range fact: any output at modulation >= c mu forces out_mod <~ mu.
            if (in_shell && out_mod >= c * mu) {
                ++acc.contributing;
                acc.max_out_mod_over_mu = std::max(acc.max_out_mod_over_mu, out_mod / mu);
                if (out_mod > cfg.c_bterm_ceiling * mu)
                    acc.record_violation("out_mod_exceeds_mu_range", up, sign_u, vp);
                if (out_mod >= d && out_mod < 2.0 * d) {
                    // Angular fact at the tested d: omega_1 ~ omega_3 at
                    // scale (d / lambda)^{1/2}.
                    std::vector<double> vs(ks.begin(), ks.end());
                    std::vector<double> vv(vp.k.begin(), vp.k.end());
                    const int w1 = omega13_small->assign(vs);
                    const int w3 = omega13_small->assign(vv);
                    acc.omega3_of_omega1[w1].insert(w3);
                    const double dist = geodesic_angle(omega13_small->center(w1),
                                                       omega13_small->center(w3));
                    if (dist > 8.0 * small_scale)
                        acc.record_violation("omega13_distance", up, sign_u, vp);
                }
            }
            // Sign fact: u at modulation ~ d feeding a small-modulation output
            // forces the signed modulation inward: sign_u * (tau' -+ |xi'|) < 0.
            const double u_mod = point_mod(up);
            if (in_shell && out_mod < c * mu && u_mod >= d && u_mod < 2.0 * d) {
                ++acc.contributing;
                const double r_signed = up.tau - sign_u * up.xin;
                if (sign_u * r_signed >= 0.0) {
                    ++acc.sign_violations;
                    acc.record_violation("sign_fact", up, sign_u, vp);
                }
            }
            return;
        }

        // wide / small: output in s^+_{lambda, d}
        if (!in_shell || tau <= 0.0 || out_mod < d || out_mod >= 2.0 * d) return;
        ++acc.contributing;
        const double theta = angle_pm(up.k, sign_u, vp.k);
        acc.max_theta_ratio = std::max(acc.max_theta_ratio, theta / wide_scale);
        if (theta > cfg.c_ang_ceiling * wide_scale)
            acc.record_violation("angle_bound", up, sign_u, vp);

        std::vector<double> vsum(ks.begin(), ks.end());
        std::vector<double> vu(up.k.begin(), up.k.end());
        std::vector<double> vv(vp.k.begin(), vp.k.end());
        if (cfg.lemma == "wide") {
            const int w1 = omega1_wide->assign(vsum);
            const int w2 = omega2_sys->assign(vu);
            const int w3 = omega1_wide->assign(vv);
            acc.omega2_of_omega1[w1].insert(w2);
            acc.omega3_of_omega1[w1].insert(w3);
            std::vector<double> c2 = omega2_sys->center(w2);
            for (double& x : c2) x *= sign_u;
            if (geodesic_angle(omega1_wide->center(w1), c2) > 8.0 * wide_scale)
                acc.record_violation("omega12_distance", up, sign_u, vp);
            if (geodesic_angle(omega1_wide->center(w1), omega1_wide->center(w3)) >
                8.0 * wide_scale)
                acc.record_violation("omega13_distance", up, sign_u, vp);
        } else {  // small
            const int w1 = omega13_small->assign(vsum);
            const int w2 = omega2_sys->assign(vu);
            const int w3 = omega13_small->assign(vv);
            acc.omega3_of_omega1[w1].insert(w3);
            std::vector<double> c2 = omega2_sys->center(w2);
            for (double& x : c2) x *= sign_u;
            if (geodesic_angle(omega13_small->center(w1), c2) > 8.0 * wide_scale)
                acc.record_violation("omega12_distance", up, sign_u, vp);
            if (geodesic_angle(omega13_small->center(w1), omega13_small->center(w3)) >
                8.0 * small_scale)
                acc.record_violation("omega13_distance", up, sign_u, vp);
        }
    };

    PairAccum acc;
    std::int64_t examined = 0;
    if (cfg.exhaustive) {
        for (int si = 0; si < 2; ++si) {
            const int sign_u = si == 0 ? +1 : -1;
            const auto& ul = ulist[si];
            const std::int64_t nu = static_cast<std::int64_t>(ul.size());
            const int chunks = static_cast<int>(std::min<std::int64_t>(64, std::max<std::int64_t>(nu, 1)));
            std::vector<PairAccum> partial(chunks);
#pragma omp parallel for schedule(dynamic)
            for (int ch = 0; ch < chunks; ++ch) {
                for (std::int64_t iu = nu * ch / chunks; iu < nu * (ch + 1) / chunks; ++iu)
                    for (const LatticePoint& vp : vlist) examine(ul[iu], sign_u, vp, partial[ch]);
            }
            for (int ch = 0; ch < chunks; ++ch) acc.merge(partial[ch]);
            examined += nu * static_cast<std::int64_t>(vlist.size());
        }
    } else {
        Rng rng(cfg.seed, 0x9e0);
        std::int64_t draws = 0;
        const std::int64_t max_draws = 200LL * cfg.sample_pairs + 1000000LL;
        while (acc.contributing < cfg.sample_pairs && draws < max_draws) {
            ++draws;
            const int sign_u = rng.uniform() < 0.5 ? +1 : -1;
            LatticePoint up, vp;
            if (!sample_support(g, rng, mu, 2.0 * mu, 0.0, u_mod_hi, sign_u, up)) continue;
            if (!sample_support(g, rng, lam, 2.0 * lam, 0.0, v_mod_hi, +1, vp)) continue;
            examine(up, sign_u, vp, acc);
        }
        examined = draws;
    }

    rep.pairs_examined = examined;
    rep.contributing = acc.contributing;
    rep.c_ang_measured = acc.max_theta_ratio;
    rep.max_out_mod_over_mu = acc.max_out_mod_over_mu;
    rep.sign_violations = acc.sign_violations;
    for (const auto& [w1, s2] : acc.omega2_of_omega1)
        rep.max_omega2_multiplicity =
            std::max(rep.max_omega2_multiplicity, static_cast<int>(s2.size()));
    for (const auto& [w1, s3] : acc.omega3_of_omega1)
        rep.max_omega3_multiplicity =
            std::max(rep.max_omega3_multiplicity, static_cast<int>(s3.size()));
    bool mult_fail = false;
    if (cfg.lemma == "wide")
        mult_fail = rep.max_omega2_multiplicity > cfg.c_diag_ceiling ||
                    rep.max_omega3_multiplicity > cfg.c_diag_ceiling;
    if (cfg.lemma == "small") mult_fail = rep.max_omega3_multiplicity > cfg.c_diag_ceiling;
    if (mult_fail) ++acc.violations;
    rep.violation_count = acc.violations + acc.sign_violations;
    rep.violations = acc.samples;
    if (acc.contributing == 0)
        rep.status = "inconclusive";
    else
        rep.status = rep.violation_count == 0 ? "pass" : "fail";
    return rep;
}

// ---------------------------------------------------------------------------
// Localized product estimates
// ---------------------------------------------------------------------------

namespace {

SpaceTimeField pointwise_mul(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField pa = convert(a, Rep::Physical);
    SpaceTimeField pb = convert(b, Rep::Physical);
    SpaceTimeField out(a.grid(), Rep::Physical);
    const std::int64_t count = out.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) out.data()[i] = pa.data()[i] * pb.data()[i];
    return out;
}

SpaceTimeField dx1(const SpaceTimeField& u) {
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const std::int64_t sp = g.spatial_points();
    std::vector<int> k(g.n());
    for (std::int64_t s = 0; s < sp; ++s) {
        g.spatial_signed(s, k.data());
        const cplx factor(0.0, 2.0 * kPi * k[0] / g.L());
        for (int m = 0; m < g.nt(); ++m) w.data()[std::int64_t(m) * sp + s] *= factor;
    }
    return convert(w, caller);
}

double l1l2_of(const SpaceTimeField& u) {
    SpaceTimeField sf = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const double dxn = std::pow(g.dx(), g.n());
    double acc = 0.0;
    for (int m = 0; m < g.nt(); ++m) {
        double slice = 0.0;
        for (std::int64_t s = 0; s < g.spatial_points(); ++s) slice += std::norm(sf.at(m, s));
        acc += std::sqrt(slice * dxn) * g.dt();
    }
    return acc;
}

double linfl2_of(const SpaceTimeField& u) {
    SpaceTimeField sf = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const double dxn = std::pow(g.dx(), g.n());
    double mx = 0.0;
    for (int m = 0; m < g.nt(); ++m) {
        double slice = 0.0;
        for (std::int64_t s = 0; s < g.spatial_points(); ++s) slice += std::norm(sf.at(m, s));
        mx = std::max(mx, slice);
    }
    return std::sqrt(mx * dxn);
}

double l2l2_of(const SpaceTimeField& u) {
    return l2_coeff_norm(u) * std::sqrt(u.grid().cell_measure());
}

}  // namespace

EstimateReport product_estimate_check(const GridSpec& g, const ProductCheckConfig& cfg,
                                      const EnsembleSpec& es) {
    EstimateReport rep;
    rep.id = "product_" + cfg.kind;
    rep.params = {{"lambda", cfg.lambda}, {"mu", cfg.mu}, {"d", cfg.d},
                  {"c", cfg.c},           {"n", double(g.n())}};
    const double lam = cfg.lambda, mu = cfg.mu, c = cfg.c;
    const int n = g.n();
    const DyadicLadder st = frequency_shells(g);
    const DyadicLadder cl = cone_shells(g);
    if (cfg.kind == "HH") {
        if (!(lam <= 2.0 * mu && mu <= 2.0 * lam))
            throw config_error("product HH: requires mu ~ lambda");
    } else {
        if (!(8.0 * mu <= lam)) throw config_error("product " + cfg.kind + ": requires mu << lambda");
    }

    auto cap_ok = [&](const int* k, int cap) {
        if (cap <= 0) return true;
        for (int a = 0; a < n; ++a)
            if (std::abs(k[a]) > cap) return false;
        return true;
    };

    auto shell_pred = [&](double lo, int cap, double mod_hi, double mod_lo, int dclass) {
        const int idx = st.index_of(lo);
        if (idx < 0) throw config_error("product check: shell unresolvable");
        return [&, idx, cap, mod_hi, mod_lo, dclass](double tau, double xi2, const int* k) {
            if (!cap_ok(k, cap)) return false;
            const double r2 = tau * tau + xi2;
            if (r2 == 0.0 || st.classify(std::sqrt(r2)) != idx) return false;
            const bool cone = lattice::on_cone(tau, xi2);
            const double mod = cone ? 0.0 : std::fabs(std::fabs(tau) - std::sqrt(xi2));
            if (dclass >= 0) return !cone && cl.classify(mod) == dclass;
            if (mod_hi > 0.0 && !(mod < mod_hi)) return false;
            if (mod_lo > 0.0 && !(mod >= mod_lo)) return false;
            return true;
        };
    };

    for (int i = 0; i < es.count; ++i) {
        double lhs = 0.0, rhs = 0.0;
        if (cfg.kind == "HH") {
            auto u = random_field(g, es, 2 * i, shell_pred(mu, cfg.kmax_factor_u, 0.0, 0.0, -1));
            auto v =
                random_field(g, es, 2 * i + 1, shell_pred(mu, cfg.kmax_factor_v, 0.0, 0.0, -1));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            SpaceTimeField out = apply(shell_symbol(g, lam), prod);
            lhs = l1l2_of(out);
            rhs = std::pow(mu, n / 2.0) * f_lambda_norm(u, mu) * f_lambda_norm(v, mu);
        } else if (cfg.kind == "HL-A") {
            auto u = random_field(g, es, 2 * i, shell_pred(mu, cfg.kmax_factor_u, 0.0, 0.0, -1));
            auto v = random_field(g, es, 2 * i + 1,
                                  shell_pred(lam, cfg.kmax_factor_v, 0.0, c * mu, -1));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            SpaceTimeField out = apply(shell_symbol(g, lam), prod);
            lhs = l1l2_of(out);
            rhs = lam * std::pow(mu, (n - 2) / 2.0) * f_lambda_norm(u, mu) * f_lambda_norm(v, lam);
        } else if (cfg.kind == "HL-B") {
            auto u = random_field(g, es, 2 * i, shell_pred(mu, cfg.kmax_factor_u, 0.0, 0.0, -1));
            auto v = random_field(g, es, 2 * i + 1,
                                  shell_pred(lam, cfg.kmax_factor_v, c * mu, 0.0, -1));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            CompositeSpec bspec;
            bspec.lambda = lam;
            bspec.cone = ConeMode::Ge;
            bspec.d = c * mu;
            SpaceTimeField B = apply(composite_symbol(g, bspec), prod);
            SpaceTimeField xiB = xi_inverse(B, c * mu / 2.0);
            lhs = std::max(x_half_norm(xiB, lam, 1.0), linfl2_of(xiB));
            rhs = std::pow(mu, (n - 2) / 2.0) * f_lambda_norm(u, mu) * f_lambda_norm(v, lam);
        } else if (cfg.kind == "C_I") {
            const int dc = cl.index_of(cfg.d);
            if (dc < 0) throw config_error("product C_I: d unresolvable");
            auto u = random_field(g, es, 2 * i,
                                  shell_pred(mu, cfg.kmax_factor_u, 2.0 * cfg.d, 0.0, -1));
            auto v = random_field(g, es, 2 * i + 1,
                                  shell_pred(lam, cfg.kmax_factor_v, 2.0 * cfg.d, 0.0, -1));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            CompositeSpec ospec;
            ospec.lambda = lam;
            ospec.cone = ConeMode::Eq;
            ospec.d = cfg.d;
            SpaceTimeField out = apply(composite_symbol(g, ospec), prod);
            SpaceTimeField xiout = xi_inverse(out, cfg.d / 2.0);
            lhs = l2l2_of(xiout);
            rhs = std::pow(cfg.d, -0.5) * std::pow(mu, (n - 2) / 2.0) *
                  std::pow(cfg.d / mu, (n - 5) / 4.0) * f_lambda_norm(u, mu) *
                  f_lambda_norm(v, lam);
        } else if (cfg.kind == "C_II") {
            const int dc = cl.index_of(cfg.d);
            if (dc < 0) throw config_error("product C_II: d unresolvable");
            auto u = random_field(g, es, 2 * i,
                                  shell_pred(mu, cfg.kmax_factor_u, 2.0 * cfg.d, 0.0, -1));
            auto v =
                random_field(g, es, 2 * i + 1, shell_pred(lam, cfg.kmax_factor_v, 0.0, 0.0, dc));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            CompositeSpec ospec;
            ospec.lambda = lam;
            ospec.cone = ConeMode::Lt;
            ospec.d = cfg.d;
            SpaceTimeField out = apply(composite_symbol(g, ospec), prod);
            lhs = l1l2_of(out);
            rhs = lam * std::pow(mu, (n - 2) / 2.0) * std::pow(cfg.d / mu, (n - 5) / 4.0) *
                  f_lambda_norm(u, mu) * f_lambda_norm(v, lam);
        } else if (cfg.kind == "C_III") {
            const int dc = cl.index_of(cfg.d);
            if (dc < 0) throw config_error("product C_III: d unresolvable");
            const double thr = std::min(c * mu, cfg.d);
            auto u =
                random_field(g, es, 2 * i, shell_pred(mu, cfg.kmax_factor_u, 0.0, 0.0, dc));
            auto v = random_field(g, es, 2 * i + 1,
                                  shell_pred(lam, cfg.kmax_factor_v, thr, 0.0, -1));
            SpaceTimeField prod = pointwise_mul(u, dx1(v));
            CompositeSpec ospec;
            ospec.lambda = lam;
            ospec.cone = ConeMode::Lt;
            ospec.d = thr;
            SpaceTimeField out = apply(composite_symbol(g, ospec), prod);
            lhs = l1l2_of(out);
            rhs = lam * z_square_sum(u, mu, cfg.d, false) * f_lambda_norm(v, lam);
        } else {
            throw config_error("unknown product estimate kind: " + cfg.kind);
        }
        if (rhs > 0.0) rep.ratios.push_back(lhs / rhs);
    }
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

namespace {
std::string params_string(const std::vector<std::pair<std::string, double>>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out += ';';
        out += k + "=" + format_double(v);
    }
    return out;
}
}  // namespace

void write_estimate_report_csv(const std::string& path,
                               const std::vector<EstimateReport>& reports) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "id,params,samples,max_ratio,median_ratio,ceiling,pass\n";
    for (const auto& r : reports) {
        out << r.id << ',' << params_string(r.params) << ',' << r.ratios.size() << ','
            << format_double(r.max_ratio) << ',' << format_double(r.median_ratio) << ','
            << format_double(r.ceiling) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

void write_estimate_report_json(const std::string& path, const std::vector<EstimateReport>& reports,
                                const std::string& resolved_config) {
    nlohmann::json j;
    j["config"] = resolved_config.empty() ? nlohmann::json(nullptr)
                                          : nlohmann::json::parse(resolved_config);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json e;
        e["id"] = r.id;
        for (const auto& [k, v] : r.params) e["params"][k] = v;
        e["ratios"] = r.ratios;
        e["max_ratio"] = r.max_ratio;
        e["median_ratio"] = r.median_ratio;
        if (!std::isnan(r.ceiling)) e["ceiling"] = r.ceiling;
        e["pass"] = r.pass;
        if (r.warned) e["note"] = r.note;
        arr.push_back(e);
    }
    j["estimates"] = arr;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

void write_support_report_csv(const std::string& path,
                              const std::vector<SupportCheckReport>& reports) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "lemma,params,pairs_examined,contributing,violations,c_ang,omega2_mult,omega3_mult,"
           "max_out_mod_over_mu,sign_violations,status\n";
    for (const auto& r : reports) {
        out << r.lemma << ',' << params_string(r.params) << ',' << r.pairs_examined << ','
            << r.contributing << ',' << r.violation_count << ',' << format_double(r.c_ang_measured)
            << ',' << r.max_omega2_multiplicity << ',' << r.max_omega3_multiplicity << ','
            << format_double(r.max_out_mod_over_mu) << ',' << r.sign_violations << ',' << r.status
            << '\n';
    }
}

void write_support_report_json(const std::string& path,
                               const std::vector<SupportCheckReport>& reports,
                               const std::string& resolved_config) {
    nlohmann::json j;
    j["config"] = resolved_config.empty() ? nlohmann::json(nullptr)
                                          : nlohmann::json::parse(resolved_config);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json e;
        e["lemma"] = r.lemma;
        for (const auto& [k, v] : r.params) e["params"][k] = v;
        e["pairs_examined"] = r.pairs_examined;
        e["contributing"] = r.contributing;
        e["violations"] = r.violation_count;
        e["c_ang"] = r.c_ang_measured;
        e["omega2_multiplicity"] = r.max_omega2_multiplicity;
        e["omega3_multiplicity"] = r.max_omega3_multiplicity;
        e["max_out_mod_over_mu"] = r.max_out_mod_over_mu;
        e["sign_violations"] = r.sign_violations;
        e["status"] = r.status;
        nlohmann::json vs = nlohmann::json::array();
        for (const auto& v : r.violations) {
            vs.push_back({{"what", v.what}, {"taup", v.taup}, {"tau", v.tau},
                          {"xip", v.xip}, {"xi", v.xi}});
        }
        e["violation_samples"] = vs;
        arr.push_back(e);
    }
    j["support_checks"] = arr;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace lpwave
