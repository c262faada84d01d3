#include "lpwave/wave.hpp"

#include <cmath>
#include <numbers>

#include "lpwave/parallel.hpp"
#include "lpwave/transforms.hpp"

namespace lpwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double k2Pi = 2.0 * std::numbers::pi;

double box_symbol(double tau, double xi2) { return 4.0 * kPi * kPi * (tau * tau - xi2); }

}  // namespace

SpaceTimeField propagate(const SpatialField& f, const SpatialField& g) {
    if (!(f.grid() == g.grid())) throw contract_error("propagate: Cauchy data grids differ");
    const GridSpec& grid = f.grid();
    SpatialField fh = convert(f, SpatialField::SRep::Fourier);
    SpatialField gh = convert(g, SpatialField::SRep::Fourier);
    SpaceTimeField out(grid, Rep::SpatialFourier);
    const std::int64_t sp = grid.spatial_points();
    const int nt = grid.nt();
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = k2Pi * std::sqrt(grid.xi_norm_sq(s));
        const cplx fv = fh.data()[s];
        const cplx gv = gh.data()[s];
        for (int m = 0; m < nt; ++m) {
            const double t = m * grid.dt();
            out.data()[std::int64_t(m) * sp + s] =
                a == 0.0 ? fv + t * gv : std::cos(a * t) * fv + std::sin(a * t) / a * gv;
        }
    }
    return out;
}

SpaceTimeField propagate_dt(const SpatialField& f, const SpatialField& g) {
    if (!(f.grid() == g.grid())) throw contract_error("propagate_dt: Cauchy data grids differ");
    const GridSpec& grid = f.grid();
    SpatialField fh = convert(f, SpatialField::SRep::Fourier);
    SpatialField gh = convert(g, SpatialField::SRep::Fourier);
    SpaceTimeField out(grid, Rep::SpatialFourier);
    const std::int64_t sp = grid.spatial_points();
    const int nt = grid.nt();
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = k2Pi * std::sqrt(grid.xi_norm_sq(s));
        const cplx fv = fh.data()[s];
        const cplx gv = gh.data()[s];
        for (int m = 0; m < nt; ++m) {
            const double t = m * grid.dt();
            out.data()[std::int64_t(m) * sp + s] =
                a == 0.0 ? gv : -a * std::sin(a * t) * fv + std::cos(a * t) * gv;
        }
    }
    return out;
}

SpaceTimeField half_wave(const SpatialField& u, int sign) {
    const GridSpec& grid = u.grid();
    SpatialField uh = convert(u, SpatialField::SRep::Fourier);
    SpaceTimeField out(grid, Rep::SpatialFourier);
    const std::int64_t sp = grid.spatial_points();
    const int nt = grid.nt();
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = k2Pi * std::sqrt(grid.xi_norm_sq(s));
        const cplx uv = uh.data()[s];
        for (int m = 0; m < nt; ++m) {
            const double t = m * grid.dt();
            out.data()[std::int64_t(m) * sp + s] = std::polar(1.0, sign * a * t) * uv;
        }
    }
    return out;
}

SpaceTimeField duhamel_inverse(const SpaceTimeField& F) {
    SpaceTimeField Fh = convert(F, Rep::SpatialFourier);
    const GridSpec& grid = F.grid();
    SpaceTimeField out(grid, Rep::SpatialFourier);
    const std::int64_t sp = grid.spatial_points();
    const int nt = grid.nt();
    const double dt = grid.dt();
#pragma omp parallel
    {
        std::vector<cplx> pc(nt), ps(nt);  // trapezoidal prefix integrals
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < sp; ++s) {
            const double a = k2Pi * std::sqrt(grid.xi_norm_sq(s));
            if (a == 0.0) {
                // kernel -(t - s): u(t) = -(t P(t) - Q(t)) with P = int F,
                // Q = int s F.
                cplx P = 0.0, Q = 0.0;
                out.data()[s] = 0.0;
                for (int m = 1; m < nt; ++m) {
                    const double t0 = (m - 1) * dt, t1 = m * dt;
                    const cplx f0 = Fh.data()[std::int64_t(m - 1) * sp + s];
                    const cplx f1 = Fh.data()[std::int64_t(m) * sp + s];
                    P += 0.5 * dt * (f0 + f1);
                    Q += 0.5 * dt * (t0 * f0 + t1 * f1);
                    out.data()[std::int64_t(m) * sp + s] = -(t1 * P - Q);
                }
                continue;
            }
            // sin(a(t-s)) = sin(at)cos(as) - cos(at)sin(as): two prefix sums.
            pc[0] = 0.0;
            ps[0] = 0.0;
            for (int m = 1; m < nt; ++m) {
                const double t0 = (m - 1) * dt, t1 = m * dt;
                const cplx f0 = Fh.data()[std::int64_t(m - 1) * sp + s];
                const cplx f1 = Fh.data()[std::int64_t(m) * sp + s];
                pc[m] = pc[m - 1] + 0.5 * dt * (std::cos(a * t0) * f0 + std::cos(a * t1) * f1);
                ps[m] = ps[m - 1] + 0.5 * dt * (std::sin(a * t0) * f0 + std::sin(a * t1) * f1);
            }
            out.data()[s] = 0.0;
            for (int m = 1; m < nt; ++m) {
                const double t = m * dt;
                out.data()[std::int64_t(m) * sp + s] =
                    -(std::sin(a * t) * pc[m] - std::cos(a * t) * ps[m]) / a;
            }
        }
    }
    return out;
}

namespace ref {
SpaceTimeField duhamel_inverse(const SpaceTimeField& F) {
    SpaceTimeField Fh = convert(F, Rep::SpatialFourier);
    const GridSpec& grid = F.grid();
    SpaceTimeField out(grid, Rep::SpatialFourier);
    const std::int64_t sp = grid.spatial_points();
    const int nt = grid.nt();
    const double dt = grid.dt();
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = k2Pi * std::sqrt(grid.xi_norm_sq(s));
        for (int m = 0; m < nt; ++m) {
            const double t = m * dt;
            cplx acc = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double s0 = (j - 1) * dt, s1 = j * dt;
                const cplx f0 = Fh.data()[std::int64_t(j - 1) * sp + s];
                const cplx f1 = Fh.data()[std::int64_t(j) * sp + s];
                const double k0 = a == 0.0 ? -(t - s0) : -std::sin(a * (t - s0)) / a;
                const double k1 = a == 0.0 ? -(t - s1) : -std::sin(a * (t - s1)) / a;
                acc += 0.5 * dt * (k0 * f0 + k1 * f1);
            }
            out.data()[std::int64_t(m) * sp + s] = acc;
        }
    }
    return out;
}
}  // namespace ref

SpaceTimeField box_apply(const SpaceTimeField& u) {
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpaceTimeFourier);
    const GridSpec& g = u.grid();
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s)
            w.data()[std::int64_t(m) * sp + s] *= box_symbol(tau, g.xi_norm_sq(s));
    }
    return convert(w, caller);
}

SpaceTimeField xi_inverse(const SpaceTimeField& F, double guard) {
    if (!(guard > 0.0)) throw config_error("xi_inverse: guard must be positive");
    const Rep caller = F.rep();
    SpaceTimeField w = convert(F, Rep::SpaceTimeFourier);
    const GridSpec& g = F.grid();
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();

    const double max_abs = reduce_max(
        w.size(), [&](std::int64_t i) { return std::abs(w.data()[i]); });
    const double tol = 1e-12 * max_abs;

    // Guard scan before any division.
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s) {
            const double xi2 = g.xi_norm_sq(s);
            const double mod = std::fabs(std::fabs(tau) - std::sqrt(xi2));
            if (mod < guard) {
                const cplx v = w.data()[std::int64_t(m) * sp + s];
                if (std::abs(v) > tol) {
                    FreqPoint p = g.frequency_of_spatial(s, m);
                    std::string xi = "(";
                    for (std::size_t a = 0; a < p.xi.size(); ++a)
                        xi += (a ? "," : "") + std::to_string(p.xi[a]);
                    xi += ")";
                    throw contract_error(
                        "xi_inverse: support touches light cone at tau=" + std::to_string(p.tau) +
                        " xi=" + xi + " (|coeff| = " + std::to_string(std::abs(v)) + ")");
                }
            }
        }
    }

#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s) {
            const double xi2 = g.xi_norm_sq(s);
            const double mod = std::fabs(std::fabs(tau) - std::sqrt(xi2));
            cplx& v = w.data()[std::int64_t(m) * sp + s];
            if (mod < guard)
                v = 0.0;
            else
                v /= box_symbol(tau, xi2);
        }
    }
    return convert(w, caller);
}

SpaceTimeField time_derivative_spectral(const SpaceTimeField& u) {
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpaceTimeFourier);
    const GridSpec& g = u.grid();
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        const cplx factor(0.0, k2Pi * g.tau_of(m));
        for (std::int64_t s = 0; s < sp; ++s) w.data()[std::int64_t(m) * sp + s] *= factor;
    }
    return convert(w, caller);
}

std::pair<SpatialField, SpatialField> cauchy_data(const SpaceTimeField& u) {
    SpaceTimeField usf = convert(u, Rep::SpatialFourier);
    SpaceTimeField dt = time_derivative_spectral(u);
    dt = convert(dt, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    SpatialField f(g, SpatialField::SRep::Fourier);
    SpatialField v(g, SpatialField::SRep::Fourier);
    const std::int64_t sp = g.spatial_points();
    for (std::int64_t s = 0; s < sp; ++s) {
        f.data()[s] = usf.data()[s];
        v.data()[s] = dt.data()[s];
    }
    return {f, v};
}

FDecomposition f_decompose(const SpaceTimeField& u, double lambda) {
    const GridSpec& g = u.grid();
    SpaceTimeField ust = convert(u, Rep::SpaceTimeFourier);
    ShellBreakdown b = shell_breakdown(ust, lambda);

    const DyadicLadder st_lad = frequency_shells(g);
    const DyadicLadder cone_lad = cone_shells(g);
    const int idx = st_lad.index_of(lambda);
    if (idx < 0) throw config_error("f_decompose: lambda outside the grid's resolvable range");

    SpaceTimeField freep(g, Rep::SpaceTimeFourier);
    SpaceTimeField xpart(g, Rep::SpaceTimeFourier);
    SpaceTimeField ypart(g, Rep::SpaceTimeFourier);
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s) {
            const cplx v = ust.data()[std::int64_t(m) * sp + s];
            if (v == cplx(0.0)) continue;
            const double xi2 = g.xi_norm_sq(s);
            const double r2 = tau * tau + xi2;
            if (r2 == 0.0 || st_lad.classify(std::sqrt(r2)) != idx) continue;
            const std::int64_t at = std::int64_t(m) * sp + s;
            if (lattice::on_cone(tau, xi2)) {
                freep.data()[at] = v;
            } else {
                const double mod = std::fabs(std::fabs(tau) - std::sqrt(xi2));
                const int dc = cone_lad.classify(mod);
                if (b.x_chosen[dc])
                    xpart.data()[at] = v;
                else
                    ypart.data()[at] = v;
            }
        }
    }

    // Cauchy-zeroing correction: the Y part is regenerated from its source by
    // the causal Duhamel integral; the discarded free component joins the
    // free part so the three pieces still sum to S_lambda u exactly.
    SpaceTimeField ypart_sf = convert(ypart, Rep::SpatialFourier);
    SpaceTimeField corrected = duhamel_inverse(box_apply(ypart_sf));
    SpaceTimeField discarded = axpy(ypart_sf, corrected, 1.0, -1.0);
    FDecomposition out{axpy(convert(freep, Rep::SpatialFourier), discarded, 1.0, 1.0),
                       convert(xpart, Rep::SpatialFourier), corrected};
    return out;
}

double TraceFamily::l1_l2() const {
    double acc = 0.0;
    for (const auto& [bin, field] : samples) acc += spatial_l2(field) * ds();
    return acc;
}

TraceFamily trace_decompose(const SpaceTimeField& u, double lambda, int sign) {
    if (sign != 1 && sign != -1) throw config_error("trace_decompose: sign must be +1 or -1");
    const GridSpec& g = u.grid();
    SpaceTimeField ust = convert(u, Rep::SpaceTimeFourier);
    const DyadicLadder st_lad = frequency_shells(g);
    const int idx = st_lad.index_of(lambda);
    if (idx < 0) throw config_error("trace_decompose: lambda outside the grid's resolvable range");

    // Contract: no mass in the opposite half-space (within the shell).
    double shell_mass = 0.0, wrong_half = 0.0;
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        for (std::int64_t s = 0; s < sp; ++s) {
            const double a = std::norm(ust.data()[std::int64_t(m) * sp + s]);
            if (a == 0.0) continue;
            const double r2 = tau * tau + g.xi_norm_sq(s);
            if (r2 == 0.0 || st_lad.classify(std::sqrt(r2)) != idx) continue;
            shell_mass += a;
            if (sign * tau <= 0.0) wrong_half += a;
        }
    }
    if (shell_mass > 0.0 && wrong_half > 1e-24 * shell_mass)
        throw contract_error("trace_decompose: field has mass in the opposite tau half-space");

    TraceFamily tf{sign, lambda, g, {}};
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        if (sign * tau <= 0.0) continue;
        for (std::int64_t s = 0; s < sp; ++s) {
            const cplx v = ust.data()[std::int64_t(m) * sp + s];
            if (v == cplx(0.0)) continue;
            const double r2 = tau * tau + g.xi_norm_sq(s);
            if (r2 == 0.0 || st_lad.classify(std::sqrt(r2)) != idx) continue;
            const double sval = tau - sign * std::sqrt(g.xi_norm_sq(s));
            const int bin = static_cast<int>(std::lround(sval * g.T()));
            auto it = tf.samples.find(bin);
            if (it == tf.samples.end())
                it = tf.samples.emplace(bin, SpatialField(g, SpatialField::SRep::Fourier)).first;
            it->second.data()[s] = v;
        }
    }
    return tf;
}

SpaceTimeField trace_reconstruct(const TraceFamily& tf) {
    const GridSpec& g = tf.grid;
    SpaceTimeField out(g, Rep::SpaceTimeFourier);
    const DyadicLadder st_lad = frequency_shells(g);
    const int idx = st_lad.index_of(tf.lambda);
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    for (int m = 0; m < nt; ++m) {
        const double tau = g.tau_of(m);
        if (tf.sign * tau <= 0.0) continue;
        for (std::int64_t s = 0; s < sp; ++s) {
            const double r2 = tau * tau + g.xi_norm_sq(s);
            if (r2 == 0.0 || st_lad.classify(std::sqrt(r2)) != idx) continue;
            const double sval = tau - tf.sign * std::sqrt(g.xi_norm_sq(s));
            const int bin = static_cast<int>(std::lround(sval * g.T()));
            auto it = tf.samples.find(bin);
            if (it == tf.samples.end()) continue;
            out.data()[std::int64_t(m) * sp + s] = it->second.data()[s];
        }
    }
    return out;
}

}  // namespace lpwave
