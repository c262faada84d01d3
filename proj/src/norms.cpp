#include "lpwave/norms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "lpwave/parallel.hpp"
#include "lpwave/transforms.hpp"

namespace lpwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

bool is_inf(double v) { return std::isinf(v); }

double box_symbol_value(double tau, double xi2) {
    // Box = -d_t^2 + Laplacian; symbol 4 pi^2 (tau^2 - |xi|^2).
    return 4.0 * kPi * kPi * (tau * tau - xi2);
}

struct STContext {
    const SpaceTimeField* u;
    DyadicLadder st_lad;
    DyadicLadder cone_lad;
    std::vector<double> xi2;  // per spatial index

    explicit STContext(const SpaceTimeField& ust)
        : u(&ust), st_lad(frequency_shells(ust.grid())), cone_lad(cone_shells(ust.grid())) {
        const GridSpec& g = ust.grid();
        xi2.resize(static_cast<std::size_t>(g.spatial_points()));
        const std::int64_t sp = g.spatial_points();
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < sp; ++i) xi2[i] = g.xi_norm_sq(i);
    }

    int shell_of(double tau, double x2) const {
        const double r2 = tau * tau + x2;
        if (r2 == 0.0) return -1;
        return st_lad.classify(std::sqrt(r2));
    }
    // -2 = residue (exactly on the cone), else cone ladder class.
    int dclass_of(double tau, double x2) const {
        if (lattice::on_cone(tau, x2)) return -2;
        const double mod = std::fabs(std::fabs(tau) - std::sqrt(x2));
        return cone_lad.classify(mod);
    }
};

/// Mass per (shell, cone class) plus residue and totals, one slice-parallel
/// pass, combined in slice order.
struct MassTables {
    std::vector<std::vector<double>> d_mass;  // [shell][dclass]
    std::vector<double> residue;              // [shell]
    std::vector<double> total;                // [shell]
};

MassTables mass_tables(const STContext& ctx) {
    const GridSpec& g = ctx.u->grid();
    const int nshell = static_cast<int>(ctx.st_lad.size());
    const int nd = static_cast<int>(ctx.cone_lad.size());
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    std::vector<MassTables> per_slice(nt);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        MassTables t;
        t.d_mass.assign(nshell, std::vector<double>(nd, 0.0));
        t.residue.assign(nshell, 0.0);
        t.total.assign(nshell, 0.0);
        const double tau = g.tau_of(m);
        const cplx* row = ctx.u->data().data() + std::int64_t(m) * sp;
        for (std::int64_t s = 0; s < sp; ++s) {
            const double a = std::norm(row[s]);
            if (a == 0.0) continue;
            const int sh = ctx.shell_of(tau, ctx.xi2[s]);
            if (sh < 0) continue;
            t.total[sh] += a;
            const int dc = ctx.dclass_of(tau, ctx.xi2[s]);
            if (dc == -2)
                t.residue[sh] += a;
            else if (dc >= 0)
                t.d_mass[sh][dc] += a;
        }
        per_slice[m] = std::move(t);
    }
    MassTables out;
    out.d_mass.assign(nshell, std::vector<double>(nd, 0.0));
    out.residue.assign(nshell, 0.0);
    out.total.assign(nshell, 0.0);
    for (int m = 0; m < nt; ++m) {
        for (int sh = 0; sh < nshell; ++sh) {
            out.residue[sh] += per_slice[m].residue[sh];
            out.total[sh] += per_slice[m].total[sh];
            for (int dc = 0; dc < nd; ++dc) out.d_mass[sh][dc] += per_slice[m].d_mass[sh][dc];
        }
    }
    return out;
}

/// Columns (spatial indices) carrying any shell-lambda mass.
std::vector<std::int64_t> shell_columns(const STContext& ctx, int shell_idx) {
    const GridSpec& g = ctx.u->grid();
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(sp), 0);
    std::vector<std::vector<std::uint8_t>> slice_mask(nt);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        std::vector<std::uint8_t> local(static_cast<std::size_t>(sp), 0);
        const double tau = g.tau_of(m);
        const cplx* row = ctx.u->data().data() + std::int64_t(m) * sp;
        for (std::int64_t s = 0; s < sp; ++s) {
            if (row[s] == cplx(0.0, 0.0)) continue;
            if (ctx.shell_of(tau, ctx.xi2[s]) == shell_idx) local[s] = 1;
        }
        slice_mask[m] = std::move(local);
    }
    for (int m = 0; m < nt; ++m)
        for (std::int64_t s = 0; s < sp; ++s) mask[s] |= slice_mask[m][s];
    std::vector<std::int64_t> cols;
    for (std::int64_t s = 0; s < sp; ++s)
        if (mask[s]) cols.push_back(s);
    return cols;
}

/// L^q(L^2) of masked columns: values[c * nt + m] are spatial-Fourier
/// coefficients per time; the spatial L^2 is Plancherel over columns.
double lq_l2_from_columns(const GridSpec& g, const std::vector<cplx>& values,
                          std::int64_t ncols, double q) {
    const int nt = g.nt();
    const double dxn = std::pow(g.dx(), g.n());
    std::vector<double> per_t(nt, 0.0);
    const int chunks = static_cast<int>(std::min<std::int64_t>(128, std::max<std::int64_t>(ncols, 1)));
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(nt, 0.0));
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        for (std::int64_t col = ncols * c / chunks; col < ncols * (c + 1) / chunks; ++col)
            for (int m = 0; m < nt; ++m) partial[c][m] += std::norm(values[col * nt + m]);
    }
    for (int c = 0; c < chunks; ++c)
        for (int m = 0; m < nt; ++m) per_t[m] += partial[c][m];
    if (is_inf(q)) {
        double mx = 0.0;
        for (int m = 0; m < nt; ++m) mx = std::max(mx, per_t[m]);
        return std::sqrt(mx * dxn);
    }
    double acc = 0.0;
    for (int m = 0; m < nt; ++m) acc += std::pow(std::sqrt(per_t[m] * dxn), q) * g.dt();
    return std::pow(acc, 1.0 / q);
}

struct ShellMask {
    const STContext* ctx;
    int shell_idx;
    int dclass = -3;  // -3: all classes incl. residue; -2: residue only; >=0: that class
    bool invert_xi = false;

    cplx operator()(int m, std::int64_t col) const {
        const double tau = ctx->u->grid().tau_of(m);
        const double x2 = ctx->xi2[col];
        if (ctx->shell_of(tau, x2) != shell_idx) return 0.0;
        if (dclass == -2) return lattice::on_cone(tau, x2) ? cplx(1.0) : cplx(0.0);
        if (dclass >= 0 && ctx->dclass_of(tau, x2) != dclass) return 0.0;
        if (invert_xi) return 1.0 / box_symbol_value(tau, x2);
        return 1.0;
    }
};

struct BoxShellMask {
    ShellMask base;
    cplx operator()(int m, std::int64_t col) const {
        const cplx v = base(m, col);
        if (v == cplx(0.0)) return v;
        return v * box_symbol_value(base.ctx->u->grid().tau_of(m), base.ctx->xi2[col]);
    }
};

ShellBreakdown breakdown_impl(const STContext& ctx, double lambda, const MassTables& mt) {
    const GridSpec& g = ctx.u->grid();
    const int idx = ctx.st_lad.index_of(lambda);
    if (idx < 0) throw config_error("shell norms: lambda outside the grid's resolvable range");
    ShellBreakdown b;
    b.lambda = lambda;
    b.shell_mass = mt.total[idx];
    const double cm = g.cell_measure();
    b.residue_l2 = std::sqrt(mt.residue[idx] * cm);

    if (b.shell_mass == 0.0) {
        b.d_values = ctx.cone_lad.values();
        b.x_route.assign(b.d_values.size(), 0.0);
        b.y_route.assign(b.d_values.size(), 0.0);
        b.x_chosen.assign(b.d_values.size(), true);
        return b;
    }

    const std::vector<std::int64_t> cols = shell_columns(ctx, idx);

    // L^inf(L^2) of the full shell (residue included).
    {
        ShellMask mask{&ctx, idx, -3, false};
        auto vals = time_inverse_on_columns(*ctx.u, cols, mask);
        b.linf_l2 = lq_l2_from_columns(g, vals, static_cast<std::int64_t>(cols.size()), kInf);
    }

    b.d_values = ctx.cone_lad.values();
    const int nd = static_cast<int>(b.d_values.size());
    b.x_route.assign(nd, 0.0);
    b.y_route.assign(nd, 0.0);
    b.x_chosen.assign(nd, true);
    for (int dc = 0; dc < nd; ++dc) {
        if (mt.d_mass[idx][dc] == 0.0) continue;
        const double d = b.d_values[dc];
        b.x_route[dc] = std::sqrt(d) * std::sqrt(mt.d_mass[idx][dc] * cm);
        BoxShellMask mask{{&ctx, idx, dc, false}};
        auto vals = time_inverse_on_columns(*ctx.u, cols, mask);
        b.y_route[dc] =
            lq_l2_from_columns(g, vals, static_cast<std::int64_t>(cols.size()), 1.0) / lambda;
        b.x_chosen[dc] = b.x_route[dc] <= b.y_route[dc];
    }
    return b;
}

SpaceTimeField as_st(const SpaceTimeField& u) { return convert(u, Rep::SpaceTimeFourier); }

}  // namespace

double mixed_norm(const SpaceTimeField& u, double q, double r) {
    if (u.rep() != Rep::Physical)
        throw contract_error("mixed_norm: field must be in the physical representation");
    if (!(q >= 1.0) || !(r >= 1.0))
        throw config_error("mixed_norm: exponents must lie in [1, inf]");
    const GridSpec& g = u.grid();
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    const double dxn = std::pow(g.dx(), g.n());
    std::vector<double> inner(nt, 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        const cplx* row = u.data().data() + std::int64_t(m) * sp;
        if (is_inf(r)) {
            double mx = 0.0;
            for (std::int64_t s = 0; s < sp; ++s) mx = std::max(mx, std::abs(row[s]));
            inner[m] = mx;
        } else {
            double acc = 0.0;
            for (std::int64_t s = 0; s < sp; ++s) acc += std::pow(std::abs(row[s]), r);
            inner[m] = std::pow(acc * dxn, 1.0 / r);
        }
    }
    if (is_inf(q)) {
        double mx = 0.0;
        for (int m = 0; m < nt; ++m) mx = std::max(mx, inner[m]);
        return mx;
    }
    double acc = 0.0;
    for (int m = 0; m < nt; ++m) acc += std::pow(inner[m], q) * g.dt();
    return std::pow(acc, 1.0 / q);
}

namespace ref {
double mixed_norm(const SpaceTimeField& u, double q, double r) {
    if (u.rep() != Rep::Physical)
        throw contract_error("ref::mixed_norm: field must be physical");
    const GridSpec& g = u.grid();
    const double dxn = std::pow(g.dx(), g.n());
    double outer = 0.0;
    for (int m = 0; m < g.nt(); ++m) {
        double inner = 0.0;
        for (std::int64_t s = 0; s < g.spatial_points(); ++s) {
            const double a = std::abs(u.at(m, s));
            if (is_inf(r))
                inner = std::max(inner, a);
            else
                inner += std::pow(a, r) * dxn;
        }
        const double slice = is_inf(r) ? inner : std::pow(inner, 1.0 / r);
        if (is_inf(q))
            outer = std::max(outer, slice);
        else
            outer += std::pow(slice, q) * g.dt();
    }
    return is_inf(q) ? outer : std::pow(outer, 1.0 / q);
}
}  // namespace ref

double spatial_l2(const SpatialField& f) {
    const double dxn = std::pow(f.grid().dx(), f.grid().n());
    return l2_coeff_norm(f) * std::sqrt(dxn);
}

SchematicParams SchematicParams::make(System sys, int n) {
    SchematicParams p;
    p.system = sys;
    switch (sys) {
        case System::ScalarModel: p.sigma = {1.0}; break;
        case System::WMModel: p.sigma = {0.0}; break;
        case System::YMSchematic: p.sigma = {1.0}; break;
        case System::MDSchematic: p.sigma = {0.5, 1.0}; break;
    }
    for (double s : p.sigma) p.s_c.push_back(n / 2.0 - s);
    return p;
}

SchematicParams SchematicParams::parse(const std::string& name, int n) {
    if (name == "scalar-model") return make(System::ScalarModel, n);
    if (name == "WM-model") return make(System::WMModel, n);
    if (name == "YM-schematic") return make(System::YMSchematic, n);
    if (name == "MD-schematic") return make(System::MDSchematic, n);
    throw config_error("unknown schematic system: " + name);
}

const char* SchematicParams::name() const {
    switch (system) {
        case System::ScalarModel: return "scalar-model";
        case System::WMModel: return "WM-model";
        case System::YMSchematic: return "YM-schematic";
        case System::MDSchematic: return "MD-schematic";
    }
    return "?";
}

double ShellBreakdown::x_half(double p) const {
    if (is_inf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < d_values.size(); ++i) mx = std::max(mx, x_route[i]);
        return mx;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < d_values.size(); ++i) acc += std::pow(x_route[i], p);
    return std::pow(acc, 1.0 / p);
}

double ShellBreakdown::sum_min() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < d_values.size(); ++i) acc += std::min(x_route[i], y_route[i]);
    return acc;
}

ShellBreakdown shell_breakdown(const SpaceTimeField& u, double lambda) {
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    return breakdown_impl(ctx, lambda, mass_tables(ctx));
}

double x_half_norm(const SpaceTimeField& u, double lambda, double p) {
    if (!(p == 1.0 || p == 2.0 || is_inf(p)))
        throw config_error("x_half_norm: p must be 1, 2 or infinity");
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    const int idx = ctx.st_lad.index_of(lambda);
    if (idx < 0) throw config_error("x_half_norm: lambda outside the grid's resolvable range");
    MassTables mt = mass_tables(ctx);
    const double cm = u.grid().cell_measure();
    if (is_inf(p)) {
        double mx = 0.0;
        for (std::size_t dc = 0; dc < ctx.cone_lad.size(); ++dc)
            mx = std::max(mx, std::sqrt(ctx.cone_lad[dc]) * std::sqrt(mt.d_mass[idx][dc] * cm));
        return mx;
    }
    double acc = 0.0;
    for (std::size_t dc = 0; dc < ctx.cone_lad.size(); ++dc)
        acc += std::pow(std::sqrt(ctx.cone_lad[dc]) * std::sqrt(mt.d_mass[idx][dc] * cm), p);
    return std::pow(acc, 1.0 / p);
}

double y_norm(const SpaceTimeField& u, double lambda) {
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    const int idx = ctx.st_lad.index_of(lambda);
    if (idx < 0) throw config_error("y_norm: lambda outside the grid's resolvable range");
    const std::vector<std::int64_t> cols = shell_columns(ctx, idx);
    if (cols.empty()) return 0.0;
    BoxShellMask mask{{&ctx, idx, -3, false}};
    auto vals = time_inverse_on_columns(ust, cols, mask);
    return lq_l2_from_columns(u.grid(), vals, static_cast<std::int64_t>(cols.size()), 1.0) / lambda;
}

double z_square_sum(const SpaceTimeField& u, double lambda, double d, bool invert_xi) {
    const GridSpec& g = u.grid();
    if (g.n() < 2)
        throw config_error("z norms: unsupported dimension n = 1 (no angular structure)");
    const double delta = std::sqrt(lambda * d);
    if (delta > lambda) throw std::domain_error("z_square_sum: (lambda d)^{1/2} exceeds lambda");
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    const int idx = ctx.st_lad.index_of(lambda);
    if (idx < 0) throw config_error("z_square_sum: lambda outside the grid's resolvable range");
    const int dc = ctx.cone_lad.index_of(d);
    if (dc < 0) throw config_error("z_square_sum: d outside the grid's resolvable range");

    AngularSectorSet sectors(g.n(), lambda, delta);
    auto table = sectors.assign_table(g, lambda * lambda / 4.0, 16.0 * lambda * lambda);

    // Group occupied columns by sector.
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(sp), 0);
    std::vector<std::vector<std::uint8_t>> slice_mask(nt);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        std::vector<std::uint8_t> local(static_cast<std::size_t>(sp), 0);
        const double tau = g.tau_of(m);
        const cplx* row = ust.data().data() + std::int64_t(m) * sp;
        for (std::int64_t s = 0; s < sp; ++s) {
            if (row[s] == cplx(0.0, 0.0) || (*table)[s] < 0) continue;
            if (ctx.shell_of(tau, ctx.xi2[s]) != idx) continue;
            if (ctx.dclass_of(tau, ctx.xi2[s]) != dc) continue;
            local[s] = 1;
        }
        slice_mask[m] = std::move(local);
    }
    for (int m = 0; m < nt; ++m)
        for (std::int64_t s = 0; s < sp; ++s) mask[s] |= slice_mask[m][s];

    std::vector<std::vector<std::int64_t>> sector_cols(sectors.count());
    for (std::int64_t s = 0; s < sp; ++s)
        if (mask[s]) sector_cols[(*table)[s]].push_back(s);

    // Per occupied sector: time-inverse the masked columns, then per time
    // slice a scatter + spatial FFT gives sup_x of the physical field.
    std::vector<int> spatial_dims(static_cast<std::size_t>(g.n()), g.nx());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        std::vector<cplx> a(sp), b(sp);
        plan = fftw_plan_dft(g.n(), spatial_dims.data(), reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    const double phys_scale = 1.0 / std::sqrt(double(sp));
    double sq = 0.0;
    for (int omega = 0; omega < sectors.count(); ++omega) {
        const auto& cols = sector_cols[omega];
        if (cols.empty()) continue;
        ShellMask wmask{&ctx, idx, dc, invert_xi};
        auto vals = time_inverse_on_columns(ust, cols, wmask);
        std::vector<double> per_t(nt, 0.0);
#pragma omp parallel
        {
            std::vector<cplx> buf(sp), phys(sp);
#pragma omp for schedule(static)
            for (int m = 0; m < nt; ++m) {
                std::fill(buf.begin(), buf.end(), cplx(0.0));
                for (std::size_t c = 0; c < cols.size(); ++c) buf[cols[c]] = vals[c * nt + m];
                fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                                 reinterpret_cast<fftw_complex*>(phys.data()));
                double mx = 0.0;
                for (std::int64_t s = 0; s < sp; ++s) mx = std::max(mx, std::abs(phys[s]));
                per_t[m] = mx * phys_scale;
            }
        }
        double l1linf = 0.0;
        for (int m = 0; m < nt; ++m) l1linf += per_t[m] * g.dt();
        sq += l1linf * l1linf;
    }
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return std::sqrt(sq);
}

double z_norm(const SpaceTimeField& u, double lambda) {
    const GridSpec& g = u.grid();
    if (g.n() < 2)
        throw config_error("z_norm: unsupported dimension n = 1 (no angular structure)");
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    const int idx = ctx.st_lad.index_of(lambda);
    if (idx < 0) throw config_error("z_norm: lambda outside the grid's resolvable range");
    MassTables mt = mass_tables(ctx);
    double acc = 0.0;
    for (std::size_t dc = 0; dc < ctx.cone_lad.size(); ++dc) {
        const double d = ctx.cone_lad[dc];
        if (d > lambda) break;  // sector width (lambda d)^{1/2} capped at lambda
        if (mt.d_mass[idx][dc] == 0.0) continue;
        acc += z_square_sum(ust, lambda, d, false);
    }
    return std::pow(lambda, (2.0 - g.n()) / 2.0) * acc;
}

double f_lambda_norm(const SpaceTimeField& u, double lambda) {
    ShellBreakdown b = shell_breakdown(u, lambda);
    return std::max(b.linf_l2, b.sum_min());
}

double g_lambda_norm(const SpaceTimeField& u, double lambda) {
    return std::max(f_lambda_norm(u, lambda), z_norm(u, lambda));
}

double fs_norm(const SpaceTimeField& u, double s) {
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    MassTables mt = mass_tables(ctx);
    double acc = 0.0;
    for (std::size_t i = 0; i < ctx.st_lad.size(); ++i) {
        if (mt.total[i] == 0.0) continue;
        const double lam = ctx.st_lad[i];
        ShellBreakdown b = breakdown_impl(ctx, lam, mt);
        const double f = std::max(b.linf_l2, b.sum_min());
        acc += std::pow(lam, 2.0 * s) * f * f;
    }
    return std::sqrt(acc);
}

double gs_norm(const SpaceTimeField& u, double s) {
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    MassTables mt = mass_tables(ctx);
    double acc = 0.0;
    for (std::size_t i = 0; i < ctx.st_lad.size(); ++i) {
        if (mt.total[i] == 0.0) continue;
        const double lam = ctx.st_lad[i];
        ShellBreakdown b = breakdown_impl(ctx, lam, mt);
        double g = std::max(b.linf_l2, b.sum_min());
        if (u.grid().n() >= 2) {
            double zacc = 0.0;
            for (std::size_t dc = 0; dc < ctx.cone_lad.size(); ++dc) {
                const double d = ctx.cone_lad[dc];
                if (d > lam) break;
                if (mt.d_mass[i][dc] == 0.0) continue;
                zacc += z_square_sum(ust, lam, d, false);
            }
            g = std::max(g, std::pow(lam, (2.0 - u.grid().n()) / 2.0) * zacc);
        }
        acc += std::pow(lam, s) * g;
    }
    return acc;
}

namespace {

std::vector<double> spatial_shell_l2(const SpatialField& f) {
    SpatialField ff = convert(f, SpatialField::SRep::Fourier);
    const GridSpec& g = f.grid();
    const DyadicLadder lad = spatial_shells(g);
    std::vector<double> mass(lad.size(), 0.0);
    const std::int64_t sp = g.spatial_points();
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = std::norm(ff.data()[s]);
        if (a == 0.0) continue;
        const double xin = std::sqrt(g.xi_norm_sq(s));
        if (xin == 0.0) continue;
        mass[lad.classify(xin)] += a;
    }
    const double dxn = std::pow(g.dx(), g.n());
    for (double& v : mass) v = std::sqrt(v * dxn);
    return mass;
}

}  // namespace

double besov_data_norm(const SpatialField& f, const SpatialField& g, double s) {
    if (!(f.grid() == g.grid())) throw contract_error("besov_data_norm: grids differ");
    const DyadicLadder lad = spatial_shells(f.grid());
    const std::vector<double> mf = spatial_shell_l2(f);
    const std::vector<double> mg = spatial_shell_l2(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < lad.size(); ++i)
        acc += std::pow(lad[i], s) * mf[i] + std::pow(lad[i], s - 1.0) * mg[i];
    return acc;
}

double besov_norm(const SpatialField& f, double s) {
    const DyadicLadder lad = spatial_shells(f.grid());
    const std::vector<double> mf = spatial_shell_l2(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < lad.size(); ++i) acc += std::pow(lad[i], s) * mf[i];
    return acc;
}

double dyadic_sobolev_norm(const SpatialField& f, double s) {
    const DyadicLadder lad = spatial_shells(f.grid());
    const std::vector<double> mf = spatial_shell_l2(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < lad.size(); ++i) acc += std::pow(lad[i], 2.0 * s) * mf[i] * mf[i];
    return std::sqrt(acc);
}

namespace {

std::vector<double> time_profile_impl(const SpaceTimeField& u, double s, bool ell1) {
    SpaceTimeField usf = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const DyadicLadder lad = spatial_shells(g);
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    const double dxn = std::pow(g.dx(), g.n());
    std::vector<double> out(nt, 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        std::vector<double> mass(lad.size(), 0.0);
        const cplx* row = usf.data().data() + std::int64_t(m) * sp;
        for (std::int64_t sdx = 0; sdx < sp; ++sdx) {
            const double a = std::norm(row[sdx]);
            if (a == 0.0) continue;
            const double xin = std::sqrt(g.xi_norm_sq(sdx));
            if (xin == 0.0) continue;
            mass[lad.classify(xin)] += a;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < lad.size(); ++i) {
            const double shell = std::sqrt(mass[i] * dxn);
            acc += ell1 ? std::pow(lad[i], s) * shell
                        : std::pow(lad[i], 2.0 * s) * shell * shell;
        }
        out[m] = ell1 ? acc : std::sqrt(acc);
    }
    return out;
}

}  // namespace

std::vector<double> besov_time_profile(const SpaceTimeField& u, double s) {
    return time_profile_impl(u, s, true);
}

std::vector<double> sobolev_time_profile(const SpaceTimeField& u, double s) {
    return time_profile_impl(u, s, false);
}

DyadicNormTable norm_table(const SpaceTimeField& u, double s, bool with_z) {
    SpaceTimeField ust = as_st(u);
    STContext ctx(ust);
    MassTables mt = mass_tables(ctx);
    DyadicNormTable table;
    const GridSpec& g = u.grid();
    table.grid_desc = "n=" + std::to_string(g.n()) + " N_x=" + std::to_string(g.nx()) +
                      " N_t=" + std::to_string(g.nt());
    table.s = s;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < ctx.st_lad.size(); ++i) {
        const double lam = ctx.st_lad[i];
        ShellBreakdown b = breakdown_impl(ctx, lam, mt);
        for (std::size_t dc = 0; dc < b.d_values.size(); ++dc) {
            table.rows.push_back({"x_l2l2", lam, b.d_values[dc],
                                  mt.total[i] == 0.0 ? nan : b.x_route[dc] / std::sqrt(b.d_values[dc])});
            table.rows.push_back({"y_l1l2", lam, b.d_values[dc],
                                  mt.total[i] == 0.0 ? nan : b.y_route[dc] * lam});
        }
        table.rows.push_back({"x_half_p1", lam, std::nullopt, b.x_half(1.0)});
        table.rows.push_back({"x_half_p2", lam, std::nullopt, b.x_half(2.0)});
        table.rows.push_back({"linf_l2", lam, std::nullopt, b.linf_l2});
        const double f = std::max(b.linf_l2, b.sum_min());
        double zval = nan;
        if (with_z && g.n() >= 2) {
            double zacc = 0.0;
            for (std::size_t dc = 0; dc < ctx.cone_lad.size(); ++dc) {
                const double d = ctx.cone_lad[dc];
                if (d > lam) break;
                if (mt.d_mass[i][dc] == 0.0) continue;
                zacc += z_square_sum(ust, lam, d, false);
            }
            zval = std::pow(lam, (2.0 - g.n()) / 2.0) * zacc;
        }
        table.rows.push_back({"y", lam, std::nullopt,
                              mt.total[i] == 0.0 ? 0.0 : y_norm(ust, lam)});
        table.rows.push_back({"z", lam, std::nullopt, zval});
        table.rows.push_back({"f", lam, std::nullopt, f});
        table.rows.push_back(
            {"g", lam, std::nullopt, std::isnan(zval) ? f : std::max(f, zval)});
    }
    return table;
}

}  // namespace lpwave
