#include "lpwave/solver.hpp"

#include <cmath>
#include <numbers>

#include "lpwave/transforms.hpp"

namespace lpwave {

namespace {

constexpr double k2Pi = 2.0 * std::numbers::pi;

SpaceTimeField spatial_derivative(const SpaceTimeField& u, int axis) {
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
#pragma omp parallel
    {
        std::vector<int> k(g.n());
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < sp; ++s) {
            g.spatial_signed(s, k.data());
            const cplx factor(0.0, k2Pi * k[axis] / g.L());
            for (int m = 0; m < nt; ++m) w.data()[std::int64_t(m) * sp + s] *= factor;
        }
    }
    return convert(w, caller);
}

SpaceTimeField gradient_contraction(const SpaceTimeField& u, int axis) {
    if (axis >= 0) return spatial_derivative(u, axis);
    // (1,...,1)/sqrt(n) . grad
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    const double inv = 1.0 / std::sqrt(double(g.n()));
#pragma omp parallel
    {
        std::vector<int> k(g.n());
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < sp; ++s) {
            g.spatial_signed(s, k.data());
            double ksum = 0.0;
            for (int a = 0; a < g.n(); ++a) ksum += k[a];
            const cplx factor(0.0, k2Pi * ksum * inv / g.L());
            for (int m = 0; m < nt; ++m) w.data()[std::int64_t(m) * sp + s] *= factor;
        }
    }
    return convert(w, caller);
}

SpaceTimeField pointwise_product(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField pa = convert(a, Rep::Physical);
    SpaceTimeField pb = convert(b, Rep::Physical);
    SpaceTimeField out(a.grid(), Rep::Physical);
    const std::int64_t count = out.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) out.data()[i] = pa.data()[i] * pb.data()[i];
    return out;
}

SpaceTimeField pointwise_triple(const SpaceTimeField& a) {
    SpaceTimeField pa = convert(a, Rep::Physical);
    SpaceTimeField out(a.grid(), Rep::Physical);
    const std::int64_t count = out.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        const cplx v = pa.data()[i];
        out.data()[i] = v * v * v;
    }
    return out;
}

}  // namespace

SpaceTimeField dealias_two_thirds(const SpaceTimeField& u) {
    const Rep caller = u.rep();
    SpaceTimeField w = convert(u, Rep::SpatialFourier);
    const GridSpec& g = u.grid();
    const int keep = g.nx() / 3;
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
#pragma omp parallel
    {
        std::vector<int> k(g.n());
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < sp; ++s) {
            g.spatial_signed(s, k.data());
            bool kill = false;
            for (int a = 0; a < g.n(); ++a)
                if (std::abs(k[a]) > keep) kill = true;
            if (!kill) continue;
            for (int m = 0; m < nt; ++m) w.data()[std::int64_t(m) * sp + s] = 0.0;
        }
    }
    return convert(w, caller);
}

FieldTuple nonlinearity(const FieldTuple& phi, const SchematicParams& schematic,
                        const IterationConfig& cfg) {
    if (static_cast<int>(phi.size()) != schematic.components())
        throw config_error("nonlinearity: component count mismatch with schematic");
    auto prep = [&](const SpaceTimeField& u) {
        return cfg.dealias ? dealias_two_thirds(u) : u;
    };
    FieldTuple out;
    switch (schematic.system) {
        case SchematicParams::System::ScalarModel: {
            SpaceTimeField u = prep(phi[0]);
            out.push_back(pointwise_product(u, gradient_contraction(u, cfg.derivative_axis)));
            break;
        }
        case SchematicParams::System::WMModel: {
            // |D phi|^2 schematic: sum of squared first derivatives (time
            // derivative spectral in the periodic representation).
            SpaceTimeField u = prep(phi[0]);
            SpaceTimeField acc(u.grid(), Rep::Physical);
            SpaceTimeField dt = convert(time_derivative_spectral(u), Rep::Physical);
            const std::int64_t count = acc.size();
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < count; ++i)
                acc.data()[i] = dt.data()[i] * dt.data()[i];
            for (int a = 0; a < u.grid().n(); ++a) {
                SpaceTimeField da = convert(spatial_derivative(u, a), Rep::Physical);
#pragma omp parallel for schedule(static)
                for (std::int64_t i = 0; i < count; ++i)
                    acc.data()[i] += da.data()[i] * da.data()[i];
            }
            out.push_back(std::move(acc));
            break;
        }
        case SchematicParams::System::YMSchematic: {
            SpaceTimeField u = prep(phi[0]);
            SpaceTimeField quad =
                pointwise_product(u, gradient_contraction(u, cfg.derivative_axis));
            SpaceTimeField cubic = pointwise_triple(u);
            out.push_back(axpy(quad, cubic, 1.0, 1.0));
            break;
        }
        case SchematicParams::System::MDSchematic: {
            SpaceTimeField u = prep(phi[0]);
            SpaceTimeField A = prep(phi[1]);
            SpaceTimeField du = gradient_contraction(u, cfg.derivative_axis);
            out.push_back(pointwise_product(A, du));
            out.push_back(pointwise_product(du, du));
            break;
        }
    }
    for (SpaceTimeField& f : out)
        if (cfg.dealias) f = dealias_two_thirds(f);
    return out;
}

double fd_residual(const SpaceTimeField& phi, const SpaceTimeField& nonlin) {
    const GridSpec& g = phi.grid();
    SpaceTimeField u = convert(phi, Rep::SpatialFourier);
    SpaceTimeField N = convert(nonlin, Rep::SpatialFourier);
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    if (nt < 8) throw config_error("fd_residual: need at least 8 time samples");
    // 6th-order centered second derivative in t; spectral Laplacian.
    static const double c0 = -49.0 / 18.0, c1 = 3.0 / 2.0, c2 = -3.0 / 20.0, c3 = 1.0 / 90.0;
    const double idt2 = 1.0 / (g.dt() * g.dt());
    double acc = 0.0;
    std::vector<double> per_t(nt, 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 3; m < nt - 3; ++m) {
        double slice = 0.0;
        for (std::int64_t s = 0; s < sp; ++s) {
            const double lap = -4.0 * std::numbers::pi * std::numbers::pi * g.xi_norm_sq(s);
            const cplx dtt = (c0 * u.at(m, s) + c1 * (u.at(m + 1, s) + u.at(m - 1, s)) +
                              c2 * (u.at(m + 2, s) + u.at(m - 2, s)) +
                              c3 * (u.at(m + 3, s) + u.at(m - 3, s))) *
                             idt2;
            const cplx box = -dtt + lap * u.at(m, s);
            slice += std::norm(box - N.at(m, s));
        }
        per_t[m] = slice;
    }
    for (int m = 3; m < nt - 3; ++m) acc += per_t[m] * g.dt();
    const double dxn = std::pow(g.dx(), g.n());
    return std::sqrt(acc * dxn);
}

ScatteringData scattering_data_unchecked(const IterationTrace& trace, const FieldTuple& phi,
                                         const IterationConfig& cfg);

IterationTrace picard_solve(const DataTuple& f, const DataTuple& g, const IterationConfig& cfg,
                            FieldTuple* final_iterate) {
    const SchematicParams& sc = cfg.schematic;
    if (static_cast<int>(f.size()) != sc.components() || f.size() != g.size())
        throw config_error("picard_solve: data component count mismatch");
    if (cfg.max_iter < 2) throw config_error("picard_solve: max_iter must be >= 2");

    IterationTrace trace;
    trace.f0 = f;
    trace.g0 = g;
    double data_norm = 0.0;
    for (int c = 0; c < sc.components(); ++c)
        data_norm += besov_data_norm(f[c], g[c], sc.s_c[c]);
    trace.warned_large_data = data_norm > cfg.epsilon0;

    FieldTuple free_part;
    for (int c = 0; c < sc.components(); ++c) free_part.push_back(propagate(f[c], g[c]));

    auto tuple_gs = [&](const FieldTuple& u) {
        double acc = 0.0;
        for (int c = 0; c < sc.components(); ++c) acc += gs_norm(u[c], sc.s_c[c]);
        return acc;
    };

    FieldTuple phi = free_part;
    trace.gs_iter.push_back(tuple_gs(phi));
    trace.gs_diff.push_back(trace.gs_iter.back());  // difference from phi_{-1} = 0
    {
        FieldTuple N0 = nonlinearity(phi, sc, cfg);
        trace.residual.push_back(fd_residual(phi[0], N0[0]));
    }
    trace.energy_besov.push_back(besov_time_profile(phi[0], sc.s_c[0]));
    trace.steps = 1;

    double prev_diff = trace.gs_diff.back();
    int grow_count = 0;
    const bool trivial_data = data_norm == 0.0;
    for (int k = 1; k < cfg.max_iter && !trivial_data; ++k) {
        FieldTuple N = nonlinearity(phi, sc, cfg);
        FieldTuple next;
        for (int c = 0; c < sc.components(); ++c)
            next.push_back(axpy(free_part[c], duhamel_inverse(N[c]), 1.0, 1.0));
        FieldTuple diff;
        for (int c = 0; c < sc.components(); ++c) diff.push_back(axpy(next[c], phi[c], 1.0, -1.0));
        const double dnorm = tuple_gs(diff);
        phi = std::move(next);
        trace.gs_iter.push_back(tuple_gs(phi));
        trace.gs_diff.push_back(dnorm);
        FieldTuple Nn = nonlinearity(phi, sc, cfg);
        trace.residual.push_back(fd_residual(phi[0], Nn[0]));
        trace.energy_besov.push_back(besov_time_profile(phi[0], sc.s_c[0]));
        trace.steps = k + 1;

        if (dnorm <= cfg.contraction_tol) {
            trace.converged = true;
            break;
        }
        if (dnorm > prev_diff) {
            if (++grow_count >= 2) {
                trace.diverged = true;  // data too large for the small-data contraction
                break;
            }
        } else {
            grow_count = 0;
        }
        prev_diff = dnorm;
    }
    if (trivial_data) trace.converged = true;
    if (!trace.converged && !trace.diverged)
        trace.converged = trace.gs_diff.back() <= cfg.contraction_tol;

    if (trace.converged) {
        ScatteringData sd = scattering_data_unchecked(trace, phi, cfg);
        trace.scattering = sd;
    }
    if (final_iterate) *final_iterate = phi;
    return trace;
}

namespace {

/// Tail integrals int_0^{T+} of sin(a s)/a F-hat and cos(a s) F-hat.
std::pair<SpatialField, SpatialField> tail_integrals(const SpaceTimeField& F) {
    SpaceTimeField Fh = convert(F, Rep::SpatialFourier);
    const GridSpec& g = F.grid();
    SpatialField I_sin(g, SpatialField::SRep::Fourier);
    SpatialField I_cos(g, SpatialField::SRep::Fourier);
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    const double dt = g.dt();
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sp; ++s) {
        const double a = k2Pi * std::sqrt(g.xi_norm_sq(s));
        cplx acc_sin = 0.0, acc_cos = 0.0;
        for (int m = 1; m < nt; ++m) {
            const double t0 = (m - 1) * dt, t1 = m * dt;
            const cplx f0 = Fh.data()[std::int64_t(m - 1) * sp + s];
            const cplx f1 = Fh.data()[std::int64_t(m) * sp + s];
            if (a == 0.0) {
                acc_sin += 0.5 * dt * (t0 * f0 + t1 * f1);
                acc_cos += 0.5 * dt * (f0 + f1);
            } else {
                acc_sin += 0.5 * dt * (std::sin(a * t0) / a * f0 + std::sin(a * t1) / a * f1);
                acc_cos += 0.5 * dt * (std::cos(a * t0) * f0 + std::cos(a * t1) * f1);
            }
        }
        I_sin.data()[s] = acc_sin;
        I_cos.data()[s] = acc_cos;
    }
    return {I_sin, I_cos};
}

}  // namespace

ScatteringData scattering_data_unchecked(const IterationTrace& trace, const FieldTuple& phi,
                                         const IterationConfig& cfg) {
    const SchematicParams& sc = cfg.schematic;
    FieldTuple N = nonlinearity(phi, sc, cfg);
    ScatteringData sd;
    for (int c = 0; c < sc.components(); ++c) {
        auto [I_sin, I_cos] = tail_integrals(N[c]);
        SpatialField fh = convert(trace.f0[c], SpatialField::SRep::Fourier);
        SpatialField gh = convert(trace.g0[c], SpatialField::SRep::Fourier);
        sd.f_plus.push_back(axpy(fh, I_sin, 1.0, 1.0));
        sd.g_plus.push_back(axpy(gh, I_cos, 1.0, -1.0));
        // The grid covers t >= 0 only; the backward data are the t = 0 data.
        sd.f_minus.push_back(fh);
        sd.g_minus.push_back(gh);
    }
    return sd;
}

ScatteringData scattering_data(const IterationTrace& trace, const FieldTuple& phi,
                               const IterationConfig& cfg) {
    if (!trace.converged)
        throw contract_error("scattering_data: trace did not converge");
    return scattering_data_unchecked(trace, phi, cfg);
}

FieldTuple scattering_consistent_iterate(const IterationTrace& trace, const FieldTuple& phi,
                                         const IterationConfig& cfg) {
    const SchematicParams& sc = cfg.schematic;
    FieldTuple N = nonlinearity(phi, sc, cfg);
    FieldTuple out;
    for (int c = 0; c < sc.components(); ++c) {
        SpaceTimeField w = propagate(trace.f0[c], trace.g0[c]);
        out.push_back(axpy(w, duhamel_inverse(N[c]), 1.0, 1.0));
    }
    return out;
}

double hdot1_norm(const SpatialField& f) {
    SpatialField fh = convert(f, SpatialField::SRep::Fourier);
    const GridSpec& g = f.grid();
    double acc = 0.0;
    for (std::int64_t s = 0; s < g.spatial_points(); ++s) {
        const double a = k2Pi * std::sqrt(g.xi_norm_sq(s));
        acc += a * a * std::norm(fh.data()[s]);
    }
    return std::sqrt(acc * std::pow(g.dx(), g.n()));
}

std::vector<double> scattering_discrepancy(const SpaceTimeField& phi, const SpatialField& f_plus,
                                           const SpatialField& g_plus) {
    SpaceTimeField w = propagate(f_plus, g_plus);
    SpaceTimeField ph = convert(phi, Rep::SpatialFourier);
    const GridSpec& g = phi.grid();
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    std::vector<double> out(nt, 0.0);
    const double dxn = std::pow(g.dx(), g.n());
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        double acc = 0.0;
        for (std::int64_t s = 0; s < sp; ++s) {
            const double a = k2Pi * std::sqrt(g.xi_norm_sq(s));
            acc += a * a * std::norm(ph.at(m, s) - w.at(m, s));
        }
        out[m] = std::sqrt(acc * dxn);
    }
    return out;
}

std::vector<double> scattering_tail_bound(const SpaceTimeField& F) {
    SpaceTimeField Fh = convert(F, Rep::SpatialFourier);
    const GridSpec& g = F.grid();
    const int nt = g.nt();
    const std::int64_t sp = g.spatial_points();
    const double dxn = std::pow(g.dx(), g.n());
    std::vector<double> l2(nt, 0.0);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < nt; ++m) {
        double acc = 0.0;
        for (std::int64_t s = 0; s < sp; ++s) acc += std::norm(Fh.at(m, s));
        l2[m] = std::sqrt(acc * dxn);
    }
    // bound(t_m) = trapezoid of ||F|| over [t_m, T+]
    std::vector<double> out(nt, 0.0);
    for (int m = nt - 2; m >= 0; --m)
        out[m] = out[m + 1] + 0.5 * g.dt() * (l2[m] + l2[m + 1]);
    return out;
}

SpaceTimeField scale_transform(const SpaceTimeField& phi, double lambda, double sigma) {
    const GridSpec& g = phi.grid();
    const Rep caller = phi.rep();
    SpaceTimeField w = convert(phi, Rep::SpaceTimeFourier);
    SpaceTimeField out(g, Rep::SpaceTimeFourier);
    if (lambda == 1.0) {
        out = w;
        scale_inplace(out, std::pow(lambda, sigma));
        return convert(out, caller);
    }
    const bool up = lambda > 1.0;
    const std::int64_t factor = up ? std::llround(lambda) : std::llround(1.0 / lambda);
    if ((up && std::pow(2.0, std::round(std::log2(lambda))) != lambda) ||
        (!up && std::pow(2.0, std::round(std::log2(1.0 / lambda))) != 1.0 / lambda))
        throw config_error("scale_transform: lambda must be a power of two");
    const double amp = std::pow(lambda, sigma);
    const std::int64_t sp = g.spatial_points();
    const int nt = g.nt();
    std::vector<int> k(g.n());
    for (int m = 0; m < nt; ++m) {
        const int jm = GridSpec::signed_index(m, nt);
        for (std::int64_t s = 0; s < sp; ++s) {
            const cplx v = w.data()[std::int64_t(m) * sp + s];
            if (v == cplx(0.0)) continue;
            g.spatial_signed(s, k.data());
            std::int64_t jm2;
            std::vector<std::int64_t> k2(g.n());
            if (up) {
                jm2 = std::int64_t(jm) * factor;
                for (int a = 0; a < g.n(); ++a) k2[a] = std::int64_t(k[a]) * factor;
            } else {
                if (jm % factor != 0)
                    throw std::range_error("scale_transform: time frequency not divisible");
                jm2 = jm / factor;
                for (int a = 0; a < g.n(); ++a) {
                    if (k[a] % factor != 0)
                        throw std::range_error("scale_transform: spatial frequency not divisible");
                    k2[a] = k[a] / factor;
                }
            }
            if (jm2 < -nt / 2 || jm2 >= nt / 2)
                throw std::range_error("scale_transform: rescaled spectrum exceeds Nyquist");
            for (int a = 0; a < g.n(); ++a)
                if (k2[a] < -g.nx() / 2 || k2[a] >= g.nx() / 2)
                    throw std::range_error("scale_transform: rescaled spectrum exceeds Nyquist");
            std::int64_t s2 = 0;
            for (int a = 0; a < g.n(); ++a)
                s2 = s2 * g.nx() + GridSpec::storage_index(static_cast<int>(k2[a]), g.nx());
            const int m2 = GridSpec::storage_index(static_cast<int>(jm2), nt);
            out.data()[std::int64_t(m2) * sp + s2] = amp * v;
        }
    }
    return convert(out, caller);
}

std::pair<SpatialField, SpatialField> data_scale(const SpatialField& f, const SpatialField& g,
                                                 double lambda, double sigma) {
    const GridSpec& grid = f.grid();
    SpatialField fh = convert(f, SpatialField::SRep::Fourier);
    SpatialField gh = convert(g, SpatialField::SRep::Fourier);
    SpatialField f2(grid, SpatialField::SRep::Fourier);
    SpatialField g2(grid, SpatialField::SRep::Fourier);
    const bool up = lambda >= 1.0;
    const std::int64_t factor = up ? std::llround(lambda) : std::llround(1.0 / lambda);
    const double measure = std::pow(lambda, -grid.n() / 2.0);
    const double amp_f = std::pow(lambda, sigma) * measure;
    const double amp_g = std::pow(lambda, sigma + 1.0) * measure;
    std::vector<int> k(grid.n());
    for (std::int64_t s = 0; s < grid.spatial_points(); ++s) {
        if (fh.data()[s] == cplx(0.0) && gh.data()[s] == cplx(0.0)) continue;
        grid.spatial_signed(s, k.data());
        std::vector<std::int64_t> k2(grid.n());
        for (int a = 0; a < grid.n(); ++a) {
            if (up) {
                k2[a] = std::int64_t(k[a]) * factor;
            } else {
                if (k[a] % factor != 0)
                    throw std::range_error("data_scale: spatial frequency not divisible");
                k2[a] = k[a] / factor;
            }
            if (k2[a] < -grid.nx() / 2 || k2[a] >= grid.nx() / 2)
                throw std::range_error("data_scale: rescaled spectrum exceeds Nyquist");
        }
        std::int64_t s2 = 0;
        for (int a = 0; a < grid.n(); ++a)
            s2 = s2 * grid.nx() + GridSpec::storage_index(static_cast<int>(k2[a]), grid.nx());
        f2.data()[s2] = amp_f * fh.data()[s];
        g2.data()[s2] = amp_g * gh.data()[s];
    }
    return {f2, g2};
}

}  // namespace lpwave
