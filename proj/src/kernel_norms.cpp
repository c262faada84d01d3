#include "lpwave/kernel_norms.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "lpwave/parallel.hpp"

namespace lpwave {

namespace {

constexpr double kPi = std::numbers::pi;

struct Axis {
    double half_extent;
    int n;
    double h;  // spacing = 2 * half_extent / n
};

int next_pow2(double v) {
    int n = 2;
    while (n < v) n *= 2;
    return n;
}

Axis make_axis(double half_extent, double feature, int oversample) {
    // Resolve the smallest transition band of the symbol along this axis.
    const double h_want = feature / oversample;
    const int n = next_pow2(std::ceil(2.0 * half_extent / h_want));
    if (n > (1 << 22)) throw config_error("kernel grid axis too large; symbol support too wide");
    return Axis{half_extent, n, 2.0 * half_extent / n};
}

struct SymbolFeatures {
    double tau_feature = SupportDescriptor::inf;
    double xi_feature = SupportDescriptor::inf;
    double cone_scale = 0.0;    // d of a cone factor, if any
    double block_delta = 0.0;   // delta of a block factor, if any
    double block_lambda = 0.0;
    int block_sector = -1;
    std::shared_ptr<const AngularSectorSet> block_sectors;
    bool tau_dependent = false;
    double min_transition = 0.5;
};

SymbolFeatures analyze(const MultiplierSymbol& s) {
    SymbolFeatures ft;
    for (const SymbolFactor& f : s.factors()) {
        switch (f.kind) {
            case SymbolFactor::Kind::STShell:
                ft.tau_feature = std::min(ft.tau_feature, f.param);
                ft.xi_feature = std::min(ft.xi_feature, f.param);
                ft.tau_dependent = true;
                ft.min_transition = std::min(ft.min_transition, f.profile.transition);
                break;
            case SymbolFactor::Kind::Cone:
                ft.cone_scale = f.param;
                ft.tau_feature = std::min(ft.tau_feature, f.param);
                ft.xi_feature = std::min(ft.xi_feature, f.param);
                ft.tau_dependent = true;
                ft.min_transition = std::min(ft.min_transition, f.profile.transition);
                break;
            case SymbolFactor::Kind::Spatial:
            case SymbolFactor::Kind::SpatialLe:
                ft.xi_feature = std::min(ft.xi_feature, f.param);
                ft.min_transition = std::min(ft.min_transition, f.profile.transition);
                break;
            case SymbolFactor::Kind::Sign:
                ft.tau_dependent = true;
                break;
            case SymbolFactor::Kind::Block:
                ft.block_delta = f.sectors->delta();
                ft.block_lambda = f.sectors->lambda();
                ft.block_sector = f.sector;
                ft.block_sectors = f.sectors;
                ft.xi_feature = std::min(ft.xi_feature, f.sectors->delta());
                ft.min_transition = std::min(ft.min_transition, f.profile.transition);
                break;
            default:
                break;
        }
    }
    return ft;
}

double variant_weight(const KernelVariant& v, double tau, double xi_sq) {
    switch (v.kind) {
        case KernelVariant::Kind::Plain: return 1.0;
        case KernelVariant::Kind::GradientScaled: return 2.0 * kPi * std::sqrt(xi_sq) / v.lambda;
        case KernelVariant::Kind::ResolventScaled: {
            const double den = 4.0 * kPi * kPi * (tau * tau - xi_sq);
            return v.lambda * v.d / den;
        }
    }
    return 1.0;
}

/// |K| on the dual grid of a sampled symbol, via centered FFT; returns the
/// L1 quadrature sum. dims/spacings define the frequency tensor grid; eval
/// maps per-axis signed coordinates to the symbol value (already weighted).
double l1_of_inverse_transform(const std::vector<Axis>& axes,
                               const std::function<double(const std::vector<double>&)>& eval) {
    const int rank = static_cast<int>(axes.size());
    std::int64_t total = 1;
    std::vector<int> dims(rank);
    for (int a = 0; a < rank; ++a) {
        dims[a] = axes[a].n;
        total *= axes[a].n;
        if (total > (std::int64_t(1) << 26))
            throw config_error("kernel grid too large; reduce oversampling or symbol extent");
    }
    std::vector<cplx> buf(total);
    // Fill with centering pre-phase e^{-2 pi i c.j / N} so the FFT computes the
    // centered-frequency transform; output phases cancel in |K|.
    const std::int64_t count = total;
#pragma omp parallel
    {
        std::vector<double> coord(rank);
        std::vector<int> idx(rank);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
            std::int64_t rem = i;
            for (int a = rank - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % dims[a]);
                rem /= dims[a];
                coord[a] = (idx[a] - dims[a] / 2) * axes[a].h;
            }
            const double v = eval(coord);
            if (v == 0.0) {
                buf[i] = 0.0;
                continue;
            }
            // product of per-axis phases e^{-2 pi i (N_a/2) j_a / N_a} = (-1)^{j_a}
            double sign = 1.0;
            for (int a = 0; a < rank; ++a)
                if (idx[a] & 1) sign = -sign;
            buf[i] = v * sign;
        }
    }
    std::vector<cplx> out(total);
    fftw_plan p = fftw_plan_dft(rank, dims.data(), reinterpret_cast<fftw_complex*>(buf.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    // K value = FFT * prod(h_a); physical cell = prod(1 / (N_a h_a)).
    double freq_cell = 1.0, phys_cell = 1.0;
    for (int a = 0; a < rank; ++a) {
        freq_cell *= axes[a].h;
        phys_cell *= 1.0 / (axes[a].n * axes[a].h);
    }
    const double scale = freq_cell * phys_cell;
    return reduce_sum(total, [&](std::int64_t i) { return std::abs(out[i]) * scale; });
}

}  // namespace

double kernel_l1_norm(const MultiplierSymbol& s, KernelVariant variant, int oversample) {
    if (!s.all_smooth_profiles())
        throw config_error("kernel_l1_norm: sharp cutoffs give an unbounded kernel family; "
                           "use the smooth profile");
    if (oversample < 4) throw config_error("kernel_l1_norm: oversample must be >= 4");
    const SymbolFeatures ft = analyze(s);
    const SupportDescriptor& d = s.support();
    const int n = s.grid().n();
    const double w2 = 2.0 * ft.min_transition;

    double xi_hi = std::min(d.xi_hi, d.r_hi);
    double tau_hi = d.r_hi;
    if (!ft.tau_dependent) tau_hi = std::isfinite(xi_hi) ? xi_hi : 1.0;
    if (!std::isfinite(tau_hi) || !std::isfinite(xi_hi))
        throw config_error("kernel_l1_norm: symbol support is unbounded");

    if (ft.cone_scale > 0.0 && ft.block_sector >= 0 && n >= 2 &&
        ft.block_delta <= ft.block_lambda / 2.0) {
        // Cone x angular block: integrate per tau half-space in the rotated
        // frame where the sector center is the first spatial axis and
        // (tau, xi_1) are replaced by null coordinates. The support box is
        // then axis-aligned with dims ~ d x lambda x (lambda d)^{1/2} x ...
        const std::vector<double>& center = ft.block_sectors->center(ft.block_sector);
        const double lam = ft.block_lambda;
        const double dd = ft.cone_scale;
        const double sq2 = std::sqrt(2.0);
        double total = 0.0;
        for (int sign : {+1, -1}) {
            if (d.sign != 0 && sign != d.sign) continue;
            // s = (tau -+ xi_1') / sqrt(2), eta = (tau +- xi_1') / sqrt(2)
            std::vector<Axis> axes;
            const double theta_max =
                std::min(kPi / 2.0, (1.0 + w2) * ft.block_delta / lam);
            const double perp_ext =
                std::min(xi_hi, xi_hi * std::sin(theta_max) + 2.0 * ft.block_delta);
            // |s| <= (modulation + |xi| - xi_radial) / sqrt(2); the second term
            // is at most xi_hi * theta_max^2 / 2 over the block.
            const double s_ext =
                1.1 * (2.0 * dd * (1.0 + w2) + xi_hi * theta_max * theta_max / 2.0) / sq2;
            const double eta_ext = (tau_hi + xi_hi) / sq2;
            axes.push_back(make_axis(s_ext, dd * w2, oversample));
            axes.push_back(make_axis(eta_ext, lam * w2, oversample));
            for (int a = 1; a < n; ++a)
                axes.push_back(make_axis(perp_ext, ft.block_delta * w2, oversample));
            // Rotation taking e_1 to the sector center (Householder-style);
            // applied to reconstruct the true xi from rotated coordinates.
            total += l1_of_inverse_transform(axes, [&](const std::vector<double>& c) {
                const double sv = c[0], eta = c[1];
                const double tau = (eta + sv) / sq2 * 1.0;
                const double xi1 = (eta - sv) / sq2;
                // rotated frame: xi' = xi1 * e1 + perp; map back via center
                FreqPoint p;
                p.tau = sign > 0 ? tau : -tau;
                p.xi.assign(n, 0.0);
                // Build an orthonormal frame with center as first vector.
                // Gram-Schmidt against coordinate axes, deterministic.
                static thread_local std::vector<std::vector<double>> frame;
                if (frame.size() != std::size_t(n) || frame[0] != center) {
                    frame.assign(n, std::vector<double>(n, 0.0));
                    frame[0] = center;
                    int filled = 1;
                    for (int a = 0; a < n && filled < n; ++a) {
                        std::vector<double> v(n, 0.0);
                        v[a] = 1.0;
                        for (int bidx = 0; bidx < filled; ++bidx) {
                            double dp = 0.0;
                            for (int q = 0; q < n; ++q) dp += v[q] * frame[bidx][q];
                            for (int q = 0; q < n; ++q) v[q] -= dp * frame[bidx][q];
                        }
                        double norm = 0.0;
                        for (double x : v) norm += x * x;
                        if (norm > 1e-12) {
                            norm = std::sqrt(norm);
                            for (double& x : v) x /= norm;
                            frame[filled++] = v;
                        }
                    }
                }
                for (int q = 0; q < n; ++q) p.xi[q] = xi1 * frame[0][q];
                for (int a = 1; a < n; ++a)
                    for (int q = 0; q < n; ++q) p.xi[q] += c[a + 1] * frame[a][q];
                const double val = s(p);
                if (val == 0.0) return 0.0;
                return val * variant_weight(variant, p.tau, p.xi_norm_sq());
            });
        }
        return total;
    }

    // Generic tensor grid in (tau, xi).
    std::vector<Axis> axes;
    const double tau_feature = std::isfinite(ft.tau_feature) ? ft.tau_feature * w2 : tau_hi;
    const double xi_feature = std::isfinite(ft.xi_feature) ? ft.xi_feature * w2 : xi_hi;
    axes.push_back(make_axis(tau_hi * 1.05, tau_feature, oversample));
    for (int a = 0; a < n; ++a) axes.push_back(make_axis(xi_hi * 1.05, xi_feature, oversample));
    return l1_of_inverse_transform(axes, [&](const std::vector<double>& c) {
        FreqPoint p;
        p.tau = c[0];
        p.xi.assign(c.begin() + 1, c.end());
        const double val = s(p);
        if (val == 0.0) return 0.0;
        return val * variant_weight(variant, p.tau, p.xi_norm_sq());
    });
}

double l1tau_linf_bound(const MultiplierSymbol& s, int oversample) {
    if (!s.all_smooth_profiles())
        throw config_error("l1tau_linf_bound: sharp cutoffs give an unbounded kernel family; "
                           "use the smooth profile");
    const SymbolFeatures ft = analyze(s);
    const SupportDescriptor& d = s.support();
    const int n = s.grid().n();
    const double w2 = 2.0 * ft.min_transition;

    double xi_hi = std::min(d.xi_hi, d.r_hi);
    double tau_hi = d.r_hi;
    if (!ft.tau_dependent) tau_hi = std::isfinite(xi_hi) ? xi_hi : 1.0;
    if (!std::isfinite(tau_hi) || !std::isfinite(xi_hi))
        throw config_error("l1tau_linf_bound: symbol support is unbounded");

    const double tau_feature = std::isfinite(ft.tau_feature) ? ft.tau_feature * w2 : tau_hi;
    const Axis taxis = make_axis(tau_hi * 1.05, tau_feature, oversample);

    // Spatial sample set: tensor grid over the support box at half the
    // smallest spatial feature (the sup is a max over these samples).
    const double xi_feature = std::isfinite(ft.xi_feature) ? ft.xi_feature : xi_hi;
    const double hx = xi_feature / 2.0;
    const int nx = std::max(2, static_cast<int>(std::ceil(2.0 * xi_hi / hx)));
    std::int64_t cols = 1;
    for (int a = 0; a < n; ++a) {
        cols *= nx;
        if (cols > (std::int64_t(1) << 22))
            throw config_error("l1tau_linf_bound: spatial sample grid too large");
    }

    std::vector<double> sup_abs(taxis.n, 0.0);
    fftw_plan plan;
    {
        std::vector<cplx> a(taxis.n), b(taxis.n);
        plan = fftw_plan_dft_1d(taxis.n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    const int chunks = static_cast<int>(std::min<std::int64_t>(64, cols));
#pragma omp parallel
    {
        std::vector<double> local(taxis.n, 0.0);
        std::vector<cplx> line(taxis.n), out(taxis.n);
        FreqPoint p;
        p.xi.assign(n, 0.0);
#pragma omp for schedule(static)
        for (int c = 0; c < chunks; ++c) {
            for (std::int64_t col = cols * c / chunks; col < cols * (c + 1) / chunks; ++col) {
                std::int64_t rem = col;
                for (int a2 = n - 1; a2 >= 0; --a2) {
                    const int i = static_cast<int>(rem % nx);
                    rem /= nx;
                    p.xi[a2] = -xi_hi + (i + 0.5) * (2.0 * xi_hi / nx);
                }
                bool any = false;
                for (int j = 0; j < taxis.n; ++j) {
                    p.tau = (j - taxis.n / 2) * taxis.h;
                    const double v = s(p);
                    line[j] = (j & 1) ? -v : v;
                    any = any || v != 0.0;
                }
                if (!any) continue;
                fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(line.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()));
                for (int j = 0; j < taxis.n; ++j)
                    local[j] = std::max(local[j], std::abs(out[j]));
            }
        }
#pragma omp critical
        for (int j = 0; j < taxis.n; ++j) sup_abs[j] = std::max(sup_abs[j], local[j]);
    }
    fftw_destroy_plan(plan);
    // K-hat value = FFT * h_tau; time cell = 1 / (N h_tau).
    double total = 0.0;
    for (int j = 0; j < taxis.n; ++j) total += sup_abs[j];
    return total * taxis.h / (taxis.n * taxis.h);
}

}  // namespace lpwave
