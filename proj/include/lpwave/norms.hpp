#pragma once

#include <map>
#include <optional>
#include <string>

#include "lpwave/symbol.hpp"

namespace lpwave {

/// L^q_t(L^r_x) quadrature norm: left-endpoint Riemann sums with uniform
/// weights dt, dx^n; q or r = infinity replaces the sum by a max.
/// Requires the physical representation.
double mixed_norm(const SpaceTimeField& u, double q, double r);

/// Spatial L^2 norm (any representation; Plancherel-equal).
double spatial_l2(const SpatialField& f);

namespace ref {
/// Naive two-stage loop reference for mixed_norm, kept for testing.
double mixed_norm(const SpaceTimeField& u, double q, double r);
}  // namespace ref

/// Model system parameters: scaling weights sigma and the induced critical
/// exponents s_c = n/2 - sigma, per component.
struct SchematicParams {
    enum class System { ScalarModel, WMModel, YMSchematic, MDSchematic };
    System system = System::ScalarModel;
    std::vector<double> sigma;
    std::vector<double> s_c;

    int components() const { return static_cast<int>(sigma.size()); }
    static SchematicParams make(System sys, int n);
    static SchematicParams parse(const std::string& name, int n);
    const char* name() const;
};

/// Per-shell norm components at fixed lambda, the data behind F/G evaluation
/// and the X-vs-Y routing of the decomposition.
struct ShellBreakdown {
    double lambda = 0.0;
    std::vector<double> d_values;   ///< resolvable cone shells
    std::vector<double> x_route;    ///< d^{1/2} ||S_{lambda,d} u||_{L2 L2}
    std::vector<double> y_route;    ///< lambda^{-1} ||Box S_{lambda,d} u||_{L1 L2}
    std::vector<bool> x_chosen;     ///< per-shell minimum pick (ties -> X)
    double residue_l2 = 0.0;        ///< ||residue part||_{L2 L2}
    double linf_l2 = 0.0;           ///< ||S_lambda u||_{Linf L2}
    double shell_mass = 0.0;        ///< sum |c|^2 over the shell (coefficients)

    double x_half(double p) const;  ///< assemble X^{1/2}_{lambda,p} from x_route
    double sum_min() const;         ///< sum_d min(x_route, y_route)
};

ShellBreakdown shell_breakdown(const SpaceTimeField& u, double lambda);

/// X^{1/2}_{lambda,p} = (sum_d d^{p/2} ||S_{lambda,d} u||^p_{L2(L2)})^{1/p};
/// p in {1, 2} or infinity for the sup form. Cone residue excluded.
double x_half_norm(const SpaceTimeField& u, double lambda, double p);

/// Y_lambda = lambda^{-1} ||Box S_lambda u||_{L1(L2)}, Box applied spectrally.
double y_norm(const SpaceTimeField& u, double lambda);

/// Z_lambda = lambda^{(2-n)/2} sum_d (sum_omega ||S^omega_{lambda,d} u||^2_{L1(Linf)})^{1/2},
/// sectors of width (lambda d)^{1/2}. Unsupported in n = 1.
double z_norm(const SpaceTimeField& u, double lambda);

/// Inner square sum of Z at one (lambda, d):
/// (sum_omega ||S^omega_{lambda,d} u||^2_{L1(Linf)})^{1/2}.
/// With invert_xi, each sector part is divided by the wave symbol first
/// (Xi^{-1} S^omega_{lambda,d}), support permitting.
double z_square_sum(const SpaceTimeField& u, double lambda, double d, bool invert_xi = false);

/// F_lambda = (X^{1/2}_{lambda,1} + Y_lambda) intersect S_lambda L^inf(L^2),
/// realized as max(LinfL2, sum_d min(X-route, Y-route)).
double f_lambda_norm(const SpaceTimeField& u, double lambda);

/// G_lambda = F_lambda intersect Z_lambda, realized as max(F, Z).
double g_lambda_norm(const SpaceTimeField& u, double lambda);

/// F^s, G^s superstructures over resolvable shells.
double fs_norm(const SpaceTimeField& u, double s);
double gs_norm(const SpaceTimeField& u, double s);

/// Besov data norm: sum_lambda lambda^s ||P_lambda f||_{L2}
///                + sum_lambda lambda^{s-1} ||P_lambda g||_{L2}.
double besov_data_norm(const SpatialField& f, const SpatialField& g, double s);

/// Dyadic Besov / Sobolev norms of a spatial field:
/// ell-1 form sum lambda^s ||P_lambda f|| and ell-2 form
/// (sum lambda^{2s} ||P_lambda f||^2)^{1/2}.
double besov_norm(const SpatialField& f, double s);
double dyadic_sobolev_norm(const SpatialField& f, double s);

/// Per-grid-time profiles used by iteration traces and energy estimates.
std::vector<double> besov_time_profile(const SpaceTimeField& u, double s);
std::vector<double> sobolev_time_profile(const SpaceTimeField& u, double s);

/// Evaluated dyadic norms with full provenance, serializable to CSV/JSON.
struct DyadicNormTable {
    struct Row {
        std::string norm;
        double lambda;
        std::optional<double> d;
        double value;  ///< NaN marks an explicitly absent entry
    };
    std::vector<Row> rows;
    std::string grid_desc;
    std::string profile_desc;
    double s = 0.0;
};

DyadicNormTable norm_table(const SpaceTimeField& u, double s, bool with_z);

}  // namespace lpwave
