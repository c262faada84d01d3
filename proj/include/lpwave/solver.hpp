#pragma once

#include <optional>

#include "lpwave/norms.hpp"
#include "lpwave/wave.hpp"

namespace lpwave {

/// Multi-component field (one entry per schematic component; MD has two).
using FieldTuple = std::vector<SpaceTimeField>;
using DataTuple = std::vector<SpatialField>;

struct IterationConfig {
    SchematicParams schematic;
    double epsilon0 = 1e-3;       ///< data smallness scale
    int max_iter = 12;
    double contraction_tol = 1e-10;
    bool dealias = true;          ///< two-thirds rule on spatial modes
    int derivative_axis = 0;      ///< spatial axis for the gradient factor; -1 = (1,..,1)/sqrt(n) contraction
    double xi_guard = 0.0;        ///< reserved for division diagnostics
};

struct ScatteringData {
    DataTuple f_plus, g_plus, f_minus, g_minus;
};

struct IterationTrace {
    std::vector<double> gs_iter;              ///< G^{s_c} norm of each iterate
    std::vector<double> gs_diff;              ///< G^{s_c} norm of successive differences
    std::vector<double> residual;             ///< finite-difference Box residual per step
    std::vector<std::vector<double>> energy_besov;  ///< per step: t -> Besov s_c profile
    bool converged = false;
    bool diverged = false;
    bool warned_large_data = false;
    int steps = 0;
    DataTuple f0, g0;                         ///< the Cauchy data the run started from
    std::optional<ScatteringData> scattering;
};

/// Quadratic (plus the YM cubic) schematic nonlinearities, products computed
/// pointwise in physical space with spectral derivatives. The two-thirds
/// dealiasing mask is applied to the inputs and the output when enabled.
FieldTuple nonlinearity(const FieldTuple& phi, const SchematicParams& schematic,
                        const IterationConfig& cfg);

/// Zero the spatial modes with any |k_a| > floor(N_x / 3).
SpaceTimeField dealias_two_thirds(const SpaceTimeField& u);

/// Finite-difference wave-operator residual || Box phi - N ||_{L2(L2)} over
/// interior time samples (6th-order centered stencil in t, spectral in x).
double fd_residual(const SpaceTimeField& phi, const SpaceTimeField& nonlin);

/// Picard iteration on phi = W(f,g) + Box^{-1} N(phi, D phi).
/// Divergence (two consecutive growths of the difference norm) is reported
/// in the trace, never retried.
IterationTrace picard_solve(const DataTuple& f, const DataTuple& g, const IterationConfig& cfg,
                            FieldTuple* final_iterate = nullptr);

/// Scattering data per the tail-Duhamel construction. Requires a converged
/// trace. The returned data are exact for the refreshed iterate
/// W(f,g) + Box^{-1} N(phi); use scattering_consistent_iterate to obtain it.
ScatteringData scattering_data(const IterationTrace& trace, const FieldTuple& phi,
                               const IterationConfig& cfg);

FieldTuple scattering_consistent_iterate(const IterationTrace& trace, const FieldTuple& phi,
                                         const IterationConfig& cfg);

/// delta(t) = || phi(t) - W(f+, g+)(t) ||_{Hdot^1} per grid time (single
/// component), and its tail-integral majorant int_t^{T+} ||F(s)||_{L2} ds.
std::vector<double> scattering_discrepancy(const SpaceTimeField& phi, const SpatialField& f_plus,
                                           const SpatialField& g_plus);
std::vector<double> scattering_tail_bound(const SpaceTimeField& F);

/// Hdot^1 norm with the 2 pi |xi| multiplier (matches the tail bound).
double hdot1_norm(const SpatialField& f);

/// Exact lattice rescaling phi -> lambda^sigma phi(lambda .): spectral
/// relabel (tau, xi) -> (lambda tau, lambda xi) with amplitude lambda^sigma.
/// lambda must be a power of two (1/2 allowed when the spectrum is even);
/// spectra crossing the Nyquist range raise std::range_error.
SpaceTimeField scale_transform(const SpaceTimeField& phi, double lambda, double sigma);

/// Data rescaling (f, g) -> (lambda^sigma f(lambda .), lambda^{sigma+1} g(lambda .))
/// carrying the grid measure factor lambda^{-n/2}, which makes the
/// Bdot^{s_c,1} data norm exactly scale invariant on the lattice.
std::pair<SpatialField, SpatialField> data_scale(const SpatialField& f, const SpatialField& g,
                                                 double lambda, double sigma);

}  // namespace lpwave
