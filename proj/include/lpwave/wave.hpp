#pragma once

#include <map>

#include "lpwave/norms.hpp"

namespace lpwave {

/// W(f, g): solution of the homogeneous wave equation with Cauchy data (f, g),
/// sampled at the grid times. Returned in the spatial-Fourier representation:
/// u-hat(t, xi) = cos(2 pi |xi| t) f-hat + sin(2 pi |xi| t)/(2 pi |xi|) g-hat,
/// with the xi = 0 limit f-hat + t g-hat.
SpaceTimeField propagate(const SpatialField& f, const SpatialField& g);

/// Exact time derivative of propagate (the closed form differentiated).
SpaceTimeField propagate_dt(const SpatialField& f, const SpatialField& g);

/// Half-wave evolution e^{+- 2 pi i t |D_x|} u, spatial-Fourier output.
SpaceTimeField half_wave(const SpatialField& u, int sign);

/// 1/Box with vanishing Cauchy data at t = 0:
/// u-hat(t, xi) = -int_0^t sin(2 pi |xi| (t-s)) / (2 pi |xi|) F-hat(s, xi) ds,
/// composite trapezoidal quadrature on the grid times (xi = 0 kernel -(t-s)).
SpaceTimeField duhamel_inverse(const SpaceTimeField& F);

namespace ref {
/// O(N_t^2) literal-quadrature reference for duhamel_inverse.
SpaceTimeField duhamel_inverse(const SpaceTimeField& F);
}  // namespace ref

/// Spectral wave operator: multiply by 4 pi^2 (tau^2 - |xi|^2) in the
/// space-time Fourier representation (exact on the torus).
SpaceTimeField box_apply(const SpaceTimeField& u);

/// 1/Xi: pointwise division by the wave symbol. The input spectrum must
/// vanish (below 1e-12 of its max) wherever ||tau| - |xi|| < guard; a
/// violation throws contract_error naming the offending lattice point.
/// Output spectrum is zero inside the guard band.
SpaceTimeField xi_inverse(const SpaceTimeField& F, double guard);

/// Spectral time derivative (periodic): multiply by 2 pi i tau.
SpaceTimeField time_derivative_spectral(const SpaceTimeField& u);

/// Cauchy traces: the t = 0 slice and its spectral time derivative.
std::pair<SpatialField, SpatialField> cauchy_data(const SpaceTimeField& u);

/// S_lambda u split into an exact free part (cone-residue coefficients plus
/// the Cauchy correction), an X-routed part and a Y-routed part with zero
/// Cauchy data. The three parts sum to S_lambda u exactly on the lattice.
struct FDecomposition {
    SpaceTimeField free;
    SpaceTimeField xpart;
    SpaceTimeField ypart;
};
FDecomposition f_decompose(const SpaceTimeField& u, double lambda);

/// Foliation of a sign half-space shell by translates of the light cone:
/// samples keyed by the integer s-bin (s = bin / T), each a spatial-Fourier
/// field holding the coefficients with round((tau -+ |xi|) T) = bin.
struct TraceFamily {
    int sign = +1;
    double lambda = 0.0;
    GridSpec grid;
    std::map<int, SpatialField> samples;

    double ds() const { return 1.0 / grid.T(); }
    /// integral ||u_{lambda,s}||_{L^2} ds realized as a bin sum.
    double l1_l2() const;
};

TraceFamily trace_decompose(const SpaceTimeField& u, double lambda, int sign);
SpaceTimeField trace_reconstruct(const TraceFamily& tf);

}  // namespace lpwave
