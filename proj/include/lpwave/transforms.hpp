#pragma once

#include <functional>
#include <mutex>

#include "lpwave/field.hpp"

namespace lpwave {

/// Unitary (Plancherel-normalized) discrete transforms with kernel
/// e^{-2 pi i (tau t + xi.x)}. Round trips are exact to rounding.
///
/// The strict entry points below enforce the representation contract and
/// throw contract_error on mismatch; convert() is the lenient router.

SpaceTimeField to_spacetime_fourier(const SpaceTimeField& u);    // Physical -> SpaceTimeFourier
SpaceTimeField from_spacetime_fourier(const SpaceTimeField& u);  // SpaceTimeFourier -> Physical
SpaceTimeField to_spatial_fourier(const SpaceTimeField& u);      // Physical -> SpatialFourier
SpaceTimeField from_spatial_fourier(const SpaceTimeField& u);    // SpatialFourier -> Physical

SpaceTimeField convert(const SpaceTimeField& u, Rep target);

SpatialField to_fourier(const SpatialField& f);
SpatialField to_physical(const SpatialField& f);
SpatialField convert(const SpatialField& f, SpatialField::SRep target);

/// Time-axis-only unitary inverse transform on selected spatial columns of a
/// field in SpaceTimeFourier rep; the fast path behind the L^q(L^2) norms.
/// Output layout: column-major, out[c * N_t + m] = value at (t_m, column c).
/// An optional per-point weight w(time_index, column_index) is applied to the
/// tau-coefficients before transforming (spectral multipliers ride along).
std::vector<cplx> time_inverse_on_columns(
    const SpaceTimeField& u_st, const std::vector<std::int64_t>& columns,
    const std::function<cplx(int, std::int64_t)>& weight = nullptr);

namespace ref {
/// Serial reference transforms (same math, slice loop not parallelized).
SpaceTimeField to_spatial_fourier(const SpaceTimeField& u);
SpaceTimeField from_spatial_fourier(const SpaceTimeField& u);
}  // namespace ref

namespace detail {
/// FFTW plan creation/destruction is not thread-safe; modules creating plans
/// outside the shared cache must hold this lock.
std::mutex& fftw_planner_mutex();
}  // namespace detail

}  // namespace lpwave
