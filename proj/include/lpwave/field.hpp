#pragma once

#include <complex>
#include <vector>

#include "lpwave/grid.hpp"

namespace lpwave {

using cplx = std::complex<double>;

enum class Rep {
    Physical,        ///< u(t, x)
    SpatialFourier,  ///< u-hat(t, xi): Fourier in space, physical in time
    SpaceTimeFourier ///< u-tilde(tau, xi)
};

const char* rep_name(Rep r);

/// Complex scalar field on the full space-time grid, time-major layout:
/// index = time_index * spatial_points + spatial_index.
///
/// Fields are plain value types; every operation in the library treats them
/// as immutable inputs and returns fresh outputs.
class SpaceTimeField {
public:
    SpaceTimeField(const GridSpec& grid, Rep rep);

    const GridSpec& grid() const { return grid_; }
    Rep rep() const { return rep_; }
    void set_rep(Rep r) { rep_ = r; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

    cplx& at(int time_index, std::int64_t spatial_index) {
        return data_[std::int64_t(time_index) * grid_.spatial_points() + spatial_index];
    }
    const cplx& at(int time_index, std::int64_t spatial_index) const {
        return data_[std::int64_t(time_index) * grid_.spatial_points() + spatial_index];
    }

private:
    GridSpec grid_;
    Rep rep_;
    std::vector<cplx> data_;
};

/// Complex scalar field on the spatial grid only (Cauchy data slices).
class SpatialField {
public:
    enum class SRep { Physical, Fourier };

    SpatialField(const GridSpec& grid, SRep rep);

    const GridSpec& grid() const { return grid_; }
    SRep rep() const { return rep_; }
    void set_rep(SRep r) { rep_ = r; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

private:
    GridSpec grid_;
    SRep rep_;
    std::vector<cplx> data_;
};

/// Elementwise linear combinations (grids and reps must agree).
SpaceTimeField axpy(const SpaceTimeField& x, const SpaceTimeField& y, cplx a, cplx b);
SpatialField axpy(const SpatialField& x, const SpatialField& y, cplx a, cplx b);
void scale_inplace(SpaceTimeField& x, cplx a);

double l2_coeff_norm(const SpaceTimeField& u);
double l2_coeff_norm(const SpatialField& u);

}  // namespace lpwave
