#include "lpwave/field.hpp"

#include <cmath>

#include "lpwave/parallel.hpp"

namespace lpwave {

const char* rep_name(Rep r) {
    switch (r) {
        case Rep::Physical: return "physical";
        case Rep::SpatialFourier: return "spatial-fourier";
        case Rep::SpaceTimeFourier: return "spacetime-fourier";
    }
    return "?";
}

SpaceTimeField::SpaceTimeField(const GridSpec& grid, Rep rep) : grid_(grid), rep_(rep) {
    grid.require_field_allocatable();
    data_.assign(static_cast<std::size_t>(grid.total_points()), cplx(0.0, 0.0));
}

SpatialField::SpatialField(const GridSpec& grid, SRep rep) : grid_(grid), rep_(rep) {
    data_.assign(static_cast<std::size_t>(grid.spatial_points()), cplx(0.0, 0.0));
}

SpaceTimeField axpy(const SpaceTimeField& x, const SpaceTimeField& y, cplx a, cplx b) {
    if (!(x.grid() == y.grid())) throw contract_error("axpy: grids differ");
    if (x.rep() != y.rep()) throw contract_error("axpy: representations differ");
    SpaceTimeField out(x.grid(), x.rep());
    const std::int64_t count = x.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) out.data()[i] = a * x.data()[i] + b * y.data()[i];
    return out;
}

SpatialField axpy(const SpatialField& x, const SpatialField& y, cplx a, cplx b) {
    if (!(x.grid() == y.grid())) throw contract_error("axpy: grids differ");
    if (x.rep() != y.rep()) throw contract_error("axpy: representations differ");
    SpatialField out(x.grid(), x.rep());
    const std::int64_t count = x.size();
    for (std::int64_t i = 0; i < count; ++i) out.data()[i] = a * x.data()[i] + b * y.data()[i];
    return out;
}

void scale_inplace(SpaceTimeField& x, cplx a) {
    const std::int64_t count = x.size();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) x.data()[i] *= a;
}

double l2_coeff_norm(const SpaceTimeField& u) {
    return std::sqrt(reduce_sum(u.size(), [&](std::int64_t i) { return std::norm(u.data()[i]); }));
}

double l2_coeff_norm(const SpatialField& u) {
    double s = 0.0;
    for (const cplx& c : u.data()) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace lpwave
