#pragma once

#include <memory>
#include <vector>

#include "lpwave/grid.hpp"

namespace lpwave {

/// Partition of the unit sphere S^{n-1} into ~ (lambda/delta)^{n-1} angular
/// sectors of geodesic size ~ delta/lambda.
///
/// Construction: cubed-sphere center set (uniform grid on each face of the
/// unit cube boundary, normalized), nearest-center Voronoi assignment with
/// ties broken by lowest sector id. The sector count never exceeds
/// 8 * (lambda/delta)^{n-1}; when even the minimal cubed sphere (2n cells)
/// would break that bound the set degenerates to a single sector.
class AngularSectorSet {
public:
    AngularSectorSet(int n, double lambda, double delta);

    int dim() const { return n_; }
    double lambda() const { return lambda_; }
    double delta() const { return delta_; }
    int count() const { return static_cast<int>(centers_.size()); }
    const std::vector<double>& center(int id) const { return centers_[id]; }

    /// Sector id of a direction (need not be normalized; zero vector -> 0).
    int assign(const double* v) const;
    int assign(const std::vector<double>& v) const { return assign(v.data()); }

    /// Per-spatial-lattice-point sector ids for points with
    /// xi2_lo <= |xi|^2 <= xi2_hi; -1 elsewhere. Cached per (grid, bounds).
    std::shared_ptr<const std::vector<std::int32_t>> assign_table(const GridSpec& g,
                                                                  double xi2_lo,
                                                                  double xi2_hi) const;

private:
    int n_;
    double lambda_;
    double delta_;
    std::vector<std::vector<double>> centers_;
};

/// Geodesic (angular) distance between two directions.
double geodesic_angle(const std::vector<double>& a, const std::vector<double>& b);
double geodesic_angle(const double* a, const double* b, int n);

}  // namespace lpwave
