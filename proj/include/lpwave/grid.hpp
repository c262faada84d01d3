#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpwave {

/// Thrown when a caller violates an operation contract (wrong representation,
/// mass in a forbidden frequency region, non-converged input, ...).
class contract_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown for invalid configuration (unresolvable shells, exceeded memory
/// budget, malformed run configs, inconsistent composite symbol specs).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point on the dual lattice: time frequency tau (1/time) and spatial
/// frequency vector xi (1/length), centered (signed) indexing.
struct FreqPoint {
    double tau = 0.0;
    std::vector<double> xi;

    double xi_norm_sq() const {
        double s = 0.0;
        for (double x : xi) s += x * x;
        return s;
    }
};

/// Discrete periodic space-time domain: n spatial dimensions with N_x points
/// per axis on a period-L torus, and N_t time samples on a period-T circle.
///
/// Frequency convention: xi_k = k/L, tau_j = j/T with signed (centered)
/// indices; the Nyquist row belongs to the negative side. This matches the
/// transform kernel e^{-2 pi i (tau t + xi.x)}.
class GridSpec {
public:
    GridSpec(int n, int N_x, double L, int N_t, double T);

    int n() const { return n_; }
    int nx() const { return nx_; }
    int nt() const { return nt_; }
    double L() const { return L_; }
    double T() const { return T_; }

    double dx() const { return L_ / nx_; }
    double dt() const { return T_ / nt_; }
    /// Cell measure dt * dx^n used by all mixed-norm quadratures.
    double cell_measure() const;

    std::int64_t spatial_points() const { return spatial_points_; }
    std::int64_t total_points() const { return spatial_points_ * nt_; }

    /// Complex field allocation guard. Grids may be arbitrarily large as
    /// lattice metadata (support enumeration); fields must fit the budget.
    void require_field_allocatable(std::int64_t budget_bytes = default_field_budget_bytes) const;
    static constexpr std::int64_t default_field_budget_bytes = std::int64_t(6) << 30;

    /// Signed frequency index for position i on an axis with N points.
    static int signed_index(int i, int N) { return i < N / 2 ? i : i - N; }
    /// Inverse of signed_index.
    static int storage_index(int k, int N) { return k >= 0 ? k : k + N; }

    double tau_of(int time_index) const { return signed_index(time_index, nt_) / T_; }
    /// Frequency of a flattened lattice index (time-major layout).
    FreqPoint frequency_of(std::int64_t flat_index) const;
    FreqPoint frequency_of_spatial(std::int64_t spatial_index, int time_index) const;

    /// Decode a flattened spatial index into per-axis signed indices.
    void spatial_signed(std::int64_t spatial_index, int* out) const;
    /// |xi|^2 for a flattened spatial index. Exact in double for desk grids.
    double xi_norm_sq(std::int64_t spatial_index) const;

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && nx_ == o.nx_ && nt_ == o.nt_ && L_ == o.L_ && T_ == o.T_;
    }

private:
    int n_;
    int nx_;
    int nt_;
    double L_;
    double T_;
    std::int64_t spatial_points_;
};

/// A dyadic ladder lambda_min * 2^k, k = 0..K-1, with absorbing end shells:
/// the bottom shell claims (0, 2*lambda_min) and the top shell [lambda_max,
/// infinity), so every nonzero value is classified. Interior shells are the
/// half-open [lambda, 2*lambda).
class DyadicLadder {
public:
    DyadicLadder() = default;
    DyadicLadder(double lambda_min, int count);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    /// Shell index of a positive value (absorbing conventions); -1 for <= 0.
    int classify(double value) const;
    /// Index of an exact ladder member, or -1.
    int index_of(double lambda) const;
    bool contains(double lambda) const { return index_of(lambda) >= 0; }

private:
    std::vector<double> values_;
};

/// Dyadic space-time frequency shells resolvable on the grid: from
/// max(1/T, 1/L) up to the largest axis Nyquist frequency.
/// Throws config_error("no resolvable shell") on degenerate grids.
DyadicLadder frequency_shells(const GridSpec& g);

/// Dyadic cone-distance (modulation) shells; same ladder bounds as
/// frequency_shells per the space-time calculus conventions.
DyadicLadder cone_shells(const GridSpec& g);

/// Dyadic spatial-frequency shells: from 1/L up to the spatial Nyquist.
DyadicLadder spatial_shells(const GridSpec& g);

}  // namespace lpwave
