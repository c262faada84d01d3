#include "lpwave/grid.hpp"

#include <algorithm>
#include <cmath>

namespace lpwave {

namespace {
bool power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(int n, int N_x, double L, int N_t, double T)
    : n_(n), nx_(N_x), nt_(N_t), L_(L), T_(T) {
    if (n < 1) throw config_error("GridSpec: spatial dimension must be >= 1");
    if (!power_of_two(N_x) || N_x < 2) throw config_error("GridSpec: N_x must be a power of two >= 2");
    if (!power_of_two(N_t) || N_t < 2) throw config_error("GridSpec: N_t must be a power of two >= 2");
    if (!(L > 0.0) || !(T > 0.0)) throw config_error("GridSpec: L and T must be positive");
    spatial_points_ = 1;
    for (int a = 0; a < n; ++a) {
        spatial_points_ *= N_x;
        if (spatial_points_ > (std::int64_t(1) << 48))
            throw config_error("GridSpec: lattice index range exceeds 2^48");
    }
}

double GridSpec::cell_measure() const {
    double m = dt();
    for (int a = 0; a < n_; ++a) m *= dx();
    return m;
}

void GridSpec::require_field_allocatable(std::int64_t budget_bytes) const {
    const std::int64_t bytes = total_points() * std::int64_t(sizeof(double) * 2);
    if (bytes > budget_bytes)
        throw config_error("GridSpec: field of " + std::to_string(bytes) +
                           " bytes exceeds memory budget of " + std::to_string(budget_bytes));
}

FreqPoint GridSpec::frequency_of(std::int64_t flat_index) const {
    const std::int64_t sp = flat_index % spatial_points_;
    const int m = static_cast<int>(flat_index / spatial_points_);
    return frequency_of_spatial(sp, m);
}

FreqPoint GridSpec::frequency_of_spatial(std::int64_t spatial_index, int time_index) const {
    FreqPoint p;
    p.tau = tau_of(time_index);
    p.xi.resize(n_);
    std::int64_t rem = spatial_index;
    for (int a = n_ - 1; a >= 0; --a) {
        const int i = static_cast<int>(rem % nx_);
        rem /= nx_;
        p.xi[a] = signed_index(i, nx_) / L_;
    }
    return p;
}

void GridSpec::spatial_signed(std::int64_t spatial_index, int* out) const {
    std::int64_t rem = spatial_index;
    for (int a = n_ - 1; a >= 0; --a) {
        out[a] = signed_index(static_cast<int>(rem % nx_), nx_);
        rem /= nx_;
    }
}

double GridSpec::xi_norm_sq(std::int64_t spatial_index) const {
    std::int64_t rem = spatial_index;
    std::int64_t ksq = 0;
    for (int a = n_ - 1; a >= 0; --a) {
        const std::int64_t k = signed_index(static_cast<int>(rem % nx_), nx_);
        rem /= nx_;
        ksq += k * k;
    }
    return double(ksq) / (L_ * L_);
}

DyadicLadder::DyadicLadder(double lambda_min, int count) {
    if (!(lambda_min > 0.0) || count < 1) throw config_error("DyadicLadder: empty ladder");
    values_.resize(count);
    double v = lambda_min;
    for (int i = 0; i < count; ++i, v *= 2.0) values_[i] = v;
}

int DyadicLadder::classify(double value) const {
    if (!(value > 0.0)) return -1;
    // Exponent guess then exact boundary fix-up; dyadic edges are exact doubles.
    int k = static_cast<int>(std::floor(std::log2(value / values_.front())));
    k = std::clamp(k, 0, static_cast<int>(values_.size()) - 1);
    while (k > 0 && value < values_[k]) --k;
    while (k + 1 < static_cast<int>(values_.size()) && value >= values_[k + 1]) ++k;
    return k;
}

int DyadicLadder::index_of(double lambda) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] == lambda) return static_cast<int>(i);
    return -1;
}

namespace {
DyadicLadder make_ladder(double lo, double hi, const char* what) {
    if (!(lo > 0.0) || hi < lo) throw config_error(std::string("no resolvable shell (") + what + ")");
    int count = 0;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 2.0) ++count;
    if (count < 1) throw config_error(std::string("no resolvable shell (") + what + ")");
    return DyadicLadder(lo, count);
}
}  // namespace

DyadicLadder frequency_shells(const GridSpec& g) {
    if (g.nx() < 4 || g.nt() < 4)
        throw config_error("no resolvable shell (axis with fewer than 4 points has no "
                           "non-Nyquist nonzero frequency)");
    const double lo = std::max(1.0 / g.T(), 1.0 / g.L());
    const double hi = std::max(g.nt() / (2.0 * g.T()), g.nx() / (2.0 * g.L()));
    return make_ladder(lo, hi, "space-time");
}

DyadicLadder cone_shells(const GridSpec& g) { return frequency_shells(g); }

DyadicLadder spatial_shells(const GridSpec& g) {
    if (g.nx() < 4)
        throw config_error("no resolvable shell (spatial axis too small)");
    return make_ladder(1.0 / g.L(), g.nx() / (2.0 * g.L()), "spatial");
}

}  // namespace lpwave
