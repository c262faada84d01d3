#include "lpwave/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace lpwave {

namespace {

double face_grid_factor(int n) {
    if (n <= 2) return 2.0;
    return std::pow(4.0 / n, 1.0 / (n - 1));
}

}  // namespace

AngularSectorSet::AngularSectorSet(int n, double lambda, double delta)
    : n_(n), lambda_(lambda), delta_(delta) {
    if (n < 1) throw config_error("AngularSectorSet: n must be >= 1");
    if (!(delta > 0.0)) throw config_error("AngularSectorSet: delta must be positive");
    if (delta > lambda) throw std::domain_error("AngularSectorSet: delta must not exceed lambda");

    if (n == 1) {
        centers_ = {{1.0}, {-1.0}};
        return;
    }

    const double ratio = lambda / delta;
    const int M = static_cast<int>(std::floor(face_grid_factor(n) * ratio));
    double count_bound = 8.0;
    for (int i = 1; i < n; ++i) count_bound *= ratio;
    if (M < 1 || 2.0 * n > count_bound) {
        // Coarsest partition: one sector covering the whole sphere.
        std::vector<double> c(n, 0.0);
        c[0] = 1.0;
        centers_ = {c};
        return;
    }

    const int faces = 2 * n;
    std::int64_t per_face = 1;
    for (int i = 1; i < n; ++i) per_face *= M;
    centers_.reserve(static_cast<std::size_t>(faces * per_face));
    for (int axis = 0; axis < n; ++axis) {
        for (int sgn = 0; sgn < 2; ++sgn) {
            for (std::int64_t cell = 0; cell < per_face; ++cell) {
                std::vector<double> v(n);
                v[axis] = sgn == 0 ? 1.0 : -1.0;
                std::int64_t rem = cell;
                for (int a = 0; a < n; ++a) {
                    if (a == axis) continue;
                    const int j = static_cast<int>(rem % M);
                    rem /= M;
                    v[a] = -1.0 + (2.0 * j + 1.0) / M;
                }
                double norm = 0.0;
                for (double x : v) norm += x * x;
                norm = std::sqrt(norm);
                for (double& x : v) x /= norm;
                centers_.push_back(std::move(v));
            }
        }
    }
}

int AngularSectorSet::assign(const double* v) const {
    if (centers_.size() == 1) return 0;
    double norm = 0.0;
    for (int a = 0; a < n_; ++a) norm += v[a] * v[a];
    if (!(norm > 0.0)) return 0;
    int best = 0;
    double best_dot = -2.0;
    const double inv = 1.0 / std::sqrt(norm);
    for (int id = 0; id < count(); ++id) {
        double dot = 0.0;
        const std::vector<double>& c = centers_[id];
        for (int a = 0; a < n_; ++a) dot += c[a] * v[a];
        dot *= inv;
        if (dot > best_dot) {
            best_dot = dot;
            best = id;
        }
    }
    return best;
}

namespace {

struct TableKey {
    int n, nx;
    double L, lambda, delta, lo, hi;
    bool operator<(const TableKey& o) const {
        return std::tie(n, nx, L, lambda, delta, lo, hi) <
               std::tie(o.n, o.nx, o.L, o.lambda, o.delta, o.lo, o.hi);
    }
};

std::mutex table_mu;
std::map<TableKey, std::shared_ptr<const std::vector<std::int32_t>>> table_cache;

}  // namespace

std::shared_ptr<const std::vector<std::int32_t>> AngularSectorSet::assign_table(
    const GridSpec& g, double xi2_lo, double xi2_hi) const {
    if (g.n() != n_) throw contract_error("assign_table: grid dimension mismatch");
    const TableKey key{g.n(), g.nx(), g.L(), lambda_, delta_, xi2_lo, xi2_hi};
    {
        std::lock_guard<std::mutex> lock(table_mu);
        auto it = table_cache.find(key);
        if (it != table_cache.end()) return it->second;
    }
    auto table = std::make_shared<std::vector<std::int32_t>>(g.spatial_points(), -1);
    const std::int64_t sp = g.spatial_points();
#pragma omp parallel
    {
        std::vector<int> k(n_);
        std::vector<double> v(n_);
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < sp; ++s) {
            g.spatial_signed(s, k.data());
            double ksq = 0.0;
            for (int a = 0; a < n_; ++a) ksq += double(k[a]) * k[a];
            const double xi2 = ksq / (g.L() * g.L());
            if (xi2 < xi2_lo || xi2 > xi2_hi || xi2 == 0.0) continue;
            for (int a = 0; a < n_; ++a) v[a] = k[a];
            (*table)[s] = assign(v.data());
        }
    }
    std::lock_guard<std::mutex> lock(table_mu);
    auto [it, inserted] = table_cache.emplace(key, table);
    return it->second;
}

double geodesic_angle(const double* a, const double* b, int n) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
    const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
    return std::acos(c);
}

double geodesic_angle(const std::vector<double>& a, const std::vector<double>& b) {
    return geodesic_angle(a.data(), b.data(), static_cast<int>(a.size()));
}

}  // namespace lpwave
