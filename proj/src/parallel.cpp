#include "lpwave/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace lpwave {

namespace {
constexpr int kChunks = 256;  // fixed, so reduction order never depends on threads
}

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

double reduce_sum(std::int64_t count, const std::function<double(std::int64_t)>& term) {
    if (count <= 0) return 0.0;
    const int chunks = static_cast<int>(std::min<std::int64_t>(kChunks, count));
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        const std::int64_t lo = count * c / chunks;
        const std::int64_t hi = count * (c + 1) / chunks;
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[c] = s;
    }
    double total = 0.0;
    for (int c = 0; c < chunks; ++c) total += partial[c];
    return total;
}

double reduce_max(std::int64_t count, const std::function<double(std::int64_t)>& term) {
    if (count <= 0) return 0.0;
    const int chunks = static_cast<int>(std::min<std::int64_t>(kChunks, count));
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        const std::int64_t lo = count * c / chunks;
        const std::int64_t hi = count * (c + 1) / chunks;
        double m = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, term(i));
        partial[c] = m;
    }
    double total = 0.0;
    for (int c = 0; c < chunks; ++c) total = std::max(total, partial[c]);
    return total;
}

namespace ref {

double reduce_sum(std::int64_t count, const std::function<double(std::int64_t)>& term) {
    double s = 0.0;
    for (std::int64_t i = 0; i < count; ++i) s += term(i);
    return s;
}

double reduce_max(std::int64_t count, const std::function<double(std::int64_t)>& term) {
    double m = 0.0;
    for (std::int64_t i = 0; i < count; ++i) m = std::max(m, term(i));
    return m;
}

}  // namespace ref

}  // namespace lpwave
