#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace lpwave {

/// Set the OpenMP worker count for subsequent kernels (0 = leave default).
void set_threads(int n);
int thread_count();

/// Deterministic parallel reduction: the index range is cut into a fixed
/// number of chunks (independent of the thread count), partial sums are
/// accumulated per chunk in parallel, and combined serially in chunk order.
/// Output bits therefore do not depend on the scheduler.
double reduce_sum(std::int64_t count, const std::function<double(std::int64_t)>& term);

/// Same contract for max-reductions.
double reduce_max(std::int64_t count, const std::function<double(std::int64_t)>& term);

namespace ref {
/// Serial reference reductions, kept for testing the parallel kernels.
double reduce_sum(std::int64_t count, const std::function<double(std::int64_t)>& term);
double reduce_max(std::int64_t count, const std::function<double(std::int64_t)>& term);
}  // namespace ref

}  // namespace lpwave
