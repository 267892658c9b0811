#ifndef SIHT_PARALLEL_HPP
#define SIHT_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace siht {

// Worker count: `requested` if nonzero, else $SIHT_WORKERS if set, else
// std::thread::hardware_concurrency() (at least 1).
std::size_t resolve_workers(std::size_t requested);

// Calls task(i) for i in [0, count) on a bounded pool of threads. Tasks
// must write only to their own output slot; callers reduce afterwards in
// index order. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

// Pairwise (cascade) summation; result depends only on the order of values.
double pairwise_sum(std::span<const double> values);

}  // namespace siht

#endif  // SIHT_PARALLEL_HPP
