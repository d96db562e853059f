#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace gainterm {

/// Worker count: GAINTERM_THREADS env if set, else hardware concurrency.
int default_thread_count();

/// Static-chunked parallel loop. Each index is processed exactly once and
/// writes only to its own slot, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads = 0);

/// Fixed-order pairwise summation; result is independent of how the caller
/// later partitions work across threads.
double pairwise_sum(std::span<const double> xs);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs);

}  // namespace gainterm
