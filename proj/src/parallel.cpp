#include "gainterm/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace gainterm {

int default_thread_count() {
  if (const char* env = std::getenv("GAINTERM_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads) {
  if (threads <= 0) threads = default_thread_count();
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t t = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t k = 0; k < t; ++k) {
    std::size_t lo = n * k / t, hi = n * (k + 1) / t;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {
template <typename T>
T pairwise_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T acc{};
    for (const T& v : xs) acc += v;
    return acc;
  }
  std::size_t half = xs.size() / 2;
  return pairwise_impl(xs.first(half)) + pairwise_impl(xs.subspan(half));
}
}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs); }
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) {
  return pairwise_impl(xs);
}

}  // namespace gainterm
