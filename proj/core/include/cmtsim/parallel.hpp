#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace cmtsim {

// Runs f(k) for k in [0, n) over `threads` workers with static striding.
// Results must be written to per-k slots by the caller; aggregation happens
// sequentially afterwards, so the outcome is independent of the thread count.
template <class F>
void parallel_for(int64_t n, int threads, F&& f) {
  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2) {
    for (int64_t k = 0; k < n; ++k) f(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(size_t(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int64_t k = t; k < n; k += threads) f(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cmtsim
