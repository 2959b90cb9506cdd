#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace ifs {

inline int& worker_count() {
  static int n = static_cast<int>(std::thread::hardware_concurrency());
  return n;
}

inline void set_worker_count(int n) {
  worker_count() = n > 0 ? n : static_cast<int>(std::thread::hardware_concurrency());
}

// Runs f(begin, end) on disjoint index blocks. Callers own any merging, in
// block order, so results stay deterministic.
template <typename F>
void parallel_blocks(std::uint32_t n, F&& f) {
  const int workers = std::max(1, worker_count());
  if (workers == 1 || n < 4096) {
    f(0u, n, 0);
    return;
  }
  const std::uint32_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    const std::uint32_t b = std::min<std::uint32_t>(t * chunk, n);
    const std::uint32_t e = std::min<std::uint32_t>(b + chunk, n);
    if (b >= e) break;
    pool.emplace_back([&, b, e, t] { f(b, e, t); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ifs
