// Minimal deterministic work-sharing loop: indices are processed exactly once
// and callers write results into per-index slots, so the outcome is bitwise
// independent of the worker count.

#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace wg::detail {

template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::clamp(hw, 1, std::max(1, n / 8));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace wg::detail
