#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ncoup::detail {

/// Calls body(i) for every i in [0, n) over contiguous chunks; each index writes only its own slot.
template <typename Body>
void parallel_for(std::size_t n, std::size_t min_parallel, Body&& body) {
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (n < min_parallel || workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&body, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ncoup::detail
