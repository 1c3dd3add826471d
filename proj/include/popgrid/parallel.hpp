#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace popgrid {

/// Splits [0, n) into at most `workers` contiguous chunks and runs
/// fn(begin, end) on each. Chunk boundaries depend only on n and workers, and
/// callers merge per-chunk results in chunk order, so output never depends on
/// scheduling. The first exception thrown by any chunk is rethrown.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                std::max<std::size_t>(n, 1));
  if (w == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
      const std::size_t begin = n * k / w;
      const std::size_t end = n * (k + 1) / w;
      threads.emplace_back([&, k, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace popgrid
