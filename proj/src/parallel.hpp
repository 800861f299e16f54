#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace vsum::detail {

// Runs fn(row_begin, row_end) over [0, rows) split into contiguous bands.
// Callers must only write rows inside their band, so the result does not
// depend on the number of threads.
template <typename Fn>
void parallel_rows(int rows, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(rows, 1));
  if (threads == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(threads - 1));
  const int band = (rows + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    const int begin = t * band;
    const int end = std::min(rows, begin + band);
    if (begin >= end) break;
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(0, std::min(rows, band));
}

}  // namespace vsum::detail
