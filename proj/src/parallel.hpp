#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace liokam {

void set_jobs(int n);
int jobs();

// Static partition of [0, n) into contiguous chunks. Each index is handled by
// exactly one worker and results are written by index, so output does not
// depend on the worker count. The first exception (lowest chunk) is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f, std::size_t min_per_worker = 1) {
  std::size_t w = static_cast<std::size_t>(jobs());
  if (min_per_worker > 0 && n / min_per_worker < w) w = n / min_per_worker;
  if (w <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errs(w);
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  auto chunk = [&](std::size_t c) {
    std::size_t lo = n * c / w, hi = n * (c + 1) / w;
    try {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    } catch (...) {
      errs[c] = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < w; ++c) pool.emplace_back(chunk, c);
  chunk(0);
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace liokam
