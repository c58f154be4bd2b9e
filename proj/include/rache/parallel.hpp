#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rache {

// Splits [0, count) into `workers` contiguous chunks whose sizes differ by
// at most one and runs fn(worker, begin, end) on each, one thread per
// chunk. Worker 0 runs on the calling thread. The first exception thrown by
// any worker is rethrown after all workers have joined.
template <typename Fn>
void for_each_chunk(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    fn(0u, std::size_t{0}, count);
    return;
  }
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::vector<std::exception_ptr> errors(workers);
  auto bounds = [&](unsigned w) {
    const std::size_t begin = w * base + (w < extra ? w : extra);
    return std::pair{begin, begin + base + (w < extra ? 1 : 0)};
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
      threads.emplace_back([&, w] {
        auto [begin, end] = bounds(w);
        try {
          fn(w, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    auto [begin, end] = bounds(0);
    try {
      fn(0u, begin, end);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rache
