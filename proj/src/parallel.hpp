#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gg {

// Runs f(i) for i in [0, n) over contiguous chunks, one per worker. The first exception
// thrown by any worker is rethrown on the calling thread.
template <class F>
void parallel_for(size_t n, int workers, F&& f) {
  size_t w = static_cast<size_t>(std::max(1, workers));
  w = std::min(w, std::max<size_t>(1, n));
  if (w == 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (size_t k = 0; k < w; ++k) {
    size_t b = n * k / w, e = n * (k + 1) / w;
    pool.emplace_back([&, b, e] {
      try {
        for (size_t i = b; i < e; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace gg
