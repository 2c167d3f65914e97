#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace relaystab {

// RELAYSTAB_THREADS overrides the hardware count
inline std::size_t worker_count() {
  if (const char* env = std::getenv("RELAYSTAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// f(begin, end, worker) over contiguous blocks of [0, n); first exception is rethrown
template <class F>
void parallel_blocks(std::size_t n, F&& f, std::size_t workers = worker_count()) {
  if (n == 0) return;
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    f(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = n * w / workers, e = n * (w + 1) / workers;
      pool.emplace_back([&, b, e, w] {
        try {
          f(b, e, w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace relaystab
