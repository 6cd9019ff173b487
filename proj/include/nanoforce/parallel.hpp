#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace nanoforce {

//! Worker count from NANOFORCE_THREADS (default 1). Results never depend on it.
inline std::size_t thread_count_from_env() {
  if (const char* v = std::getenv("NANOFORCE_THREADS")) {
    try {
      const long n = std::stol(v);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

//! out[i] = fn(i) for i < n, computed on up to `threads` workers. Each index
//! is evaluated independently, so the output is identical for any thread count.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, std::size_t threads, F&& fn) {
  std::vector<R> out(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t used = std::min(threads, n);
  pool.reserve(used);
  for (std::size_t t = 0; t < used; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace nanoforce
