#pragma once

#include "ulab/limits.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ulab {

namespace detail {
inline thread_local bool inside_parallel = false;
}  // namespace detail

/// Evaluates fn(i) for i in [0, n) on up to worker_count() threads and
/// returns the results in index order. Reductions over the returned vector
/// are therefore independent of the thread count. Nested calls run serially.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(n);
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1 || detail::inside_parallel) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    const bool saved = detail::inside_parallel;
    detail::inside_parallel = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
    detail::inside_parallel = saved;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ulab
