#ifndef PCGOPT_PARALLEL_HPP
#define PCGOPT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pcgopt {

namespace detail {
inline std::size_t& thread_count_setting() {
  static std::size_t count = 1;
  return count;
}
}  // namespace detail

/// Number of worker threads used by parallel_for. Results never depend on it.
inline std::size_t thread_count() { return detail::thread_count_setting(); }

/// 0 selects std::thread::hardware_concurrency().
inline void set_thread_count(std::size_t n) {
  if (n == 0) n = std::max<unsigned>(1u, std::thread::hardware_concurrency());
  detail::thread_count_setting() = n;
}

/// Calls body(i) for i in [0, n). Each index is handled by exactly one thread,
/// so per-index outputs are independent of scheduling. The first exception
/// thrown by any body is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pcgopt

#endif  // PCGOPT_PARALLEL_HPP
