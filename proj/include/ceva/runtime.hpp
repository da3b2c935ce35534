#pragma once

// Cooperative time budget and a small deterministic parallel-for.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ceva {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::optional<std::chrono::steady_clock::time_point>& deadline_slot() {
  static std::optional<std::chrono::steady_clock::time_point> slot;
  return slot;
}
}  // namespace detail

/// Installs a process-wide deadline for the lifetime of the guard.
class ScopedDeadline {
 public:
  explicit ScopedDeadline(std::optional<double> seconds) : saved_(detail::deadline_slot()) {
    if (seconds) {
      detail::deadline_slot() =
          std::chrono::steady_clock::now() +
          std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(*seconds));
    }
  }
  ScopedDeadline(const ScopedDeadline&) = delete;
  ScopedDeadline& operator=(const ScopedDeadline&) = delete;
  ~ScopedDeadline() { detail::deadline_slot() = saved_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> saved_;
};

/// Polled from long-running loops.
inline void check_deadline() {
  const auto& d = detail::deadline_slot();
  if (d && std::chrono::steady_clock::now() > *d) throw BudgetExceeded("time budget exceeded");
}

inline std::size_t default_jobs() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Callers write results
/// into per-index slots, so any reduction over them is order-deterministic.
/// The first exception thrown by a worker is rethrown on the calling thread.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace ceva
