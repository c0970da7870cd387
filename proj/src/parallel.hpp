#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qattack {

// Runs f(0..count-1) on up to `jobs` threads. Results must be written by index
// so that the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  {
    std::vector<std::jthread> workers;
    const auto n = std::min<std::size_t>(jobs, count);
    for (std::size_t t = 0; t < n; ++t)
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next++;
          if (i >= count) return;
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qattack
