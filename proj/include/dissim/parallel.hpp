#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dissim {

inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs body(0..n-1) on up to `workers` threads. Work items must be
// independent and write only to their own slots; under that contract the
// outcome is identical for every worker count. The first exception thrown by
// any item is rethrown on the calling thread after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& body) {
  if (n == 0) return;
  workers = resolve_workers(workers);
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;

  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        {
          const std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
        }
        next.store(n, std::memory_order_relaxed);  // stop handing out work
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(drain);
  drain();  // calling thread participates
  for (auto& th : pool) th.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace dissim
