#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace comptree {

/// Runs fn(0..num_tasks-1) across up to `threads` workers (0 = all hardware
/// threads). Tasks must write only to their own slots; the first exception
/// is rethrown after all workers join.
inline void parallel_for(int num_tasks, int threads,
                         const std::function<void(int)>& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  threads = std::min(threads, num_tasks);
  if (threads <= 1) {
    for (int t = 0; t < num_tasks; ++t) fn(t);
    return;
  }

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= num_tasks || failed.load()) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace comptree
