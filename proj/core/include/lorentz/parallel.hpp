#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lorentz {

// Number of workers to use when the caller passes 0.
inline int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Evaluates fn(0..count-1) on a small pool and returns the results in index
// order, so reductions over the output are deterministic. The first exception
// thrown by any task is rethrown after all workers stop.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, int workers, F&& fn) {
  std::vector<R> out(count);
  if (workers <= 0) workers = default_workers();
  const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(pool - 1);
  for (std::size_t t = 1; t < pool; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace lorentz
