#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace doclab {

/// 0 means "use the hardware concurrency".
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(worker, i) for i in [begin, end) on `workers` threads, pulling
/// indices from a shared counter. Each index is processed exactly once, and
/// `worker` identifies the calling thread (0 <= worker < workers) so callers
/// can keep per-worker scratch. Callers make results deterministic by keying
/// all output on the index, never on the worker.
inline void parallel_for(std::int64_t begin, std::int64_t end, int workers,
                         const std::function<void(int, std::int64_t)>& body) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  workers = resolve_workers(workers);
  if (workers > count) workers = static_cast<int>(count);
  if (workers <= 1) {
    for (std::int64_t i = begin; i < end; ++i) body(0, i);
    return;
  }

  std::atomic<std::int64_t> next{begin};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&](int rank) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= end) return;
      try {
        body(rank, i);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run, t);
  run(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace doclab
