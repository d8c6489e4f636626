#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tvd {

/// Number of workers for a requested count; 0 means all hardware threads.
inline unsigned resolve_threads(unsigned requested)
{
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(k) for k in [0, count) on up to `threads` workers. Tasks are
/// handed out dynamically, so body must only write to per-index storage.
/// The first exception thrown by the lowest failing index is rethrown after all
/// workers stop; remaining tasks are skipped once a failure is seen.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex guard;
  std::size_t failed_index = count;
  std::exception_ptr failure;

  auto run = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (k < failed_index) {
          failed_index = k;
          failure = std::current_exception();
        }
        failed = true;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tvd
