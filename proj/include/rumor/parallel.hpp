#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rumor {

/// Number of worker threads to use when the caller passes 0.
inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(i) for every i in [0, n) on up to `threads` workers.
///
/// Work is handed out in chunks of `grain` indices through a shared counter,
/// so the scheduling is dynamic but every index is visited exactly once.
/// Bodies must only write to locations owned by their index for results to be
/// independent of the thread count. The first exception thrown is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body, std::size_t grain = 1) {
  if (threads == 0) threads = default_threads();
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = (n + grain - 1) / grain;
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(grain);
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + grain);
        for (std::size_t i = begin; i < end; ++i) body(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(n);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Like parallel_for, but each worker gets its own scratch state built by
/// make_state(). Useful for per-thread counters.
template <typename MakeState, typename Body>
void parallel_for_with_state(std::size_t n, unsigned threads, MakeState&& make_state, Body&& body,
                             std::size_t grain = 1) {
  if (threads == 0) threads = default_threads();
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = (n + grain - 1) / grain;
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (workers <= 1) {
    auto state = make_state();
    for (std::size_t i = 0; i < n; ++i) body(state, i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      auto state = make_state();
      for (;;) {
        const std::size_t begin = next.fetch_add(grain);
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + grain);
        for (std::size_t i = begin; i < end; ++i) body(state, i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(n);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rumor
