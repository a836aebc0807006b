#pragma once

#include <cstddef>
#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace regsynth {

/// Number of workers used by parallel_for. Defaults to the RS_THREADS
/// environment variable when set, otherwise the hardware concurrency.
std::size_t worker_count();

/// Overrides the worker count for this process; 0 restores the default.
void set_worker_count(std::size_t n);

/// Runs fn(k) for k in [0, n). Work is split into contiguous chunks, so
/// callers that write results by index get output independent of the
/// number of workers. The first exception (lowest chunk) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      try {
        for (std::size_t k = begin; k < end; ++k) fn(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace regsynth
