#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace spinbell {

/// Worker cap shared by every parallel loop. Initialised from SPINBELL_THREADS
/// when set, otherwise from std::thread::hardware_concurrency().
unsigned thread_cap();
void set_thread_cap(unsigned n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunking depends on
/// the thread cap, so bodies must only write to disjoint per-index outputs.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 1) {
  if (n == 0) return;
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(thread_cap(), (n + min_chunk - 1) / min_chunk));
  if (workers == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Fixed-shape pairwise (tree) summation. The result depends only on the input
/// sequence, never on threading.
double pairwise_sum(std::span<const double> values);

}  // namespace spinbell
