#include "spinbell/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace spinbell {
namespace {

unsigned initial_cap() {
  if (const char* env = std::getenv("SPINBELL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& cap_storage() {
  static std::atomic<unsigned> cap{initial_cap()};
  return cap;
}

}  // namespace

unsigned thread_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_thread_cap(unsigned n) { cap_storage().store(n == 0 ? initial_cap() : n, std::memory_order_relaxed); }

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace spinbell
