#include "regsynth/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace regsynth {
namespace {

std::atomic<std::size_t> override_workers{0};

std::size_t default_workers() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("RS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) n = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // an unparsable value leaves the default in place
    }
  }
  return n;
}

}  // namespace

std::size_t worker_count() {
  const std::size_t o = override_workers.load();
  if (o != 0) return o;
  static const std::size_t fallback = default_workers();
  return fallback;
}

void set_worker_count(std::size_t n) { override_workers.store(n); }

}  // namespace regsynth
