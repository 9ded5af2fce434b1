#include "stepmap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stepmap {

int worker_count() {
  static const int cached = [] {
    const char* env = std::getenv("STEPMAP_THREADS");
    long requested = 0;
    if (env != nullptr) requested = std::strtol(env, nullptr, 10);
    if (requested <= 0) {
      unsigned hw = std::thread::hardware_concurrency();
      return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return static_cast<int>(requested);
  }();
  return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace stepmap
