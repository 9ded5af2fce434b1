#ifndef STEPMAP_PARALLEL_HPP
#define STEPMAP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace stepmap {

// Worker cap from the STEPMAP_THREADS environment variable
// (unset or 0 = hardware concurrency).
int worker_count();

// Runs fn(i) for i in [0, n) on contiguous index chunks. Each index owns its
// output slot, so results are bitwise independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace stepmap

#endif  // STEPMAP_PARALLEL_HPP
