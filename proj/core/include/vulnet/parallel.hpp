// parallel.hpp -- bounded worker-thread helper
#pragma once

#include <cstddef>
#include <functional>

namespace vulnet {

// Process-wide cap on worker threads. 0 restores the default
// (hardware concurrency).
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for every i in [0, n), possibly across threads, and blocks until
// all are done. fn must only touch per-index state; results must not depend
// on execution order, so output is identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vulnet
