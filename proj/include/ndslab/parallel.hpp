#pragma once

#include <cstddef>
#include <functional>

namespace ndslab {

// Process-wide worker count for grid sweeps. Results must not depend on it:
// every parallel loop writes to disjoint slots or reduces with max/min, so
// outputs are bit-identical to the sequential run.
void set_max_threads(int n);
int max_threads();

// Runs body(i) for i in [0, count), split into contiguous chunks across the
// configured number of threads. body must only touch per-index state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace ndslab
