#pragma once

#include <functional>

namespace ngdr {

// Number of worker threads used by data-parallel loops. 0 selects the
// hardware concurrency. Results never depend on this value: every parallel
// loop in the library writes disjoint per-index outputs and any reduction is
// done sequentially afterwards.
void SetNumThreads(int n);
int NumThreads();

// Calls fn(i) for i in [0, n). Indices are split into contiguous chunks.
void ParallelFor(int n, const std::function<void(int)>& fn);

}  // namespace ngdr
