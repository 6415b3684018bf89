#pragma once

#include <functional>

namespace vfi {

// Worker count used by parallel_chunks. 0 resets to the hardware default.
void set_num_threads(int n);
int num_threads();

// Runs fn(begin, end) over a fixed partition of [0, count) into contiguous
// chunks, one per worker. Callers must write disjoint outputs per index so
// the result is bitwise identical for any worker count.
void parallel_chunks(int count, const std::function<void(int, int)>& fn);

}  // namespace vfi
