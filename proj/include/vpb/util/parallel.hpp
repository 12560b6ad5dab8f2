#pragma once

#include <functional>

namespace vpb {

// Global worker count for internally parallel loops (OpenMP-backed).
void set_threads(int n);
int threads();

// parallel_for(n, fn): fn(i) for i in [0, n). Each index writes only its own
// outputs, so results are independent of the thread count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace vpb
