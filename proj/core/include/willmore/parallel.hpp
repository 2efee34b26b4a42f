#pragma once

#include <cstddef>
#include <functional>

namespace willmore {

// Worker count used by parallel_for. 0 or 1 means serial.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n) over a static partition. Bodies must only
// write to slots owned by i; reductions are done serially by callers so
// results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace willmore
