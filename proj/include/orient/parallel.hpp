#pragma once

#include <cstddef>
#include <functional>

namespace orient {

// Worker cap for library loops; 0 restores the hardware default.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Calls fn(i) for i in [0, n) over contiguous chunks. Callers write results
// into per-index slots and reduce afterwards in index order, so the outcome
// does not depend on the worker count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace orient
