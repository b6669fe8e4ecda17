#pragma once
#include <cstddef>
#include <functional>

namespace flatcal {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to preallocated slots indexed by i; reductions over such slots are
// then order-independent, keeping outputs identical across thread counts.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int default_thread_count();

}  // namespace flatcal
