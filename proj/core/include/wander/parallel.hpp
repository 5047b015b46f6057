#pragma once

#include <cstddef>
#include <functional>

namespace wander::util {

int hardware_threads();

// Splits [0, n) into contiguous chunks, one worker per chunk. Workers must
// write disjoint output slots; reductions happen serially after the join so
// results do not depend on the thread count.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wander::util
