#pragma once

#include <cstddef>
#include <functional>

namespace lambdasurf {

/// Worker cap: min(hardware threads, 8), overridable by the
/// LAMBDA_SURF_THREADS environment variable (values < 1 clamp to 1).
int max_threads();

/// Runs fn(begin, end) over disjoint blocks of [0, count). Blocks are fixed
/// by count and min_block alone, never by the thread count, so any per-block
/// outputs are bitwise independent of LAMBDA_SURF_THREADS.
void parallel_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn,
                     std::size_t min_block = 256);

}  // namespace lambdasurf
