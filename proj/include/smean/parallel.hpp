#pragma once

#include <cstddef>
#include <functional>

namespace smean {

/// Number of worker threads to use: `requested` if positive, otherwise the
/// hardware concurrency (at least 1).
int resolve_threads(int requested);

/// Runs fn(lo, hi) over a static contiguous partition of [0, count).
/// Each index is processed by exactly one thread and results written by
/// different indices must not alias, so the outcome is identical for any
/// thread count.
void parallel_for_ranges(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

/// Per-index convenience wrapper around parallel_for_ranges.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace smean
