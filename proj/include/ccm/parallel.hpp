#pragma once

#include <cstddef>
#include <functional>

namespace ccm {

/// Worker threads to use: CCM_THREADS when set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// disjoint, so bodies that write only to their own indices need no locks.
/// The first exception thrown by any chunk is rethrown after all join.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ccm
