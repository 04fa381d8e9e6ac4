#pragma once

#include <cstddef>
#include <functional>

namespace ddcor {

/// 0 means "use hardware concurrency".
unsigned resolve_threads(unsigned requested);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work is split
/// into static contiguous chunks, so a result vector indexed by i is filled
/// identically at any thread count. Exceptions from workers are rethrown.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace ddcor
