#pragma once

#include <cstddef>
#include <functional>

namespace tcmfg {

/// Worker count: TCMFG_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Overrides the worker count for the current process (0 restores the default).
void set_worker_count(std::size_t n);

/// Runs body(begin, end) over disjoint contiguous chunks of [0, n).
/// Each output slot must be written by exactly one index; chunk boundaries never
/// change per-slot arithmetic, so results are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace tcmfg
