#pragma once

#include <cstddef>
#include <functional>

namespace degen {

/// Worker count: DEGENLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs job(k) for k in [0, count) on up to worker_count() threads. Jobs must
/// not share mutable state. The first exception thrown by any job is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace degen
