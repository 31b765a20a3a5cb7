#pragma once

#include <cstddef>
#include <functional>

namespace entlab {

/// Worker count from LAB_THREADS, else the number of logical cores.
/// Throws std::invalid_argument if LAB_THREADS is set but not a positive
/// integer.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on worker_count() threads. Each index
/// runs exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace entlab
