#pragma once

#include <cstddef>
#include <functional>

namespace billiards {

/// Worker count used when a caller passes 0.
int default_workers();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// handled exactly once; callers write results into slot i, which keeps
/// output order independent of scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace billiards
