#pragma once

#include <cstddef>
#include <functional>

namespace qnlchain {

/// Worker count: QNLCHAIN_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Calls body(i) for i in [0, count). Each index writes its own slot, so
/// results do not depend on scheduling. The exception from the lowest failing
/// index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qnlchain
