#pragma once

#include <cstddef>
#include <functional>

namespace surv::detail {

/// Worker count from SURVMAIL_THREADS, default 1.
int thread_count();

/// Runs chunk(begin, end) over a partition of [0, n). Chunks write to
/// disjoint indices so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& chunk);

}  // namespace surv::detail
