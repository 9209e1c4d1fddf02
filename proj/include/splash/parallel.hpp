#pragma once

#include <cstddef>
#include <functional>

namespace splash {

/// Worker count: SPLASH_NUM_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) over thread_count() workers using static
/// contiguous blocks. Each index is processed exactly once, so results written
/// to per-index slots do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace splash
