#pragma once

#include <cstddef>
#include <functional>

namespace pseudofrac {

/// Width of data-parallel loops: PSEUDOFRAC_THREADS when set and positive,
/// otherwise the hardware concurrency (0 in the variable means auto).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) over contiguous chunks. Each index is
/// visited exactly once; callers write results into per-index slots and reduce
/// in index order afterwards, so output never depends on the thread count.
/// Nested calls run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t min_chunk = 8);

}  // namespace pseudofrac
