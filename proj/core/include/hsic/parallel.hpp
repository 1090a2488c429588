#pragma once

#include <cstddef>
#include <functional>

namespace hsic {

// Number of workers to use when the caller asks for `requested` (0 = all
// hardware threads).
std::size_t resolve_jobs(std::size_t requested) noexcept;

// Calls body(i) for every i in [0, count) on up to `jobs` threads. Each index
// is visited exactly once; callers write results into index-addressed slots
// so the outcome does not depend on scheduling. The first exception thrown by
// any body is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace hsic
