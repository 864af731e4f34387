#pragma once

#include <cstddef>
#include <functional>

namespace kdvb {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace kdvb
