#pragma once

#include <cstddef>
#include <functional>

namespace shnr {

/// Worker count: SHNR_THREADS when set to a positive integer, otherwise the
/// number of hardware threads.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() workers. Results must
/// be written to per-index slots; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace shnr
