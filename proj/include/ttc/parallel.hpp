#pragma once

#include <cstddef>
#include <functional>

namespace ttc {

/// Worker count: `requested` if nonzero, else TTC_THREADS, else hardware concurrency.
std::size_t resolve_threads(std::size_t requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = resolve_threads()).
/// Indices are handed out in contiguous blocks; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

} // namespace ttc
