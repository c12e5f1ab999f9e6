#pragma once

#include <cstddef>
#include <functional>

namespace gigmine {

/// Worker count for a `--threads` value; 0 means all logical cores.
std::size_t resolve_threads(std::size_t requested);

/// Calls fn(i) for every i in [0, n) on up to `threads` workers. Work items
/// must only write to their own slot; the first exception thrown is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace gigmine
