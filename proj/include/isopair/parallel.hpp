#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace isopair {

/// Worker count: ISOPAIR_THREADS if set to a positive integer, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Bodies write to disjoint
/// preallocated slots, so results stay in index order. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace isopair
