#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace qh {

/// Worker count: QH_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Each index writes only its own output slot, so results do
/// not depend on scheduling. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qh
