#pragma once

#include <cstddef>
#include <functional>

namespace quasicomb {

/// Worker count: QUASICOMB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Runs fn(i) for i in [0, n), split into contiguous blocks over
/// worker_count() threads. fn must only write to slot i of its outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace quasicomb
