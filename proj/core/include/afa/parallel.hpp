#pragma once

#include <cstddef>
#include <functional>

namespace afa {

// Runs fn(0..count-1) across up to `threads` workers. Each index must write
// only its own output slot; results are then identical to the serial loop
// regardless of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace afa
