#pragma once

#include <cstddef>
#include <functional>

namespace splinets {

// Worker count: SPLINET_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Calls fn(i) for i in [0, count). Each index must write only its own outputs.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace splinets
