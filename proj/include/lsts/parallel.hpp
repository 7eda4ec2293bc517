#pragma once

#include <cstddef>
#include <functional>

namespace lsts {

//! Upper bound on worker threads used by library loops; 0 selects the hardware count.
void set_max_threads(unsigned n);
unsigned max_threads();

//! Runs body(i) for i in [0, n) on up to max_threads() threads. Each index runs once;
//! results must be written to per-index storage. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lsts
