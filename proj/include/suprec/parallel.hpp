#pragma once

#include <cstddef>
#include <functional>

namespace suprec {

/// 0 means "all hardware threads".
unsigned resolve_workers(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Iterations must be
/// independent. The first exception thrown by any iteration is rethrown after
/// all workers stop.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace suprec
