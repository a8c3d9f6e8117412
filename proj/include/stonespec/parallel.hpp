#pragma once

#include <cstddef>

namespace stonespec {

enum class ExecMode { serial, parallel };

/// Runs fn(i) for i in [0, count). In parallel mode iterations run on OpenMP
/// threads, so fn must not throw and must only write to its own slot of any
/// shared output.
template <typename Fn>
void for_each_index(std::ptrdiff_t count, ExecMode mode, Fn&& fn) {
#ifdef _OPENMP
  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
}

}  // namespace stonespec
