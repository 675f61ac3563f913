#pragma once

#include <cstdint>

namespace falsify {

// Execution mode for the data-parallel kernels. Serial is the reference
// implementation; Parallel uses OpenMP. Both produce bit-identical results:
// parallel loops fill independent per-index slots and any folds (argmin,
// min/max, sums) run serially afterwards, so thread count never changes
// the arithmetic.
enum class Exec { Serial, Parallel };

// Runs body(i) for i in [0, n). The parallel path is only taken above a
// small cutoff so tiny loops skip the thread fork.
template <typename Body>
void for_each_index(std::int64_t n, Exec exec, Body&& body) {
  constexpr std::int64_t kCutoff = 128;
  if (exec == Exec::Parallel && n > kCutoff) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace falsify
