#pragma once

#include <cstdint>
#include <vector>

#include "igesim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace igesim {

enum class TrialMode { serial, parallel };

// Runs `trials` independent seeded trials and returns their results in trial
// order. Each trial draws from its own stream (see trial_seed), so the
// parallel path is a drop-in replacement for the serial reference: results
// are identical regardless of thread count or scheduling.
template <class T, class Fn>
std::vector<T> run_trials(int trials, std::uint64_t master_seed, Fn&& fn,
                          TrialMode mode = TrialMode::parallel) {
  std::vector<T> out(static_cast<std::size_t>(trials));
  if (mode == TrialMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < trials; ++i) {
      out[static_cast<std::size_t>(i)] = fn(i, trial_seed(master_seed, static_cast<std::uint64_t>(i)));
    }
  } else {
    for (int i = 0; i < trials; ++i) {
      out[static_cast<std::size_t>(i)] = fn(i, trial_seed(master_seed, static_cast<std::uint64_t>(i)));
    }
  }
  return out;
}

inline int trial_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace igesim
