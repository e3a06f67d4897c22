#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace igesim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed-splitting rule for independent trials: each trial gets its own stream
// derived only from (master seed, trial index), so results do not depend on
// execution order or thread count.
inline std::uint64_t trial_seed(std::uint64_t master_seed,
                                std::uint64_t trial_index) {
  return splitmix64(master_seed ^ splitmix64(trial_index + 1));
}

// mt19937_64 core with fixed distribution algorithms. The standard pins the
// engine sequence but not the library distributions, so we implement the few
// draws we need to keep outputs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform index in [0, n). n must be >= 1.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(gen_() % n);
  }

  // Box-Muller, no caching so the draw count per call is fixed.
  double normal(double sigma) {
    if (sigma == 0.0) return 0.0;
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace igesim
