#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic randomness for experiments. std::mt19937_64 is fully
// specified by the standard, and doubles are produced by explicit bit
// manipulation rather than std::uniform_real_distribution (whose output is
// implementation-defined), so identical seeds give identical streams on
// every platform.

namespace gns {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  // The seed is scrambled through splitmix64 so that nearby seeds (e.g.
  // base ^ run_index) produce decorrelated mt19937_64 states.
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1); safe to pass to log().
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n). Modulo bias is below 2^-53 for the n used
  // here (graph sizes), which is irrelevant next to Monte Carlo error.
  std::uint64_t bounded(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace gns
