#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "gns/rng.hpp"

namespace gns {

// Symmetric alpha-stable parameters under the characteristic-function
// convention E[exp(i theta X)] = exp(-gamma * |theta|^alpha). Symmetry
// (beta = 0) and location 0 are fixed.
struct AlphaStableParams {
  double alpha = 2.0;
  double gamma = 0.1;

  // Throws std::invalid_argument unless alpha in (0, 2] and gamma > 0.
  void validate() const;

  // Scale parameter c = gamma^(1/alpha).
  double scale() const;
};

struct NoiseRealization {
  Eigen::VectorXd samples;
  std::uint64_t seed = 0;
};

// Chambers-Mallows-Stuck sampler restricted to beta = 0. Owns its RNG
// state; create one instance per concurrent stream.
class StableGenerator {
 public:
  StableGenerator(const AlphaStableParams& params, std::uint64_t seed);

  double next();
  void fill(double* out, int count);

  const AlphaStableParams& params() const { return params_; }

 private:
  AlphaStableParams params_;
  double scale_;
  Rng rng_;
};

// count i.i.d. SaS(alpha, gamma) draws; deterministic given seed.
NoiseRealization sample_sas(const AlphaStableParams& params, int count, std::uint64_t seed);

// Closed-form first absolute moment E|X| = (2/pi) Gamma(1 - 1/alpha) *
// gamma^(1/alpha). Throws std::domain_error for alpha <= 1, where the
// moment is infinite.
double flom_abs_moment(const AlphaStableParams& params);

// Sample mean of |samples|. Throws std::invalid_argument on empty input.
double estimate_abs_moment_empirical(const NoiseRealization& realization);

}  // namespace gns
