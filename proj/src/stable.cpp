#include "gns/stable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gns {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void AlphaStableParams::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
    throw std::invalid_argument("AlphaStableParams: alpha must be in (0, 2], got " +
                                std::to_string(alpha));
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("AlphaStableParams: gamma must be positive, got " +
                                std::to_string(gamma));
}

double AlphaStableParams::scale() const { return std::pow(gamma, 1.0 / alpha); }

StableGenerator::StableGenerator(const AlphaStableParams& params, std::uint64_t seed)
    : params_(params), scale_(params.scale()), rng_(seed) {
  params_.validate();
}

double StableGenerator::next() {
  const double alpha = params_.alpha;
  const double inv_alpha = 1.0 / alpha;
  const double tail_exp = (1.0 - alpha) * inv_alpha;
  for (;;) {
    // V uniform on (-pi/2, pi/2), W standard exponential; open intervals keep
    // every factor finite. At alpha = 1 the tail exponent is exactly zero and
    // the formula reduces to scale * tan(V), the Cauchy case.
    const double v = kPi * (rng_.uniform_open() - 0.5);
    const double w = -std::log(rng_.uniform_open());
    const double x = scale_ * (std::sin(alpha * v) / std::pow(std::cos(v), inv_alpha)) *
                     std::pow(std::cos((1.0 - alpha) * v) / w, tail_exp);
    if (std::isfinite(x)) return x;
  }
}

void StableGenerator::fill(double* out, int count) {
  for (int i = 0; i < count; ++i) out[i] = next();
}

NoiseRealization sample_sas(const AlphaStableParams& params, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_sas: count must be positive");
  StableGenerator gen(params, seed);
  NoiseRealization r;
  r.seed = seed;
  r.samples.resize(count);
  gen.fill(r.samples.data(), count);
  return r;
}

double flom_abs_moment(const AlphaStableParams& params) {
  params.validate();
  if (params.alpha <= 1.0)
    throw std::domain_error("flom_abs_moment: E|X| is infinite for alpha <= 1, got alpha = " +
                            std::to_string(params.alpha));
  return (2.0 / kPi) * std::tgamma(1.0 - 1.0 / params.alpha) * params.scale();
}

double estimate_abs_moment_empirical(const NoiseRealization& realization) {
  const auto n = realization.samples.size();
  if (n == 0) throw std::invalid_argument("estimate_abs_moment_empirical: no samples");
  return realization.samples.cwiseAbs().sum() / static_cast<double>(n);
}

}  // namespace gns
