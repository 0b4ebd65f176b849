#pragma once

#include <Eigen/Dense>
#include <string>

#include "gns/bandlimit.hpp"
#include "gns/graph.hpp"

namespace gns {

enum class FilterKind { glms, glmp, gsign, gns, gns_exact };

std::string filter_kind_name(FilterKind kind);
FilterKind parse_filter_kind(const std::string& name);

struct FilterConfig {
  FilterKind kind = FilterKind::gns;
  double step_size = 0.1;
  // GLMP only. The interior (1, 2) is the meaningful range; the endpoints are
  // accepted because GLMP reduces to GLMS at p = 2 and to G-Sign at p = 1.
  double p_exponent = 1.2;
  // E|w| for the GNS normalizer; ignored by other kinds.
  double moment_abs = 1.0;
  // Applies the sign in the spectral domain (research variant of GNS).
  bool spectral_sign = false;
  // Lower clamp on |residual| before inversion in the exact normalizer.
  double residual_floor = 1e-6;

  void validate() const;
};

// M (or M[t]) on the band, together with the scalar diagonal of R.
struct NormalizerMatrix {
  Eigen::MatrixXd m;
  double r_scalar = 1.0;
  double condition_number = 1.0;
  // Number of observed residuals clamped by the floor (exact mode only).
  int floor_events = 0;
};

struct GnsNormalizer {
  NormalizerMatrix normalizer;
  Eigen::MatrixXd b_n;
};

// Per-run mutable state. Projector, normalizer, and mask are immutable and
// shareable across concurrent runs; the state only borrows them.
struct FilterState {
  GraphSignal estimate;
  const BandlimitProjector* projector = nullptr;
  const Eigen::MatrixXd* normalized_projector = nullptr;
  const NormalizerMatrix* normalizer = nullptr;
  const SamplingMask* mask = nullptr;
  long t = 0;
  long floor_events = 0;

  int n() const { return static_cast<int>(estimate.size()); }
};

// Zero-initialized estimate borrowing the given operators.
FilterState make_state(const BandlimitProjector& projector, const SamplingMask& mask,
                       const GnsNormalizer* normalizer = nullptr);

// Alternative start x_hat = B D_S y0.
void init_projected_observation(FilterState& state, const GraphSignal& y0);

// One update each. All mutate the estimate in place and advance t. The error
// is e = D_S(y - x_hat) throughout; sign(0) = 0.
//   glms:  x_hat += mu * B * e
//   glmp:  x_hat += mu * B * (|e|^(p-1) .* sign(e))
//   gsign: x_hat += mu_s * B * sign(e)
//   gns:   x_hat += mu_n * B_n * sign(e)
void glms_step(FilterState& state, const GraphSignal& y, double mu);
void glmp_step(FilterState& state, const GraphSignal& y, double mu, double p);
void gsign_step(FilterState& state, const GraphSignal& y, double mu_s);
void gns_step(FilterState& state, const GraphSignal& y, double mu_n);

// GNS with the per-step normalizer recomputed from the current residuals;
// validation mode. Accumulates floor events into the state.
void gns_exact_step(FilterState& state, const GraphSignal& y, double mu_n,
                    double residual_floor = 1e-6);

// Research variant: sign applied after the spectral rotation,
// s_hat += mu_n * M * sign(U_F^T e), pulled back through U_F.
void gns_spectral_step(FilterState& state, const GraphSignal& y, double mu_n);

// Dispatches on config.kind (and config.spectral_sign for GNS).
void advance(FilterState& state, const GraphSignal& y, const FilterConfig& config);

// R = moment_abs^-1 I; M = (U_F^T D_S R U_F)^-1; B_n = U_F M U_F^T.
// Precomputed once per (mask, band, moment) configuration. Throws
// std::invalid_argument naming sigma_min when the inner matrix is singular.
GnsNormalizer build_gns_normalizer(const BandlimitProjector& projector, const SamplingMask& mask,
                                   double moment_abs);

// M[t] = (U_F^T D_S diag(|y - x_hat|^-1) U_F)^-1 with observed residuals
// clamped below at residual_floor; clamp count reported in floor_events.
NormalizerMatrix exact_normalizer(const BandlimitProjector& projector, const SamplingMask& mask,
                                  const GraphSignal& y, const GraphSignal& x_hat,
                                  double residual_floor = 1e-6);

}  // namespace gns
