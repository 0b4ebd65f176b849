#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gns/graph.hpp"

namespace gns {

// Frequency index set F. Indices are strictly increasing and refer to
// positions in the ascending eigenvalue ordering of a LaplacianSpectrum.
struct FrequencySet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }

  // Throws std::invalid_argument unless indices are strictly increasing and
  // inside [0, n).
  void validate(int n) const;

  static FrequencySet all(int n);
  static FrequencySet lowest(int count);
};

// Diagonal 0/1 observation operator D_S, stored as its diagonal.
struct SamplingMask {
  Eigen::VectorXd observed;

  int n() const { return static_cast<int>(observed.size()); }
  int observed_count() const;

  // Throws std::invalid_argument unless every entry is exactly 0 or 1.
  void validate() const;

  static SamplingMask full(int n);
  static SamplingMask from_indices(int n, const std::vector<int>& nodes);
  // Draws `count` distinct nodes uniformly at random; deterministic in seed.
  static SamplingMask random(int n, int count, std::uint64_t seed);
};

// B = U_F U_F^T together with the band and the column submatrix U_F.
struct BandlimitProjector {
  Eigen::MatrixXd matrix;
  FrequencySet band;
  Eigen::MatrixXd u_f;

  int n() const { return static_cast<int>(matrix.rows()); }
  int band_size() const { return static_cast<int>(u_f.cols()); }
};

// Greedy objective. min_singular_value maximizes sigma_min(D_S U_F) per
// added index; log_det maximizes log det(U_F^T D_S U_F). Both fall back to
// maximizing the sum of singular values while every candidate extension is
// rank-deficient.
enum class BandCriterion { min_singular_value, log_det };

// Picks band_size frequencies one at a time, each step adding the index that
// maximizes the criterion; ties (within 1e-12) keep the lower index.
// Deterministic given (spectrum, mask, band_size, criterion). Throws
// std::invalid_argument when band_size exceeds the observed-node count (the
// band would not be identifiable from the samples).
FrequencySet greedy_select_frequencies(const LaplacianSpectrum& spectrum, const SamplingMask& mask,
                                       int band_size,
                                       BandCriterion criterion = BandCriterion::min_singular_value);

BandlimitProjector build_projector(const LaplacianSpectrum& spectrum, const FrequencySet& band);

// Entrywise product with the 0/1 indicator; unobserved entries zeroed.
GraphSignal apply_mask(const SamplingMask& mask, const GraphSignal& x);

// Smallest singular value of D_S U_F. A positive value certifies that
// signals bandlimited to F are recoverable from the observed nodes.
double check_sampling_condition(const SamplingMask& mask, const BandlimitProjector& projector);

}  // namespace gns
