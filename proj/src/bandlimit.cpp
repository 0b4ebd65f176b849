#include "gns/bandlimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gns/rng.hpp"

namespace gns {

void FrequencySet::validate(int n) const {
  int prev = -1;
  for (int idx : indices) {
    if (idx < 0 || idx >= n)
      throw std::invalid_argument("FrequencySet: index " + std::to_string(idx) +
                                  " outside [0, " + std::to_string(n) + ")");
    if (idx <= prev)
      throw std::invalid_argument("FrequencySet: indices must be strictly increasing");
    prev = idx;
  }
}

FrequencySet FrequencySet::all(int n) { return lowest(n); }

FrequencySet FrequencySet::lowest(int count) {
  FrequencySet f;
  f.indices.resize(count);
  std::iota(f.indices.begin(), f.indices.end(), 0);
  return f;
}

int SamplingMask::observed_count() const {
  int count = 0;
  for (int i = 0; i < n(); ++i)
    if (observed[i] != 0.0) ++count;
  return count;
}

void SamplingMask::validate() const {
  for (int i = 0; i < n(); ++i)
    if (observed[i] != 0.0 && observed[i] != 1.0)
      throw std::invalid_argument("SamplingMask: entry " + std::to_string(i) +
                                  " is not 0 or 1");
}

SamplingMask SamplingMask::full(int n) {
  SamplingMask m;
  m.observed = Eigen::VectorXd::Ones(n);
  return m;
}

SamplingMask SamplingMask::from_indices(int n, const std::vector<int>& nodes) {
  SamplingMask m;
  m.observed = Eigen::VectorXd::Zero(n);
  for (int node : nodes) {
    if (node < 0 || node >= n)
      throw std::invalid_argument("SamplingMask: node " + std::to_string(node) +
                                  " outside [0, " + std::to_string(n) + ")");
    if (m.observed[node] != 0.0)
      throw std::invalid_argument("SamplingMask: duplicate node " + std::to_string(node));
    m.observed[node] = 1.0;
  }
  return m;
}

SamplingMask SamplingMask::random(int n, int count, std::uint64_t seed) {
  if (count < 0 || count > n)
    throw std::invalid_argument("SamplingMask: cannot observe " + std::to_string(count) +
                                " of " + std::to_string(n) + " nodes");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample.
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return from_indices(n, pool);
}

namespace {

constexpr double kTieTol = 1e-12;

// Eigenvalues of the bordered Gram submatrix become the squared singular
// values of D_S U_F restricted to the candidate band.
struct Scores {
  double primary;
  double fallback;
};

Scores score_eigenvalues(const Eigen::VectorXd& lambda, BandCriterion criterion) {
  Scores s{};
  double sum_sv = 0.0;
  for (int i = 0; i < lambda.size(); ++i) sum_sv += std::sqrt(std::max(lambda[i], 0.0));
  s.fallback = sum_sv;
  if (criterion == BandCriterion::min_singular_value) {
    s.primary = std::sqrt(std::max(lambda.minCoeff(), 0.0));
  } else {
    double logdet = 0.0;
    for (int i = 0; i < lambda.size(); ++i) {
      if (lambda[i] <= 0.0) {
        logdet = -std::numeric_limits<double>::infinity();
        break;
      }
      logdet += std::log(lambda[i]);
    }
    s.primary = logdet;
  }
  return s;
}

bool degenerate(double primary, BandCriterion criterion) {
  if (criterion == BandCriterion::min_singular_value) return primary <= kTieTol;
  return !std::isfinite(primary);
}

}  // namespace

FrequencySet greedy_select_frequencies(const LaplacianSpectrum& spectrum, const SamplingMask& mask,
                                       int band_size, BandCriterion criterion) {
  const int n = spectrum.n();
  if (mask.n() != n)
    throw std::invalid_argument("greedy_select_frequencies: mask length " +
                                std::to_string(mask.n()) + " != graph size " + std::to_string(n));
  mask.validate();
  if (band_size < 1 || band_size > n)
    throw std::invalid_argument("greedy_select_frequencies: band_size " +
                                std::to_string(band_size) + " outside [1, " + std::to_string(n) +
                                "]");
  const int observed = mask.observed_count();
  if (band_size > observed)
    throw std::invalid_argument(
        "greedy_select_frequencies: band_size " + std::to_string(band_size) + " exceeds the " +
        std::to_string(observed) + " observed nodes; the band is not identifiable");

  // Gram of the masked eigenvector matrix: G = U^T D_S U. Every candidate
  // band's Gram U_F^T D_S U_F is the (F, F) submatrix of G.
  Eigen::MatrixXd u_obs(observed, n);
  int row = 0;
  for (int i = 0; i < n; ++i)
    if (mask.observed[i] != 0.0) u_obs.row(row++) = spectrum.u.row(i);
  const Eigen::MatrixXd gram = u_obs.transpose() * u_obs;

  std::vector<int> selected;
  selected.reserve(band_size);
  std::vector<char> in_set(n, 0);
  Eigen::MatrixXd gsub;  // Gram restricted to the current selection

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (int step = 0; step < band_size; ++step) {
    const int s = step + 1;
    Eigen::MatrixXd cand(s, s);
    if (step > 0) cand.topLeftCorner(step, step) = gsub;

    double best_primary = -std::numeric_limits<double>::infinity();
    double best_fallback = -std::numeric_limits<double>::infinity();
    int primary_arg = -1;
    int fallback_arg = -1;
    for (int j = 0; j < n; ++j) {
      if (in_set[j]) continue;
      for (int k = 0; k < step; ++k) {
        const double g = gram(selected[k], j);
        cand(k, step) = g;
        cand(step, k) = g;
      }
      cand(step, step) = gram(j, j);
      solver.compute(cand, Eigen::EigenvaluesOnly);
      const Scores sc = score_eigenvalues(solver.eigenvalues(), criterion);
      if (sc.primary > best_primary + kTieTol) {
        best_primary = sc.primary;
        primary_arg = j;
      }
      if (sc.fallback > best_fallback + kTieTol) {
        best_fallback = sc.fallback;
        fallback_arg = j;
      }
    }

    const int chosen = degenerate(best_primary, criterion) ? fallback_arg : primary_arg;
    for (int k = 0; k < step; ++k) {
      const double g = gram(selected[k], chosen);
      cand(k, step) = g;
      cand(step, k) = g;
    }
    cand(step, step) = gram(chosen, chosen);
    gsub = cand;
    selected.push_back(chosen);
    in_set[chosen] = 1;
  }

  std::sort(selected.begin(), selected.end());
  FrequencySet band;
  band.indices = std::move(selected);
  band.validate(n);
  return band;
}

BandlimitProjector build_projector(const LaplacianSpectrum& spectrum, const FrequencySet& band) {
  const int n = spectrum.n();
  band.validate(n);
  BandlimitProjector p;
  p.band = band;
  p.u_f.resize(n, band.size());
  for (int c = 0; c < band.size(); ++c) p.u_f.col(c) = spectrum.u.col(band.indices[c]);
  // rankUpdate fills one triangle; mirroring it makes B symmetric exactly.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  b.selfadjointView<Eigen::Lower>().rankUpdate(p.u_f);
  p.matrix = b.selfadjointView<Eigen::Lower>();
  return p;
}

GraphSignal apply_mask(const SamplingMask& mask, const GraphSignal& x) {
  if (mask.n() != x.size())
    throw std::invalid_argument("apply_mask: mask length " + std::to_string(mask.n()) +
                                " != signal length " + std::to_string(x.size()));
  return mask.observed.cwiseProduct(x);
}

double check_sampling_condition(const SamplingMask& mask, const BandlimitProjector& projector) {
  if (mask.n() != projector.n())
    throw std::invalid_argument("check_sampling_condition: mask length " +
                                std::to_string(mask.n()) + " != projector size " +
                                std::to_string(projector.n()));
  const int observed = mask.observed_count();
  const int f = projector.band_size();
  // Fewer observed rows than band columns forces a zero singular value.
  if (observed == 0 || observed < f) return 0.0;
  Eigen::MatrixXd rows(observed, f);
  int row = 0;
  for (int i = 0; i < mask.n(); ++i)
    if (mask.observed[i] != 0.0) rows.row(row++) = projector.u_f.row(i);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rows);
  return svd.singularValues()(f - 1);
}

}  // namespace gns
