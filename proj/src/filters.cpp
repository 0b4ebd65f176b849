#include "gns/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gns/kernels.hpp"

namespace gns {

std::string filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::glms: return "glms";
    case FilterKind::glmp: return "glmp";
    case FilterKind::gsign: return "gsign";
    case FilterKind::gns: return "gns";
    case FilterKind::gns_exact: return "gns-exact";
  }
  throw std::logic_error("filter_kind_name: unknown kind");
}

FilterKind parse_filter_kind(const std::string& name) {
  if (name == "glms") return FilterKind::glms;
  if (name == "glmp") return FilterKind::glmp;
  if (name == "gsign") return FilterKind::gsign;
  if (name == "gns") return FilterKind::gns;
  if (name == "gns-exact") return FilterKind::gns_exact;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected glms, glmp, gsign, gns, or gns-exact)");
}

void FilterConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size))
    throw std::invalid_argument("FilterConfig: step_size must be positive");
  if (kind == FilterKind::glmp && (p_exponent < 1.0 || p_exponent > 2.0))
    throw std::invalid_argument("FilterConfig: p_exponent must lie in [1, 2]");
  if (!(moment_abs > 0.0) || !std::isfinite(moment_abs))
    throw std::invalid_argument("FilterConfig: moment_abs must be positive");
  if (!(residual_floor > 0.0))
    throw std::invalid_argument("FilterConfig: residual_floor must be positive");
}

namespace {

struct Scratch {
  std::vector<double> e;     // length n
  std::vector<double> bn;    // length n
  std::vector<double> band;  // length |F|
  std::vector<double> band2;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void check_step_inputs(const FilterState& state, const GraphSignal& y) {
  if (state.projector == nullptr || state.mask == nullptr)
    throw std::logic_error("filter step: state is missing projector or mask");
  if (y.size() != state.estimate.size())
    throw std::invalid_argument("filter step: observation length " + std::to_string(y.size()) +
                                " != estimate length " + std::to_string(state.estimate.size()));
}

}  // namespace

FilterState make_state(const BandlimitProjector& projector, const SamplingMask& mask,
                       const GnsNormalizer* normalizer) {
  if (mask.n() != projector.n())
    throw std::invalid_argument("make_state: mask length " + std::to_string(mask.n()) +
                                " != projector size " + std::to_string(projector.n()));
  FilterState state;
  state.estimate = GraphSignal::Zero(projector.n());
  state.projector = &projector;
  state.mask = &mask;
  if (normalizer != nullptr) {
    state.normalized_projector = &normalizer->b_n;
    state.normalizer = &normalizer->normalizer;
  }
  return state;
}

void init_projected_observation(FilterState& state, const GraphSignal& y0) {
  check_step_inputs(state, y0);
  const int n = state.n();
  auto& s = scratch();
  s.e.resize(n);
  kernels::masked_residual(state.mask->observed.data(), y0.data(), state.estimate.data(),
                           s.e.data(), n);
  kernels::matvec(state.projector->matrix.data(), n, n, s.e.data(), state.estimate.data());
}

void glms_step(FilterState& state, const GraphSignal& y, double mu) {
  check_step_inputs(state, y);
  const int n = state.n();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  kernels::masked_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                           s.e.data(), n);
  kernels::matvec(state.projector->matrix.data(), n, n, s.e.data(), s.bn.data());
  kernels::axpy(mu, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void glmp_step(FilterState& state, const GraphSignal& y, double mu, double p) {
  check_step_inputs(state, y);
  if (p < 1.0 || p > 2.0) throw std::invalid_argument("glmp_step: p must lie in [1, 2]");
  const int n = state.n();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  kernels::masked_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                           s.e.data(), n);
  // |e|^(p-1) .* sign(e), with the zero-residual term kept at zero.
  const double q = p - 1.0;
  for (int i = 0; i < n; ++i) {
    const double e = s.e[i];
    s.e[i] = (e == 0.0) ? 0.0 : std::copysign(std::pow(std::abs(e), q), e);
  }
  kernels::matvec(state.projector->matrix.data(), n, n, s.e.data(), s.bn.data());
  kernels::axpy(mu, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void gsign_step(FilterState& state, const GraphSignal& y, double mu_s) {
  check_step_inputs(state, y);
  const int n = state.n();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  kernels::masked_sign_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                                s.e.data(), n);
  kernels::matvec(state.projector->matrix.data(), n, n, s.e.data(), s.bn.data());
  kernels::axpy(mu_s, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void gns_step(FilterState& state, const GraphSignal& y, double mu_n) {
  check_step_inputs(state, y);
  if (state.normalized_projector == nullptr)
    throw std::logic_error("gns_step: state has no normalized projector; build one with "
                           "build_gns_normalizer");
  const int n = state.n();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  kernels::masked_sign_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                                s.e.data(), n);
  kernels::matvec(state.normalized_projector->data(), n, n, s.e.data(), s.bn.data());
  kernels::axpy(mu_n, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void gns_exact_step(FilterState& state, const GraphSignal& y, double mu_n,
                    double residual_floor) {
  check_step_inputs(state, y);
  const NormalizerMatrix mt =
      exact_normalizer(*state.projector, *state.mask, y, state.estimate, residual_floor);
  state.floor_events += mt.floor_events;

  const int n = state.n();
  const int f = state.projector->band_size();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  s.band.resize(f);
  s.band2.resize(f);
  kernels::masked_sign_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                                s.e.data(), n);
  // U_F M[t] U_F^T sign(e) without forming the n x n product.
  kernels::matvec_t(state.projector->u_f.data(), n, f, s.e.data(), s.band.data());
  kernels::matvec(mt.m.data(), f, f, s.band.data(), s.band2.data());
  kernels::matvec(state.projector->u_f.data(), n, f, s.band2.data(), s.bn.data());
  kernels::axpy(mu_n, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void gns_spectral_step(FilterState& state, const GraphSignal& y, double mu_n) {
  check_step_inputs(state, y);
  if (state.normalizer == nullptr)
    throw std::logic_error("gns_spectral_step: state has no normalizer matrix");
  const int n = state.n();
  const int f = state.projector->band_size();
  auto& s = scratch();
  s.e.resize(n);
  s.bn.resize(n);
  s.band.resize(f);
  s.band2.resize(f);
  kernels::masked_residual(state.mask->observed.data(), y.data(), state.estimate.data(),
                           s.e.data(), n);
  kernels::matvec_t(state.projector->u_f.data(), n, f, s.e.data(), s.band.data());
  for (int i = 0; i < f; ++i) {
    const double z = s.band[i];
    s.band[i] = (z > 0.0) ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
  }
  kernels::matvec(state.normalizer->m.data(), f, f, s.band.data(), s.band2.data());
  kernels::matvec(state.projector->u_f.data(), n, f, s.band2.data(), s.bn.data());
  kernels::axpy(mu_n, s.bn.data(), state.estimate.data(), n);
  ++state.t;
}

void advance(FilterState& state, const GraphSignal& y, const FilterConfig& config) {
  switch (config.kind) {
    case FilterKind::glms: glms_step(state, y, config.step_size); return;
    case FilterKind::glmp: glmp_step(state, y, config.step_size, config.p_exponent); return;
    case FilterKind::gsign: gsign_step(state, y, config.step_size); return;
    case FilterKind::gns:
      if (config.spectral_sign)
        gns_spectral_step(state, y, config.step_size);
      else
        gns_step(state, y, config.step_size);
      return;
    case FilterKind::gns_exact:
      gns_exact_step(state, y, config.step_size, config.residual_floor);
      return;
  }
  throw std::logic_error("advance: unknown filter kind");
}

namespace {

// Shared tail of both normalizers: invert the band Gram through its
// eigendecomposition and report the condition number.
NormalizerMatrix invert_band_gram(const Eigen::MatrixXd& gram, double r_scalar,
                                  const char* caller) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error(std::string(caller) + ": eigensolver failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double lambda_min = lambda(0);
  const double lambda_max = lambda(lambda.size() - 1);
  const double sigma_min = std::sqrt(std::max(lambda_min, 0.0));
  if (sigma_min <= 1e-10)
    throw std::invalid_argument(
        std::string(caller) + ": inner matrix is singular (sigma_min = " +
        std::to_string(sigma_min) + "); the band is not identifiable from the observed nodes");
  NormalizerMatrix out;
  out.r_scalar = r_scalar;
  out.condition_number = lambda_max / lambda_min;
  const Eigen::MatrixXd& v = solver.eigenvectors();
  out.m = v * lambda.cwiseInverse().asDiagonal() * v.transpose();
  return out;
}

}  // namespace

GnsNormalizer build_gns_normalizer(const BandlimitProjector& projector, const SamplingMask& mask,
                                   double moment_abs) {
  if (mask.n() != projector.n())
    throw std::invalid_argument("build_gns_normalizer: mask length " + std::to_string(mask.n()) +
                                " != projector size " + std::to_string(projector.n()));
  if (!(moment_abs > 0.0) || !std::isfinite(moment_abs))
    throw std::invalid_argument("build_gns_normalizer: moment_abs must be positive");

  const int n = projector.n();
  const int f = projector.band_size();
  const int observed = mask.observed_count();
  Eigen::MatrixXd rows(observed, f);
  int row = 0;
  for (int i = 0; i < n; ++i)
    if (mask.observed[i] != 0.0) rows.row(row++) = projector.u_f.row(i);

  // U_F^T D_S R U_F = moment_abs^-1 * (U_F^T D_S U_F), so M picks up a
  // factor of moment_abs relative to the plain Gram inverse.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(f, f);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();

  GnsNormalizer out;
  out.normalizer = invert_band_gram(gram, 1.0 / moment_abs, "build_gns_normalizer");
  out.normalizer.m *= moment_abs;
  Eigen::MatrixXd b_n = projector.u_f * out.normalizer.m * projector.u_f.transpose();
  out.b_n = 0.5 * (b_n + b_n.transpose());
  return out;
}

NormalizerMatrix exact_normalizer(const BandlimitProjector& projector, const SamplingMask& mask,
                                  const GraphSignal& y, const GraphSignal& x_hat,
                                  double residual_floor) {
  const int n = projector.n();
  if (mask.n() != n || y.size() != n || x_hat.size() != n)
    throw std::invalid_argument("exact_normalizer: dimension mismatch");
  if (!(residual_floor > 0.0))
    throw std::invalid_argument("exact_normalizer: residual_floor must be positive");

  const int f = projector.band_size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(f, f);
  int floor_events = 0;
  for (int i = 0; i < n; ++i) {
    if (mask.observed[i] == 0.0) continue;
    double r = std::abs(y[i] - x_hat[i]);
    if (r < residual_floor) {
      r = residual_floor;
      ++floor_events;
    }
    // Accumulate U_F^T D_S diag(|e|^-1) U_F one observed row at a time.
    gram.selfadjointView<Eigen::Lower>().rankUpdate(projector.u_f.row(i).transpose(), 1.0 / r);
  }
  gram = gram.selfadjointView<Eigen::Lower>();

  NormalizerMatrix out = invert_band_gram(gram, 1.0, "exact_normalizer");
  out.floor_events = floor_events;
  return out;
}

}  // namespace gns
