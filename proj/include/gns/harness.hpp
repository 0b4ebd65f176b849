#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gns/bandlimit.hpp"
#include "gns/dataset.hpp"
#include "gns/filters.hpp"
#include "gns/graph.hpp"
#include "gns/stable.hpp"

namespace gns {

enum class RunMode { time_varying, time_invariant };

// Steady state: first window whose max-min spread, relative to the window
// mean, falls within rel_tol.
struct SteadySpec {
  int window = 20;
  double rel_tol = 0.05;
};

struct SteadyStateEntry {
  int index = -1;       // first steady window start; -1 when not converged
  bool converged = false;
  double steady_value = 0.0;  // mean from the steady index to the end, or
                              // over the final window when not converged
  int window = 20;
  double rel_tol = 0.05;
};

SteadyStateEntry detect_steady_state(const std::vector<double>& series, const SteadySpec& spec);

// Observed nodes: explicit list wins; otherwise `count` nodes drawn with
// `seed`.
struct MaskSpec {
  std::vector<int> explicit_nodes;
  int count = 130;
  std::uint64_t seed = 3;
};

// Source of E|w| for the GNS normalizer. closed_form uses the stable-moment
// formula (benchmark mode); fixed uses each algorithm's moment_abs as given;
// empirical estimates it per run from observed residuals over a warm-up
// window (blind mode).
enum class MomentMode { closed_form, fixed, empirical };

struct MomentSpec {
  MomentMode mode = MomentMode::closed_form;
  int warmup_steps = 10;
};

enum class InitKind { zero, projected_observation };

struct TuningSpec {
  double grid_lo = 0.01;
  double grid_hi = 1.0;
  int grid_points = 21;
  int pilot_runs = 100;
};

struct ExperimentConfig {
  AlphaStableParams noise;
  bool noise_enabled = true;
  MaskSpec mask;
  int band_size = 120;
  BandCriterion band_criterion = BandCriterion::min_singular_value;
  int knn_k = 8;
  std::vector<FilterConfig> algorithms;
  int n_runs = 200;
  RunMode mode = RunMode::time_varying;
  int iterations = 300;  // step budget in time-invariant mode
  int ti_column = 0;     // dataset snapshot held fixed in time-invariant mode
  std::uint64_t seed = 1;
  SteadySpec steady;
  TuningSpec tuning;
  MomentSpec moment;
  InitKind init = InitKind::zero;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

// Immutable per-experiment context: graph, spectrum, mask, greedy band, and
// projector, shared by every run.
struct ExperimentEnv {
  const DatasetBundle* dataset = nullptr;
  GraphTopology topology;
  LaplacianSpectrum spectrum;
  SamplingMask mask;
  FrequencySet band;
  BandlimitProjector projector;
  double sigma_min = 0.0;
  int components = 1;  // >1 means the k-NN graph is disconnected
};

// Explicit node list wins over (count, seed) randomization.
SamplingMask resolve_mask(const MaskSpec& spec, int n_nodes);

ExperimentEnv build_environment(const DatasetBundle& dataset, const ExperimentConfig& config);

struct AlgorithmResult {
  std::string name;
  FilterConfig resolved;      // step size, exponent, and moment actually used
  double moment_abs = 1.0;    // resolved E|w| (GNS kinds; 1.0 otherwise)
  std::vector<double> spatial_mse;   // per step, mean over runs
  std::vector<double> spectral_mae;  // per step, mean over runs
  std::vector<double> per_run_steady_mse;
  double steady_mse = 0.0;
  SteadyStateEntry steady_mse_state;
  SteadyStateEntry steady_mae_state;
  long floor_events = 0;
  double mean_empirical_moment = 0.0;  // blind mode diagnostic
};

struct RunResult {
  std::vector<AlgorithmResult> algorithms;
  int t_steps = 0;
  int n_runs = 0;
};

// Thrown when an estimate stops being finite; names run, step, algorithm,
// and step size.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs every configured algorithm over n_runs Monte Carlo realizations. All
// algorithms inside one run consume identical observations at every step;
// the aggregation over runs is a fixed-order reduction, so results are
// bit-identical for any thread count.
RunResult run_online_prediction(const ExperimentEnv& env, const ExperimentConfig& config);

// (1/n) sum over all nodes of squared error.
double spatial_mse(const GraphSignal& estimate, const GraphSignal& truth);

// (1/|F|) sum over band coefficients of |U_F^T (estimate - truth)|.
double spectral_mae(const GraphSignal& estimate, const GraphSignal& truth,
                    const BandlimitProjector& projector);

std::vector<double> geometric_grid(double lo, double hi, int points);

// Grid value minimizing mean steady-state spatial MSE over a pilot set of
// runs; ties pick the smaller step size. Throws when every grid value
// diverges.
double tune_step_size(const ExperimentEnv& env, const ExperimentConfig& config,
                      const FilterConfig& algorithm, const std::vector<double>& grid);

// Log-space bisection of the step size until the algorithm's steady-state
// spectral MAE is within rel_tolerance of target_mae. Clamps to the tuning
// grid bounds when the target is unreachable.
double match_step_size_to_mae(const ExperimentEnv& env, const ExperimentConfig& config,
                              const FilterConfig& algorithm, double target_mae,
                              double rel_tolerance);

}  // namespace gns
