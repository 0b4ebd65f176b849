#include "gns/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "gns/kernels.hpp"

namespace gns {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPilotSalt = 0x9E3779B97F4A7C15ULL;
}  // namespace

void ExperimentConfig::validate() const {
  if (noise_enabled) noise.validate();
  if (band_size < 1) throw std::invalid_argument("ExperimentConfig: band_size must be positive");
  if (knn_k < 1) throw std::invalid_argument("ExperimentConfig: knn_k must be positive");
  if (algorithms.empty()) throw std::invalid_argument("ExperimentConfig: no algorithms");
  for (const auto& a : algorithms) a.validate();
  if (n_runs < 1) throw std::invalid_argument("ExperimentConfig: n_runs must be >= 1");
  if (iterations < 1) throw std::invalid_argument("ExperimentConfig: iterations must be >= 1");
  if (ti_column < 0) throw std::invalid_argument("ExperimentConfig: ti_column must be >= 0");
  if (steady.window < 2) throw std::invalid_argument("ExperimentConfig: steady window must be >= 2");
  if (!(steady.rel_tol > 0.0))
    throw std::invalid_argument("ExperimentConfig: steady rel_tol must be positive");
  if (!(tuning.grid_lo > 0.0) || !(tuning.grid_hi >= tuning.grid_lo))
    throw std::invalid_argument("ExperimentConfig: tuning grid bounds invalid");
  if (tuning.grid_points < 1 || tuning.pilot_runs < 1)
    throw std::invalid_argument("ExperimentConfig: tuning grid_points and pilot_runs must be >= 1");
  if (moment.warmup_steps < 1)
    throw std::invalid_argument("ExperimentConfig: moment warmup_steps must be >= 1");
  if (threads < 0) throw std::invalid_argument("ExperimentConfig: threads must be >= 0");
}

SteadyStateEntry detect_steady_state(const std::vector<double>& series, const SteadySpec& spec) {
  if (spec.window < 2) throw std::invalid_argument("detect_steady_state: window must be >= 2");
  const int len = static_cast<int>(series.size());
  if (len < spec.window)
    throw std::invalid_argument("detect_steady_state: series length " + std::to_string(len) +
                                " shorter than window " + std::to_string(spec.window));

  SteadyStateEntry entry;
  entry.window = spec.window;
  entry.rel_tol = spec.rel_tol;
  for (int t = 0; t + spec.window <= len; ++t) {
    double lo = kInf, hi = -kInf, sum = 0.0;
    for (int k = 0; k < spec.window; ++k) {
      const double v = series[t + k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double mean = sum / spec.window;
    const double spread = hi - lo;
    const bool steady = (mean == 0.0) ? (spread == 0.0)
                                      : (spread / std::abs(mean) <= spec.rel_tol);
    if (steady) {
      entry.index = t;
      entry.converged = true;
      double tail = 0.0;
      for (int k = t; k < len; ++k) tail += series[k];
      entry.steady_value = tail / (len - t);
      return entry;
    }
  }
  double tail = 0.0;
  for (int k = len - spec.window; k < len; ++k) tail += series[k];
  entry.steady_value = tail / spec.window;
  return entry;
}

SamplingMask resolve_mask(const MaskSpec& spec, int n_nodes) {
  return spec.explicit_nodes.empty()
             ? SamplingMask::random(n_nodes, spec.count, spec.seed)
             : SamplingMask::from_indices(n_nodes, spec.explicit_nodes);
}

ExperimentEnv build_environment(const DatasetBundle& dataset, const ExperimentConfig& config) {
  config.validate();
  dataset.validate();
  const int n = dataset.n_nodes();

  ExperimentEnv env;
  env.dataset = &dataset;
  env.topology = build_knn_graph(dataset.coords, config.knn_k);
  env.components = connected_components(env.topology);
  env.spectrum = eigendecompose(laplacian(env.topology));
  env.mask = resolve_mask(config.mask, n);
  env.band =
      greedy_select_frequencies(env.spectrum, env.mask, config.band_size, config.band_criterion);
  env.projector = build_projector(env.spectrum, env.band);
  env.sigma_min = check_sampling_condition(env.mask, env.projector);
  return env;
}

double spatial_mse(const GraphSignal& estimate, const GraphSignal& truth) {
  const auto n = estimate.size();
  if (truth.size() != n)
    throw std::invalid_argument("spatial_mse: lengths " + std::to_string(n) + " and " +
                                std::to_string(truth.size()) + " differ");
  return kernels::sum_squared_diff(estimate.data(), truth.data(), static_cast<int>(n)) /
         static_cast<double>(n);
}

double spectral_mae(const GraphSignal& estimate, const GraphSignal& truth,
                    const BandlimitProjector& projector) {
  const int n = projector.n();
  if (estimate.size() != n || truth.size() != n)
    throw std::invalid_argument("spectral_mae: signal length does not match projector");
  const int f = projector.band_size();
  thread_local std::vector<double> diff, band;
  diff.resize(n);
  band.resize(f);
  for (int i = 0; i < n; ++i) diff[i] = estimate[i] - truth[i];
  kernels::matvec_t(projector.u_f.data(), n, f, diff.data(), band.data());
  return kernels::sum_abs(band.data(), f) / static_cast<double>(f);
}

namespace {

struct ResolvedAlg {
  std::string name;
  FilterConfig config;
  double moment_abs = 1.0;
  const GnsNormalizer* normalizer = nullptr;  // owned by Resolution
};

struct Resolution {
  std::vector<ResolvedAlg> algs;
  std::vector<std::unique_ptr<GnsNormalizer>> owned;
};

bool is_gns_kind(FilterKind kind) {
  return kind == FilterKind::gns || kind == FilterKind::gns_exact;
}

double resolve_moment(const ExperimentConfig& config, const FilterConfig& alg) {
  switch (config.moment.mode) {
    case MomentMode::fixed:
      return alg.moment_abs;
    case MomentMode::empirical:
      return 1.0;  // scaled per run from warm-up residuals
    case MomentMode::closed_form:
      break;
  }
  if (!config.noise_enabled) return 1.0;
  if (config.noise.alpha <= 1.0)
    throw std::invalid_argument(
        "closed-form E|w| is undefined for alpha <= 1; use the fixed or empirical moment mode");
  return flom_abs_moment(config.noise);
}

Resolution resolve_algorithms(const ExperimentEnv& env, const ExperimentConfig& config) {
  Resolution res;
  for (const FilterConfig& original : config.algorithms) {
    ResolvedAlg r;
    r.config = original;
    r.config.validate();
    if (r.config.kind == FilterKind::glmp && config.noise_enabled &&
        config.noise.alpha < r.config.p_exponent) {
      // GLMP needs p < alpha for finite p-th moments; drop p just below alpha.
      r.config.p_exponent = std::max(1.0, config.noise.alpha - 0.05);
    }
    if (is_gns_kind(r.config.kind)) {
      r.moment_abs = resolve_moment(config, r.config);
      r.config.moment_abs = r.moment_abs;
    }
    if (r.config.kind == FilterKind::gns) {
      res.owned.push_back(std::make_unique<GnsNormalizer>(
          build_gns_normalizer(env.projector, env.mask, r.moment_abs)));
      r.normalizer = res.owned.back().get();
    }
    r.name = filter_kind_name(r.config.kind);
    if (r.config.kind == FilterKind::gns && r.config.spectral_sign) r.name = "gns-spectral";
    res.algs.push_back(std::move(r));
  }
  // Duplicate kinds get an index suffix so CSV rows stay unambiguous.
  for (std::size_t i = 0; i < res.algs.size(); ++i) {
    int twin = 0;
    for (std::size_t j = 0; j < i; ++j)
      if (res.algs[j].name == res.algs[i].name ||
          res.algs[j].name.rfind(res.algs[i].name + "-", 0) == 0)
        ++twin;
    if (twin > 0) res.algs[i].name += "-" + std::to_string(twin + 1);
  }
  return res;
}

// Per-run output written into disjoint slices of preallocated storage.
struct RunStorage {
  int t_steps = 0;
  int n_runs = 0;
  // Indexed [alg][run * t_steps + t].
  std::vector<std::vector<double>> spatial;
  std::vector<std::vector<double>> spectral;
  std::vector<std::vector<long>> floor_events;        // [alg][run]
  std::vector<std::vector<double>> empirical_moment;  // [alg][run]
};

void execute_run(const ExperimentEnv& env, const ExperimentConfig& config,
                 const std::vector<ResolvedAlg>& algs, int run, RunStorage& store) {
  const int n = env.projector.n();
  const int t_steps = store.t_steps;
  const bool time_invariant = config.mode == RunMode::time_invariant;
  const std::uint64_t run_seed = config.seed ^ static_cast<std::uint64_t>(run);

  std::optional<StableGenerator> noise;
  if (config.noise_enabled) noise.emplace(config.noise, run_seed);

  const std::size_t n_algs = algs.size();
  std::vector<FilterState> states;
  states.reserve(n_algs);
  for (const auto& a : algs) states.push_back(make_state(env.projector, env.mask, a.normalizer));

  // Blind-mode per-run moment estimate, folded into the step size after the
  // warm-up window (B_n scales linearly in E|w|).
  const bool blind = config.moment.mode == MomentMode::empirical;
  std::vector<double> mu_scale(n_algs, 1.0);
  std::vector<double> abs_sum(n_algs, 0.0);
  std::vector<long> abs_count(n_algs, 0);

  Eigen::VectorXd y(n);
  Eigen::VectorXd w;
  if (noise) w.resize(n);

  for (int t = 0; t < t_steps; ++t) {
    const auto x_g = env.dataset->signal.col(time_invariant ? config.ti_column : t);
    if (noise) {
      noise->fill(w.data(), n);
      for (int i = 0; i < n; ++i) y[i] = env.mask.observed[i] * (x_g[i] + w[i]);
    } else {
      for (int i = 0; i < n; ++i) y[i] = env.mask.observed[i] * x_g[i];
    }

    for (std::size_t a = 0; a < n_algs; ++a) {
      FilterState& state = states[a];
      const ResolvedAlg& alg = algs[a];
      if (t == 0 && config.init == InitKind::projected_observation) {
        init_projected_observation(state, y);
      } else if (blind && alg.config.kind == FilterKind::gns) {
        if (t < config.moment.warmup_steps) {
          for (int i = 0; i < n; ++i)
            if (env.mask.observed[i] != 0.0) {
              abs_sum[a] += std::abs(y[i] - state.estimate[i]);
              ++abs_count[a];
            }
        }
        const double mu = alg.config.step_size * mu_scale[a];
        if (alg.config.spectral_sign)
          gns_spectral_step(state, y, mu);
        else
          gns_step(state, y, mu);
        if (t == config.moment.warmup_steps - 1 && abs_count[a] > 0) {
          const double est = abs_sum[a] / static_cast<double>(abs_count[a]);
          if (std::isfinite(est) && est > 0.0) mu_scale[a] = est;
        }
      } else {
        advance(state, y, alg.config);
      }

      if (!state.estimate.allFinite())
        throw DivergenceError("run " + std::to_string(run) + ", step " + std::to_string(t) +
                              ", algorithm " + alg.name + ": estimate is no longer finite " +
                              "(step size " + std::to_string(alg.config.step_size) + ")");

      const std::size_t slot = static_cast<std::size_t>(run) * t_steps + t;
      store.spatial[a][slot] = spatial_mse(state.estimate, x_g);
      store.spectral[a][slot] = spectral_mae(state.estimate, x_g, env.projector);
    }
  }

  for (std::size_t a = 0; a < n_algs; ++a) {
    store.floor_events[a][run] = states[a].floor_events;
    store.empirical_moment[a][run] = (blind && algs[a].config.kind == FilterKind::gns)
                                         ? mu_scale[a]
                                         : 0.0;
  }
}

}  // namespace

RunResult run_online_prediction(const ExperimentEnv& env, const ExperimentConfig& config) {
  config.validate();
  if (env.dataset == nullptr) throw std::invalid_argument("run_online_prediction: no dataset");
  const int n = env.projector.n();
  if (env.dataset->n_nodes() != n)
    throw std::invalid_argument("run_online_prediction: dataset has " +
                                std::to_string(env.dataset->n_nodes()) + " nodes, graph has " +
                                std::to_string(n));
  const bool time_invariant = config.mode == RunMode::time_invariant;
  if (time_invariant && config.ti_column >= env.dataset->t_steps())
    throw std::invalid_argument("run_online_prediction: ti_column " +
                                std::to_string(config.ti_column) + " outside dataset");
  const int t_steps = time_invariant ? config.iterations : env.dataset->t_steps();
  if (t_steps < config.steady.window)
    throw std::invalid_argument("run_online_prediction: fewer steps than the steady window");

  const Resolution res = resolve_algorithms(env, config);
  const std::size_t n_algs = res.algs.size();
  const int n_runs = config.n_runs;

  RunStorage store;
  store.t_steps = t_steps;
  store.n_runs = n_runs;
  store.spatial.assign(n_algs, std::vector<double>(static_cast<std::size_t>(n_runs) * t_steps));
  store.spectral.assign(n_algs, std::vector<double>(static_cast<std::size_t>(n_runs) * t_steps));
  store.floor_events.assign(n_algs, std::vector<long>(n_runs, 0));
  store.empirical_moment.assign(n_algs, std::vector<double>(n_runs, 0.0));

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n_runs));

  if (threads == 1) {
    for (int run = 0; run < n_runs; ++run) execute_run(env, config, res.algs, run, store);
  } else {
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) {
      pool.emplace_back([&, k]() {
        try {
          for (int run = k; run < n_runs; run += threads) {
            {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (first_error) return;
            }
            execute_run(env, config, res.algs, run, store);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // Fixed-order reduction over run index: results do not depend on the
  // thread count.
  RunResult result;
  result.t_steps = t_steps;
  result.n_runs = n_runs;
  result.algorithms.resize(n_algs);
  for (std::size_t a = 0; a < n_algs; ++a) {
    AlgorithmResult& out = result.algorithms[a];
    out.name = res.algs[a].name;
    out.resolved = res.algs[a].config;
    out.moment_abs = res.algs[a].moment_abs;
    out.spatial_mse.assign(t_steps, 0.0);
    out.spectral_mae.assign(t_steps, 0.0);
    for (int run = 0; run < n_runs; ++run) {
      const std::size_t base = static_cast<std::size_t>(run) * t_steps;
      for (int t = 0; t < t_steps; ++t) {
        out.spatial_mse[t] += store.spatial[a][base + t];
        out.spectral_mae[t] += store.spectral[a][base + t];
      }
      out.floor_events += store.floor_events[a][run];
      out.mean_empirical_moment += store.empirical_moment[a][run];
    }
    for (int t = 0; t < t_steps; ++t) {
      out.spatial_mse[t] /= n_runs;
      out.spectral_mae[t] /= n_runs;
    }
    out.mean_empirical_moment /= n_runs;

    out.steady_mse_state = detect_steady_state(out.spatial_mse, config.steady);
    out.steady_mae_state = detect_steady_state(out.spectral_mae, config.steady);
    const int t_star = out.steady_mse_state.converged ? out.steady_mse_state.index
                                                      : t_steps - config.steady.window;
    out.per_run_steady_mse.assign(n_runs, 0.0);
    double total = 0.0;
    for (int run = 0; run < n_runs; ++run) {
      const std::size_t base = static_cast<std::size_t>(run) * t_steps;
      double sum = 0.0;
      for (int t = t_star; t < t_steps; ++t) sum += store.spatial[a][base + t];
      out.per_run_steady_mse[run] = sum / (t_steps - t_star);
      total += out.per_run_steady_mse[run];
    }
    out.steady_mse = total / n_runs;
  }
  return result;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("geometric_grid: invalid bounds");
  if (points < 1) throw std::invalid_argument("geometric_grid: points must be >= 1");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double ratio = hi / lo;
  for (int i = 0; i < points; ++i)
    grid[i] = lo * std::pow(ratio, static_cast<double>(i) / (points - 1));
  return grid;
}

namespace {

ExperimentConfig pilot_config(const ExperimentConfig& config, const FilterConfig& algorithm) {
  ExperimentConfig pilot = config;
  pilot.n_runs = config.tuning.pilot_runs;
  pilot.seed = splitmix64(config.seed ^ kPilotSalt);
  pilot.algorithms = {algorithm};
  return pilot;
}

}  // namespace

double tune_step_size(const ExperimentEnv& env, const ExperimentConfig& config,
                      const FilterConfig& algorithm, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("tune_step_size: empty grid");
  ExperimentConfig pilot = pilot_config(config, algorithm);
  double best_mse = kInf;
  double best_mu = std::numeric_limits<double>::quiet_NaN();
  for (const double mu : grid) {
    if (!(mu > 0.0)) throw std::invalid_argument("tune_step_size: grid values must be positive");
    pilot.algorithms[0].step_size = mu;
    double mse = kInf;
    try {
      const RunResult r = run_online_prediction(env, pilot);
      mse = r.algorithms[0].steady_mse;
      if (!std::isfinite(mse)) mse = kInf;
    } catch (const DivergenceError&) {
      mse = kInf;
    }
    if (mse < best_mse || (mse == best_mse && mse < kInf && mu < best_mu)) {
      best_mse = mse;
      best_mu = mu;
    }
  }
  if (!std::isfinite(best_mse))
    throw std::runtime_error("tune_step_size: every grid value diverged");
  return best_mu;
}

double match_step_size_to_mae(const ExperimentEnv& env, const ExperimentConfig& config,
                              const FilterConfig& algorithm, double target_mae,
                              double rel_tolerance) {
  if (!(target_mae > 0.0) || !(rel_tolerance > 0.0))
    throw std::invalid_argument("match_step_size_to_mae: target and tolerance must be positive");
  ExperimentConfig pilot = pilot_config(config, algorithm);

  auto eval = [&](double mu) -> double {
    pilot.algorithms[0].step_size = mu;
    try {
      const RunResult r = run_online_prediction(env, pilot);
      return r.algorithms[0].steady_mae_state.steady_value;
    } catch (const DivergenceError&) {
      return kInf;
    }
  };

  double lo = config.tuning.grid_lo;
  double hi = config.tuning.grid_hi;
  // Steady error grows with the step size; bracket the target, clamping when
  // it lies outside the grid.
  if (eval(lo) >= target_mae) return lo;
  if (eval(hi) <= target_mae) return hi;

  double best_mu = lo;
  double best_dev = kInf;
  for (int iter = 0; iter < 40; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double mae = eval(mid);
    const double dev = std::abs(mae - target_mae) / target_mae;
    if (dev < best_dev) {
      best_dev = dev;
      best_mu = mid;
    }
    if (dev <= rel_tolerance) return mid;
    if (mae > target_mae)
      hi = mid;
    else
      lo = mid;
  }
  return best_mu;
}

}  // namespace gns
