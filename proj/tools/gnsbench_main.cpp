#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gns/bandlimit.hpp"
#include "gns/dataset.hpp"
#include "gns/filters.hpp"
#include "gns/graph.hpp"
#include "gns/harness.hpp"
#include "gns/kernels.hpp"
#include "gns/stable.hpp"
#include "gns/textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gns;

namespace {

constexpr const char* kVersion = "0.1.0";
const std::vector<double> kDefaultSweep = {1.05, 1.1, 1.15, 1.2, 1.25};

struct Options {
  std::string config_path;
  std::string data_path;
  std::string out_dir = "gnsbench-out";
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<int> runs;
  std::optional<int> band_size;
  std::optional<int> observed;
  std::optional<int> threads;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  bool tune_flag = false;
  bool no_tune_flag = false;

  // gen-data
  std::string out_file = "synthetic.csv";
  std::optional<int> nodes;
  std::optional<int> steps;
  std::optional<int> knn;
  std::optional<int> gen_band;
  std::optional<std::uint64_t> gen_seed;
};

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
  }
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json cfg = json::parse(read_file(path));
  if (!cfg.is_object()) throw std::invalid_argument("config root must be a JSON object");
  return cfg;
}

FilterConfig filter_from_json(const json& j) {
  check_keys(j, "algorithms entry",
             {"kind", "step_size", "p_exponent", "moment_abs", "spectral_sign", "residual_floor"});
  if (!j.contains("kind")) throw std::invalid_argument("algorithms entry is missing 'kind'");
  FilterConfig f;
  f.kind = parse_filter_kind(j.at("kind").get<std::string>());
  if (j.contains("step_size")) f.step_size = j.at("step_size").get<double>();
  if (j.contains("p_exponent")) f.p_exponent = j.at("p_exponent").get<double>();
  if (j.contains("moment_abs")) f.moment_abs = j.at("moment_abs").get<double>();
  if (j.contains("spectral_sign")) f.spectral_sign = j.at("spectral_sign").get<bool>();
  if (j.contains("residual_floor")) f.residual_floor = j.at("residual_floor").get<double>();
  return f;
}

SyntheticSpec synthetic_from_json(const json& j) {
  check_keys(j, "dataset.synthetic",
             {"n_nodes", "t_steps", "knn_k", "gen_band_size", "seed", "lat_min", "lat_max",
              "lon_min", "lon_max", "base_amplitude", "freq_decay", "walk_step", "band_indices"});
  SyntheticSpec spec;
  if (j.contains("n_nodes")) spec.n_nodes = j.at("n_nodes").get<int>();
  if (j.contains("t_steps")) spec.t_steps = j.at("t_steps").get<int>();
  if (j.contains("knn_k")) spec.knn_k = j.at("knn_k").get<int>();
  if (j.contains("gen_band_size")) spec.gen_band_size = j.at("gen_band_size").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("lat_min")) spec.lat_min = j.at("lat_min").get<double>();
  if (j.contains("lat_max")) spec.lat_max = j.at("lat_max").get<double>();
  if (j.contains("lon_min")) spec.lon_min = j.at("lon_min").get<double>();
  if (j.contains("lon_max")) spec.lon_max = j.at("lon_max").get<double>();
  if (j.contains("base_amplitude")) spec.base_amplitude = j.at("base_amplitude").get<double>();
  if (j.contains("freq_decay")) spec.freq_decay = j.at("freq_decay").get<double>();
  if (j.contains("walk_step")) spec.walk_step = j.at("walk_step").get<double>();
  if (j.contains("band_indices")) spec.band_indices = j.at("band_indices").get<std::vector<int>>();
  return spec;
}

ExperimentConfig config_from_json(const json& cfg, const Options& opt) {
  check_keys(cfg, "config",
             {"dataset", "noise", "mask", "band_size", "band_criterion", "knn_k", "algorithms",
              "n_runs", "mode", "iterations", "ti_column", "seed", "steady", "tuning",
              "moment_mode", "moment_warmup", "init", "threads", "tune_first", "sweep_alphas",
              "reference_alpha"});

  ExperimentConfig c;
  c.noise.alpha = 1.15;
  c.noise.gamma = 0.1;

  if (cfg.contains("noise")) {
    const json& nj = cfg.at("noise");
    check_keys(nj, "noise", {"alpha", "gamma", "gamma_convention", "enabled"});
    if (nj.contains("alpha")) c.noise.alpha = nj.at("alpha").get<double>();
    if (nj.contains("gamma")) c.noise.gamma = nj.at("gamma").get<double>();
    if (nj.contains("gamma_convention")) {
      const std::string conv = nj.at("gamma_convention").get<std::string>();
      if (conv == "scale") {
        // Input was the scale c; convert to dispersion gamma = c^alpha.
        c.noise.gamma = std::pow(c.noise.gamma, c.noise.alpha);
      } else if (conv != "dispersion") {
        throw std::invalid_argument("gamma_convention must be 'dispersion' or 'scale'");
      }
    }
    if (nj.contains("enabled")) c.noise_enabled = nj.at("enabled").get<bool>();
  }

  if (cfg.contains("mask")) {
    const json& mj = cfg.at("mask");
    check_keys(mj, "mask", {"nodes", "count", "seed"});
    if (mj.contains("nodes")) c.mask.explicit_nodes = mj.at("nodes").get<std::vector<int>>();
    if (mj.contains("count")) c.mask.count = mj.at("count").get<int>();
    if (mj.contains("seed")) c.mask.seed = mj.at("seed").get<std::uint64_t>();
  }

  if (cfg.contains("band_size")) c.band_size = cfg.at("band_size").get<int>();
  if (cfg.contains("band_criterion")) {
    const std::string crit = cfg.at("band_criterion").get<std::string>();
    if (crit == "min_singular_value")
      c.band_criterion = BandCriterion::min_singular_value;
    else if (crit == "log_det")
      c.band_criterion = BandCriterion::log_det;
    else
      throw std::invalid_argument("band_criterion must be 'min_singular_value' or 'log_det'");
  }
  if (cfg.contains("knn_k")) c.knn_k = cfg.at("knn_k").get<int>();

  if (cfg.contains("algorithms")) {
    c.algorithms.clear();
    for (const json& aj : cfg.at("algorithms")) c.algorithms.push_back(filter_from_json(aj));
  }

  if (cfg.contains("n_runs")) c.n_runs = cfg.at("n_runs").get<int>();
  if (cfg.contains("mode")) {
    const std::string mode = cfg.at("mode").get<std::string>();
    if (mode == "time_varying")
      c.mode = RunMode::time_varying;
    else if (mode == "time_invariant")
      c.mode = RunMode::time_invariant;
    else
      throw std::invalid_argument("mode must be 'time_varying' or 'time_invariant'");
  }
  if (cfg.contains("iterations")) c.iterations = cfg.at("iterations").get<int>();
  if (cfg.contains("ti_column")) c.ti_column = cfg.at("ti_column").get<int>();
  if (cfg.contains("seed")) c.seed = cfg.at("seed").get<std::uint64_t>();

  if (cfg.contains("steady")) {
    const json& sj = cfg.at("steady");
    check_keys(sj, "steady", {"window", "rel_tol"});
    if (sj.contains("window")) c.steady.window = sj.at("window").get<int>();
    if (sj.contains("rel_tol")) c.steady.rel_tol = sj.at("rel_tol").get<double>();
  }

  if (cfg.contains("tuning")) {
    const json& tj = cfg.at("tuning");
    check_keys(tj, "tuning", {"grid_lo", "grid_hi", "grid_points", "pilot_runs"});
    if (tj.contains("grid_lo")) c.tuning.grid_lo = tj.at("grid_lo").get<double>();
    if (tj.contains("grid_hi")) c.tuning.grid_hi = tj.at("grid_hi").get<double>();
    if (tj.contains("grid_points")) c.tuning.grid_points = tj.at("grid_points").get<int>();
    if (tj.contains("pilot_runs")) c.tuning.pilot_runs = tj.at("pilot_runs").get<int>();
  }

  if (cfg.contains("moment_mode")) {
    const std::string mode = cfg.at("moment_mode").get<std::string>();
    if (mode == "closed_form")
      c.moment.mode = MomentMode::closed_form;
    else if (mode == "fixed")
      c.moment.mode = MomentMode::fixed;
    else if (mode == "empirical")
      c.moment.mode = MomentMode::empirical;
    else
      throw std::invalid_argument("moment_mode must be 'closed_form', 'fixed', or 'empirical'");
  }
  if (cfg.contains("moment_warmup")) c.moment.warmup_steps = cfg.at("moment_warmup").get<int>();

  if (cfg.contains("init")) {
    const std::string init = cfg.at("init").get<std::string>();
    if (init == "zero")
      c.init = InitKind::zero;
    else if (init == "projected_observation")
      c.init = InitKind::projected_observation;
    else
      throw std::invalid_argument("init must be 'zero' or 'projected_observation'");
  }
  if (cfg.contains("threads")) c.threads = cfg.at("threads").get<int>();

  // Command-line overrides win over the config file.
  if (opt.alpha) c.noise.alpha = *opt.alpha;
  if (opt.gamma) c.noise.gamma = *opt.gamma;
  if (opt.runs) c.n_runs = *opt.runs;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.band_size) c.band_size = *opt.band_size;
  if (opt.observed) {
    c.mask.explicit_nodes.clear();
    c.mask.count = *opt.observed;
  }
  if (opt.threads) c.threads = *opt.threads;
  if (opt.iterations) c.iterations = *opt.iterations;
  return c;
}

void ensure_default_algorithms(ExperimentConfig& c, bool include_glmp) {
  if (!c.algorithms.empty()) return;
  FilterConfig glms;
  glms.kind = FilterKind::glms;
  FilterConfig glmp;
  glmp.kind = FilterKind::glmp;
  FilterConfig gsign;
  gsign.kind = FilterKind::gsign;
  FilterConfig gns;
  gns.kind = FilterKind::gns;
  c.algorithms = include_glmp ? std::vector<FilterConfig>{glms, glmp, gsign, gns}
                              : std::vector<FilterConfig>{glms, gsign, gns};
}

bool tune_requested(const json& cfg, const Options& opt, bool command_default) {
  bool tune = command_default;
  if (cfg.contains("tune_first")) tune = cfg.at("tune_first").get<bool>();
  if (opt.tune_flag) tune = true;
  if (opt.no_tune_flag) tune = false;
  return tune;
}

// Dataset source: --data wins, then dataset.path, then synthetic generation.
DatasetBundle resolve_dataset(const json& cfg, const Options& opt, const ExperimentConfig& c,
                              json& meta) {
  std::string path = opt.data_path;
  json dj = cfg.value("dataset", json::object());
  if (!dj.is_object()) throw std::invalid_argument("dataset must be a JSON object");
  check_keys(dj, "dataset", {"path", "synthetic"});
  if (path.empty() && dj.contains("path")) path = dj.at("path").get<std::string>();

  if (!path.empty()) {
    DatasetBundle bundle = load_dataset_csv(path);
    meta["source"] = path;
    meta["n_nodes"] = bundle.n_nodes();
    meta["t_steps"] = bundle.t_steps();
    return bundle;
  }

  const json sj = dj.value("synthetic", json::object());
  SyntheticSpec spec = synthetic_from_json(sj);
  if (!sj.contains("knn_k")) spec.knn_k = c.knn_k;
  // Default generation band: the run's band plus a few extra frequencies, so
  // the signal is only approximately bandlimited on the reconstruction band,
  // like field data. The leftover power is a noise-independent error floor.
  if (!sj.contains("gen_band_size"))
    spec.gen_band_size = std::min(c.band_size + 4, spec.n_nodes);

  // Benchmark runs reconstruct on the band the greedy rule selects under the
  // experiment mask, so the ground truth is generated on the same selection
  // (the greedy is prefix-nested: a shorter selection is a prefix subset of a
  // longer one, so the run's band is covered whenever its size is <= the
  // generation size). A pinned band_indices list wins.
  if (spec.band_indices.empty()) {
    const SyntheticStructure st = synthetic_structure(spec);
    const SamplingMask mask = resolve_mask(c.mask, spec.n_nodes);
    const FrequencySet band =
        greedy_select_frequencies(st.spectrum, mask, spec.gen_band_size, c.band_criterion);
    spec.band_indices = band.indices;
  }

  DatasetBundle bundle = generate_synthetic_dataset(spec);
  meta["source"] = "synthetic";
  meta["n_nodes"] = spec.n_nodes;
  meta["t_steps"] = spec.t_steps;
  meta["seed"] = spec.seed;
  meta["gen_band_size"] = spec.gen_band_size;
  meta["knn_k"] = spec.knn_k;
  meta["base_amplitude"] = spec.base_amplitude;
  meta["freq_decay"] = spec.freq_decay;
  meta["walk_step"] = spec.walk_step;
  meta["band_indices"] = spec.band_indices;
  return bundle;
}

std::string metrics_csv(const RunResult& result) {
  std::string out = "step,algorithm,spatial_mse,spectral_mae\n";
  for (const auto& alg : result.algorithms)
    for (int t = 0; t < result.t_steps; ++t) {
      out += std::to_string(t);
      out += ',';
      out += alg.name;
      out += ',';
      out += format_double(alg.spatial_mse[t]);
      out += ',';
      out += format_double(alg.spectral_mae[t]);
      out += '\n';
    }
  return out;
}

// Iterations-to-steady follows the mode's reporting focus: the spectral MAE
// series for convergence studies, the spatial MSE series otherwise.
int iters_to_steady(const AlgorithmResult& alg, RunMode mode) {
  const SteadyStateEntry& entry =
      (mode == RunMode::time_invariant) ? alg.steady_mae_state : alg.steady_mse_state;
  return entry.converged ? entry.index : -1;
}

void append_summary_rows(std::string& out, double alpha, const RunResult& result, RunMode mode) {
  for (const auto& alg : result.algorithms) {
    out += format_double(alpha);
    out += ',';
    out += alg.name;
    out += ',';
    out += format_double(alg.steady_mse);
    out += ',';
    out += std::to_string(iters_to_steady(alg, mode));
    out += '\n';
  }
}

json algorithm_meta(const AlgorithmResult& alg, RunMode mode, bool tuned) {
  json j;
  j["name"] = alg.name;
  j["kind"] = filter_kind_name(alg.resolved.kind);
  j["step_size"] = alg.resolved.step_size;
  j["tuned"] = tuned;
  if (alg.resolved.kind == FilterKind::glmp) j["p_exponent"] = alg.resolved.p_exponent;
  if (alg.resolved.kind == FilterKind::gns || alg.resolved.kind == FilterKind::gns_exact) {
    j["moment_abs"] = alg.moment_abs;
    j["spectral_sign"] = alg.resolved.spectral_sign;
  }
  if (alg.floor_events > 0) j["floor_events"] = alg.floor_events;
  if (alg.mean_empirical_moment > 0.0) j["mean_empirical_moment"] = alg.mean_empirical_moment;
  j["steady_mse"] = alg.steady_mse;
  j["iters_to_steady"] = iters_to_steady(alg, mode);
  j["converged"] = (mode == RunMode::time_invariant) ? alg.steady_mae_state.converged
                                                     : alg.steady_mse_state.converged;
  return j;
}

json base_metadata(const std::string& command, const ExperimentConfig& c,
                   const ExperimentEnv& env, const json& dataset_meta) {
  json j;
  j["tool"] = "gnsbench";
  j["version"] = kVersion;
  j["command"] = command;
  j["kernel_backend"] = kernels::backend_name(kernels::active_backend());
  j["dataset"] = dataset_meta;
  j["graph"] = {{"n_nodes", env.topology.n_nodes},
                {"edges", env.topology.edges.size()},
                {"components", env.components},
                {"knn_k", c.knn_k}};
  j["mask_seed"] = c.mask.seed;
  json mask_nodes = json::array();
  for (int i = 0; i < env.mask.n(); ++i)
    if (env.mask.observed[i] != 0.0) mask_nodes.push_back(i);
  j["mask_nodes"] = mask_nodes;
  j["band_size"] = c.band_size;
  j["band_indices"] = env.band.indices;
  j["sigma_min"] = env.sigma_min;
  j["noise"] = {{"alpha", c.noise.alpha},
                {"gamma", c.noise.gamma},
                {"convention", "dispersion"},
                {"enabled", c.noise_enabled}};
  j["n_runs"] = c.n_runs;
  j["seed"] = c.seed;
  j["mode"] = (c.mode == RunMode::time_invariant) ? "time_invariant" : "time_varying";
  if (c.mode == RunMode::time_invariant) {
    j["iterations"] = c.iterations;
    j["ti_column"] = c.ti_column;
  }
  j["steady"] = {{"window", c.steady.window}, {"rel_tol", c.steady.rel_tol}};
  return j;
}

void warn_if_disconnected(const ExperimentEnv& env) {
  if (env.components > 1)
    std::cerr << "gnsbench: warning: k-NN graph has " << env.components
              << " connected components\n";
}

void write_outputs(const std::string& out_dir,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(out_dir);
  for (const auto& [name, content] : files)
    write_file_atomic((fs::path(out_dir) / name).string(), content);
}

void tune_all(const ExperimentEnv& env, ExperimentConfig& c, json& tuned_meta) {
  const std::vector<double> grid =
      geometric_grid(c.tuning.grid_lo, c.tuning.grid_hi, c.tuning.grid_points);
  for (auto& alg : c.algorithms) {
    alg.step_size = tune_step_size(env, c, alg, grid);
    tuned_meta[filter_kind_name(alg.kind)] = alg.step_size;
  }
}

int cmd_run(const Options& opt, const std::string& command, RunMode forced_mode,
            bool has_forced_mode) {
  const json cfg = load_config(opt.config_path);
  ExperimentConfig c = config_from_json(cfg, opt);
  if (has_forced_mode) c.mode = forced_mode;
  ensure_default_algorithms(c, /*include_glmp=*/has_forced_mode);
  const bool tune = tune_requested(cfg, opt, false);

  json dataset_meta;
  const DatasetBundle dataset = resolve_dataset(cfg, opt, c, dataset_meta);
  const ExperimentEnv env = build_environment(dataset, c);
  warn_if_disconnected(env);

  json tuned_meta = json::object();
  if (tune) tune_all(env, c, tuned_meta);

  const RunResult result = run_online_prediction(env, c);

  json meta = base_metadata(command, c, env, dataset_meta);
  if (tune) meta["tuned_step_sizes"] = tuned_meta;
  json algs = json::array();
  for (const auto& alg : result.algorithms) algs.push_back(algorithm_meta(alg, c.mode, tune));
  meta["algorithms"] = algs;

  std::string summary = "alpha,algorithm,steady_mse,iters_to_steady\n";
  append_summary_rows(summary, c.noise.alpha, result, c.mode);

  write_outputs(opt.out_dir, {{"metrics.csv", metrics_csv(result)},
                              {"summary.csv", summary},
                              {"metadata.json", meta.dump(2) + "\n"}});

  for (const auto& alg : result.algorithms)
    std::cout << alg.name << ": steady_mse=" << format_double(alg.steady_mse)
              << " iters_to_steady=" << iters_to_steady(alg, c.mode) << "\n";
  std::cout << "wrote " << (fs::path(opt.out_dir) / "metrics.csv").string() << "\n";
  return 0;
}

int cmd_tune(const Options& opt) {
  const json cfg = load_config(opt.config_path);
  ExperimentConfig c = config_from_json(cfg, opt);
  ensure_default_algorithms(c, /*include_glmp=*/false);

  json dataset_meta;
  const DatasetBundle dataset = resolve_dataset(cfg, opt, c, dataset_meta);
  const ExperimentEnv env = build_environment(dataset, c);
  warn_if_disconnected(env);

  json tuned_meta = json::object();
  tune_all(env, c, tuned_meta);

  json meta = base_metadata("tune", c, env, dataset_meta);
  meta["tuned_step_sizes"] = tuned_meta;
  meta["tuning"] = {{"grid_lo", c.tuning.grid_lo},
                    {"grid_hi", c.tuning.grid_hi},
                    {"grid_points", c.tuning.grid_points},
                    {"pilot_runs", c.tuning.pilot_runs}};

  write_outputs(opt.out_dir, {{"tuning.json", tuned_meta.dump(2) + "\n"},
                              {"metadata.json", meta.dump(2) + "\n"}});

  for (auto it = tuned_meta.begin(); it != tuned_meta.end(); ++it)
    std::cout << it.key() << ": step_size=" << it.value().dump() << "\n";
  return 0;
}

int cmd_table1(const Options& opt) {
  const json cfg = load_config(opt.config_path);
  ExperimentConfig base = config_from_json(cfg, opt);
  base.mode = RunMode::time_varying;
  ensure_default_algorithms(base, /*include_glmp=*/false);

  std::vector<double> alphas = kDefaultSweep;
  if (cfg.contains("sweep_alphas")) alphas = cfg.at("sweep_alphas").get<std::vector<double>>();
  if (alphas.empty()) throw std::invalid_argument("sweep_alphas must not be empty");
  const bool tune = tune_requested(cfg, opt, true);
  // Each alpha tunes its own step sizes so every column is the algorithm at
  // its best for that noise. Setting reference_alpha pins one tuning pass
  // whose step sizes the whole sweep reuses.
  std::optional<double> reference_alpha;
  if (cfg.contains("reference_alpha"))
    reference_alpha = cfg.at("reference_alpha").get<double>();

  json dataset_meta;
  const DatasetBundle dataset = resolve_dataset(cfg, opt, base, dataset_meta);
  const ExperimentEnv env = build_environment(dataset, base);
  warn_if_disconnected(env);

  json tuned_meta = json::object();
  if (tune && reference_alpha) {
    ExperimentConfig at_ref = base;
    at_ref.noise.alpha = *reference_alpha;
    tune_all(env, at_ref, tuned_meta);
    base.algorithms = at_ref.algorithms;
  }

  std::string summary = "alpha,algorithm,steady_mse,iters_to_steady\n";
  json sweep_meta = json::array();
  for (const double alpha : alphas) {
    ExperimentConfig c = base;
    c.noise.alpha = alpha;
    json row_tuned = json::object();
    if (tune && !reference_alpha) tune_all(env, c, row_tuned);
    const RunResult result = run_online_prediction(env, c);
    append_summary_rows(summary, alpha, result, c.mode);
    json row;
    row["alpha"] = alpha;
    if (tune && !reference_alpha) row["tuned_step_sizes"] = row_tuned;
    json algs = json::array();
    for (const auto& alg : result.algorithms) algs.push_back(algorithm_meta(alg, c.mode, tune));
    row["algorithms"] = algs;
    sweep_meta.push_back(row);
  }

  json meta = base_metadata("table1", base, env, dataset_meta);
  meta.erase("noise");
  meta["sweep_alphas"] = alphas;
  meta["tuning_protocol"] = reference_alpha ? "reference_alpha" : "per_alpha";
  if (reference_alpha) meta["reference_alpha"] = *reference_alpha;
  meta["gamma"] = base.noise.gamma;
  if (tune && reference_alpha) meta["tuned_step_sizes"] = tuned_meta;
  meta["sweep"] = sweep_meta;

  write_outputs(opt.out_dir, {{"summary.csv", summary}, {"metadata.json", meta.dump(2) + "\n"}});
  std::cout << summary;
  return 0;
}

int cmd_gen_data(const Options& opt) {
  const json cfg = load_config(opt.config_path);
  json dj = cfg.value("dataset", json::object());
  SyntheticSpec spec = synthetic_from_json(dj.value("synthetic", json::object()));
  if (opt.nodes) spec.n_nodes = *opt.nodes;
  if (opt.steps) spec.t_steps = *opt.steps;
  if (opt.knn) spec.knn_k = *opt.knn;
  if (opt.gen_band) spec.gen_band_size = *opt.gen_band;
  if (opt.gen_seed) spec.seed = *opt.gen_seed;

  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  write_dataset_csv(bundle, opt.out_file);

  json meta;
  meta["tool"] = "gnsbench";
  meta["version"] = kVersion;
  meta["command"] = "gen-data";
  meta["spec"] = {{"n_nodes", spec.n_nodes},
                  {"t_steps", spec.t_steps},
                  {"knn_k", spec.knn_k},
                  {"gen_band_size", spec.gen_band_size},
                  {"seed", spec.seed},
                  {"lat_min", spec.lat_min},
                  {"lat_max", spec.lat_max},
                  {"lon_min", spec.lon_min},
                  {"lon_max", spec.lon_max},
                  {"base_amplitude", spec.base_amplitude},
                  {"freq_decay", spec.freq_decay},
                  {"walk_step", spec.walk_step}};
  write_file_atomic(opt.out_file + ".meta.json", meta.dump(2) + "\n");

  std::cout << "wrote " << opt.out_file << " (" << spec.n_nodes << " nodes, " << spec.t_steps
            << " steps)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online prediction of time-varying graph signals under "
               "heavy-tailed noise: GNS and baseline adaptive filters"};
  app.require_subcommand(1);

  Options opt;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "JSON config file");
    cmd->add_option("--data", opt.data_path, "dataset CSV (station_id,lat,lon,t0,...)");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--alpha", opt.alpha, "noise characteristic exponent");
    cmd->add_option("--gamma", opt.gamma, "noise dispersion");
    cmd->add_option("--runs", opt.runs, "Monte Carlo runs");
    cmd->add_option("--seed", opt.seed, "base RNG seed");
    cmd->add_option("--band-size", opt.band_size, "bandlimited frequency count");
    cmd->add_option("--observed", opt.observed, "observed node count (random mask)");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_option("--iterations", opt.iterations, "step budget (time-invariant mode)");
    cmd->add_flag("--tune", opt.tune_flag, "grid-tune step sizes first");
    cmd->add_flag("--no-tune", opt.no_tune_flag, "use configured step sizes as-is");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment and write metric CSVs");
  add_common(run_cmd);
  CLI::App* tune_cmd = app.add_subcommand("tune", "grid-search step sizes and write tuning.json");
  add_common(tune_cmd);
  CLI::App* table1_cmd = app.add_subcommand(
      "table1", "sweep alpha and write a per-alpha steady-state summary");
  add_common(table1_cmd);
  CLI::App* conv_cmd = app.add_subcommand(
      "convergence", "time-invariant convergence comparison with steady-state report");
  add_common(conv_cmd);

  CLI::App* gen_cmd = app.add_subcommand("gen-data", "write a synthetic dataset CSV");
  gen_cmd->add_option("--config", opt.config_path, "JSON config file");
  gen_cmd->add_option("--out", opt.out_file, "output CSV path");
  gen_cmd->add_option("--nodes", opt.nodes, "station count");
  gen_cmd->add_option("--steps", opt.steps, "time steps");
  gen_cmd->add_option("--knn", opt.knn, "k-NN neighbors");
  gen_cmd->add_option("--band-size", opt.gen_band, "generator band size");
  gen_cmd->add_option("--seed", opt.gen_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(opt, "run", RunMode::time_varying, false);
    if (tune_cmd->parsed()) return cmd_tune(opt);
    if (table1_cmd->parsed()) return cmd_table1(opt);
    if (conv_cmd->parsed()) return cmd_run(opt, "convergence", RunMode::time_invariant, true);
    if (gen_cmd->parsed()) return cmd_gen_data(opt);
  } catch (const std::exception& e) {
    std::cerr << "gnsbench: error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "gnsbench: no subcommand\n";
  return 1;
}
