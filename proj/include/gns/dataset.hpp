#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gns/graph.hpp"

namespace gns {

// Ground-truth signal source: one (lat, lon) point and one length-T signal
// row per station. Row order defines node indices.
struct DatasetBundle {
  std::vector<std::array<double, 2>> coords;
  Eigen::MatrixXd signal;  // n_nodes x t_steps
  std::vector<std::string> labels;

  int n_nodes() const { return static_cast<int>(signal.rows()); }
  int t_steps() const { return static_cast<int>(signal.cols()); }

  // Throws std::invalid_argument on inconsistent sizes or non-finite values.
  void validate() const;
};

// Synthetic dataset: random stations on a coordinate patch, ground truth
// x_g[t] = U_F c[t] built from gen_band_size frequencies of the stations'
// k-NN graph, with c[t] a Gaussian random walk. Snapshots are exactly
// bandlimited by construction.
struct SyntheticSpec {
  int n_nodes = 197;
  int t_steps = 95;
  int knn_k = 8;
  int gen_band_size = 120;
  std::uint64_t seed = 7;
  double lat_min = 35.0;
  double lat_max = 45.0;
  double lon_min = -110.0;
  double lon_max = -90.0;
  // c[0]_f = base_amplitude * exp(-freq_decay * f / n) * N(0,1), keyed by the
  // actual frequency index f: lower frequencies carry most of the energy,
  // like a smooth physical field.
  double base_amplitude = 6.0;
  double freq_decay = 1.0;
  // Per-step per-coefficient random-walk increment sigma. Sized so tracking
  // the walk, not noise chatter, sets the steady-state error of a tuned
  // filter; the tracking floor is the same for every noise setting.
  double walk_step = 0.1;
  // Frequencies to generate on; empty means the lowest gen_band_size. A
  // benchmark that reconstructs on a selected band passes that band here so
  // the signal is recoverable from it.
  std::vector<int> band_indices;

  void validate() const;
};

DatasetBundle generate_synthetic_dataset(const SyntheticSpec& spec);

// Stations and graph spectrum for a SyntheticSpec, before any signal is
// generated. Deterministic given the fields; generate_synthetic_dataset
// reproduces the same coords internally.
struct SyntheticStructure {
  std::vector<std::array<double, 2>> coords;
  GraphTopology topology;
  LaplacianSpectrum spectrum;
};

SyntheticStructure synthetic_structure(const SyntheticSpec& spec);

// Header `station_id,lat,lon,t0,...`; one row per station. Parse errors name
// the 1-based row and column.
DatasetBundle load_dataset_csv(const std::string& path);
DatasetBundle parse_dataset_csv(const std::string& content);

std::string dataset_to_csv(const DatasetBundle& bundle);
void write_dataset_csv(const DatasetBundle& bundle, const std::string& path);

}  // namespace gns
