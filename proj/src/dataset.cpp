#include "gns/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "gns/bandlimit.hpp"
#include "gns/graph.hpp"
#include "gns/rng.hpp"
#include "gns/textio.hpp"

namespace gns {

void DatasetBundle::validate() const {
  const int n = n_nodes();
  if (n < 1 || t_steps() < 1)
    throw std::invalid_argument("DatasetBundle: empty signal matrix");
  if (static_cast<int>(coords.size()) != n)
    throw std::invalid_argument("DatasetBundle: " + std::to_string(coords.size()) +
                                " coordinate rows for " + std::to_string(n) + " signal rows");
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("DatasetBundle: label count != node count");
  for (const auto& c : coords)
    if (!std::isfinite(c[0]) || !std::isfinite(c[1]))
      throw std::invalid_argument("DatasetBundle: non-finite coordinate");
  if (!signal.allFinite())
    throw std::invalid_argument("DatasetBundle: non-finite signal value");
}

void SyntheticSpec::validate() const {
  if (n_nodes < 2) throw std::invalid_argument("SyntheticSpec: need at least 2 nodes");
  if (t_steps < 1) throw std::invalid_argument("SyntheticSpec: t_steps must be positive");
  if (knn_k < 1 || knn_k >= n_nodes)
    throw std::invalid_argument("SyntheticSpec: knn_k must lie in [1, n_nodes)");
  if (gen_band_size < 1 || gen_band_size > n_nodes)
    throw std::invalid_argument("SyntheticSpec: gen_band_size must lie in [1, n_nodes]");
  if (!(lat_max > lat_min) || !(lon_max > lon_min))
    throw std::invalid_argument("SyntheticSpec: empty coordinate patch");
  if (!(base_amplitude > 0.0) || !(freq_decay >= 0.0) || !(walk_step >= 0.0))
    throw std::invalid_argument("SyntheticSpec: invalid amplitude parameters");
  for (const int f : band_indices)
    if (f < 0 || f >= n_nodes)
      throw std::invalid_argument("SyntheticSpec: band index " + std::to_string(f) +
                                  " outside [0, " + std::to_string(n_nodes) + ")");
}

SyntheticStructure synthetic_structure(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  SyntheticStructure s;
  s.coords.resize(spec.n_nodes);
  for (auto& c : s.coords) {
    c[0] = spec.lat_min + (spec.lat_max - spec.lat_min) * rng.uniform();
    c[1] = spec.lon_min + (spec.lon_max - spec.lon_min) * rng.uniform();
  }
  s.topology = build_knn_graph(s.coords, spec.knn_k);
  s.spectrum = eigendecompose(laplacian(s.topology));
  return s;
}

DatasetBundle generate_synthetic_dataset(const SyntheticSpec& spec) {
  SyntheticStructure s = synthetic_structure(spec);

  std::vector<int> band = spec.band_indices;
  if (band.empty()) {
    band.resize(spec.gen_band_size);
    for (int f = 0; f < spec.gen_band_size; ++f) band[f] = f;
  }
  const int f_count = static_cast<int>(band.size());
  Eigen::MatrixXd u_f(spec.n_nodes, f_count);
  for (int j = 0; j < f_count; ++j) u_f.col(j) = s.spectrum.u.col(band[j]);

  // The coordinate stream lives inside synthetic_structure; coefficients use
  // a derived stream so both halves stay deterministic on their own.
  Rng rng(splitmix64(spec.seed ^ 0xD1B54A32D192ED03ULL));
  Eigen::VectorXd c(f_count);
  for (int j = 0; j < f_count; ++j) {
    const double amplitude =
        spec.base_amplitude * std::exp(-spec.freq_decay * band[j] / spec.n_nodes);
    c[j] = amplitude * rng.normal();
  }

  DatasetBundle bundle;
  bundle.coords = std::move(s.coords);
  bundle.signal.resize(spec.n_nodes, spec.t_steps);
  for (int t = 0; t < spec.t_steps; ++t) {
    if (t > 0)
      for (int j = 0; j < f_count; ++j) c[j] += spec.walk_step * rng.normal();
    bundle.signal.col(t) = u_f * c;
  }

  bundle.labels.resize(spec.n_nodes);
  for (int i = 0; i < spec.n_nodes; ++i) bundle.labels[i] = std::to_string(i);
  return bundle;
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(int row, int column, const std::string& what) {
  throw std::invalid_argument("dataset CSV: row " + std::to_string(row) + ", column " +
                              std::to_string(column) + ": " + what);
}

double parse_cell(std::string_view token, int row, int column) {
  if (token.empty()) parse_fail(row, column, "missing cell");
  try {
    return parse_double_strict(token);
  } catch (const std::invalid_argument& e) {
    parse_fail(row, column, e.what());
  }
}

}  // namespace

DatasetBundle parse_dataset_csv(const std::string& content) {
  std::vector<std::string_view> lines;
  {
    std::string_view rest(content);
    while (!rest.empty()) {
      std::size_t eol = rest.find('\n');
      std::string_view line = (eol == std::string_view::npos) ? rest : rest.substr(0, eol);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (eol == std::string_view::npos) break;
      rest.remove_prefix(eol + 1);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw std::invalid_argument("dataset CSV: empty file");

  const auto header = split_line(lines[0]);
  if (header.size() < 4 || header[0] != "station_id" || header[1] != "lat" || header[2] != "lon")
    throw std::invalid_argument(
        "dataset CSV: row 1: header must start with station_id,lat,lon,t0");
  const int t_steps = static_cast<int>(header.size()) - 3;
  for (int t = 0; t < t_steps; ++t)
    if (header[3 + t] != "t" + std::to_string(t))
      parse_fail(1, 4 + t, "expected header 't" + std::to_string(t) + "'");

  const int n = static_cast<int>(lines.size()) - 1;
  if (n < 1) throw std::invalid_argument("dataset CSV: no station rows");

  DatasetBundle bundle;
  bundle.coords.resize(n);
  bundle.signal.resize(n, t_steps);
  bundle.labels.resize(n);
  const std::size_t expected = header.size();
  for (int i = 0; i < n; ++i) {
    const int row = i + 2;
    const auto fields = split_line(lines[i + 1]);
    if (fields.size() != expected) {
      // Point at the first missing or first extra column.
      const int column = static_cast<int>(std::min(fields.size(), expected)) + 1;
      parse_fail(row, column,
                 "expected " + std::to_string(expected) + " columns, got " +
                     std::to_string(fields.size()));
    }
    if (fields[0].empty()) parse_fail(row, 1, "missing station_id");
    bundle.labels[i] = std::string(fields[0]);
    bundle.coords[i][0] = parse_cell(fields[1], row, 2);
    bundle.coords[i][1] = parse_cell(fields[2], row, 3);
    for (int t = 0; t < t_steps; ++t)
      bundle.signal(i, t) = parse_cell(fields[3 + t], row, 4 + t);
  }
  bundle.validate();
  return bundle;
}

DatasetBundle load_dataset_csv(const std::string& path) {
  return parse_dataset_csv(read_file(path));
}

std::string dataset_to_csv(const DatasetBundle& bundle) {
  bundle.validate();
  std::string out = "station_id,lat,lon";
  for (int t = 0; t < bundle.t_steps(); ++t) out += ",t" + std::to_string(t);
  out += '\n';
  for (int i = 0; i < bundle.n_nodes(); ++i) {
    out += bundle.labels.empty() ? std::to_string(i) : bundle.labels[i];
    out += ',';
    out += format_double(bundle.coords[i][0]);
    out += ',';
    out += format_double(bundle.coords[i][1]);
    for (int t = 0; t < bundle.t_steps(); ++t) {
      out += ',';
      out += format_double(bundle.signal(i, t));
    }
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const DatasetBundle& bundle, const std::string& path) {
  write_file_atomic(path, dataset_to_csv(bundle));
}

}  // namespace gns
