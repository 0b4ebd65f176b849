#include <doctest.h>

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "gns/bandlimit.hpp"
#include "gns/dataset.hpp"
#include "gns/graph.hpp"

using namespace gns;

namespace {

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.n_nodes = 20;
  spec.t_steps = 12;
  spec.knn_k = 4;
  spec.gen_band_size = 8;
  spec.seed = 123;
  return spec;
}

double max_out_of_band(const DatasetBundle& bundle, const LaplacianSpectrum& spectrum,
                       const std::vector<int>& band) {
  FrequencySet f;
  f.indices = band;
  const BandlimitProjector proj = build_projector(spectrum, f);
  double worst = 0.0;
  for (int t = 0; t < bundle.t_steps(); ++t) {
    const Eigen::VectorXd x = bundle.signal.col(t);
    worst = std::max(worst, (x - proj.matrix * x).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("parsing a two-station file") {
  const std::string csv =
      "station_id,lat,lon,t0,t1\n"
      "KAPX,40.5,-101.25,1.5,2.5\n"
      "KBUF,41,-100,-0.25,3\n";
  const DatasetBundle b = parse_dataset_csv(csv);
  CHECK(b.n_nodes() == 2);
  CHECK(b.t_steps() == 2);
  CHECK(b.labels == std::vector<std::string>{"KAPX", "KBUF"});
  CHECK(b.coords[0] == std::array<double, 2>{40.5, -101.25});
  CHECK(b.coords[1] == std::array<double, 2>{41.0, -100.0});
  CHECK(b.signal(0, 0) == 1.5);
  CHECK(b.signal(0, 1) == 2.5);
  CHECK(b.signal(1, 0) == -0.25);
  CHECK(b.signal(1, 1) == 3.0);

  // Windows line endings parse identically.
  const std::string crlf =
      "station_id,lat,lon,t0,t1\r\nKAPX,40.5,-101.25,1.5,2.5\r\nKBUF,41,-100,-0.25,3\r\n";
  const DatasetBundle b2 = parse_dataset_csv(crlf);
  CHECK((b2.signal - b.signal).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parse errors name the offending cell") {
  auto message_of = [](const std::string& csv) -> std::string {
    try {
      parse_dataset_csv(csv);
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };

  // Missing value in row 2 (first station), column 5 (t1).
  std::string msg = message_of("station_id,lat,lon,t0,t1\nA,40,-100,1.5,\nB,41,-99,2,3\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("column 5") != std::string::npos);

  // Short row: the missing column is named.
  msg = message_of("station_id,lat,lon,t0,t1\nA,40,-100,1.5\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("column 5") != std::string::npos);

  // Non-numeric cell in row 3, column 4.
  msg = message_of("station_id,lat,lon,t0\nA,40,-100,1.5\nB,41,-99,oops\n");
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("column 4") != std::string::npos);

  CHECK_THROWS_AS(parse_dataset_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_dataset_csv("lat,lon,t0\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dataset_csv("station_id,lat,lon,t1\nA,1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dataset_csv("station_id,lat,lon,t0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dataset_csv("station_id,lat,lon,t0\n,40,-100,1\n"),
                  std::invalid_argument);
}

TEST_CASE("CSV round-trip preserves every bit") {
  const DatasetBundle a = generate_synthetic_dataset(small_spec());
  const DatasetBundle b = parse_dataset_csv(dataset_to_csv(a));
  CHECK(b.labels == a.labels);
  REQUIRE(b.n_nodes() == a.n_nodes());
  REQUIRE(b.t_steps() == a.t_steps());
  CHECK((b.signal - a.signal).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < a.n_nodes(); ++i) {
    CHECK(b.coords[i][0] == a.coords[i][0]);
    CHECK(b.coords[i][1] == a.coords[i][1]);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const SyntheticSpec spec = small_spec();
  const DatasetBundle a = generate_synthetic_dataset(spec);
  const DatasetBundle b = generate_synthetic_dataset(spec);
  CHECK((a.signal - b.signal).cwiseAbs().maxCoeff() == 0.0);

  SyntheticSpec other = spec;
  other.seed = 124;
  const DatasetBundle c = generate_synthetic_dataset(other);
  CHECK((a.signal - c.signal).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("snapshots are exactly bandlimited to the generator band") {
  const SyntheticSpec spec = small_spec();
  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  const SyntheticStructure st = synthetic_structure(spec);

  std::vector<int> band(spec.gen_band_size);
  for (int f = 0; f < spec.gen_band_size; ++f) band[f] = f;
  CHECK(max_out_of_band(bundle, st.spectrum, band) < 1e-10);

  // Power genuinely fills the band: projecting onto half of it loses signal.
  std::vector<int> half(band.begin(), band.begin() + 4);
  CHECK(max_out_of_band(bundle, st.spectrum, half) > 1e-3);
}

TEST_CASE("a single-frequency band gives constant snapshots") {
  SyntheticSpec spec = small_spec();
  spec.gen_band_size = 1;
  const SyntheticStructure st = synthetic_structure(spec);
  REQUIRE(connected_components(st.topology) == 1);  // lowest mode is constant

  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  for (int t = 0; t < bundle.t_steps(); ++t) {
    const Eigen::VectorXd x = bundle.signal.col(t);
    CHECK(x.maxCoeff() - x.minCoeff() < 1e-12);
  }
}

TEST_CASE("an explicit band index list overrides the lowest-frequency default") {
  SyntheticSpec spec = small_spec();
  spec.band_indices = {0, 3, 7, 11};
  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  const SyntheticStructure st = synthetic_structure(spec);

  CHECK(max_out_of_band(bundle, st.spectrum, spec.band_indices) < 1e-10);
  // Indices 3, 7, 11 fall outside the lowest-4 band, so that projector loses power.
  CHECK(max_out_of_band(bundle, st.spectrum, {0, 1, 2, 3}) > 1e-3);
}

TEST_CASE("zero walk step freezes the signal in time") {
  SyntheticSpec spec = small_spec();
  spec.walk_step = 0.0;
  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  for (int t = 1; t < bundle.t_steps(); ++t)
    CHECK((bundle.signal.col(t) - bundle.signal.col(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("structure matches the requested patch and sizes") {
  const SyntheticSpec spec = small_spec();
  const SyntheticStructure st = synthetic_structure(spec);
  CHECK(static_cast<int>(st.coords.size()) == spec.n_nodes);
  CHECK(st.topology.n_nodes == spec.n_nodes);
  CHECK(st.spectrum.n() == spec.n_nodes);
  for (const auto& c : st.coords) {
    CHECK(c[0] >= spec.lat_min);
    CHECK(c[0] <= spec.lat_max);
    CHECK(c[1] >= spec.lon_min);
    CHECK(c[1] <= spec.lon_max);
  }

  const DatasetBundle bundle = generate_synthetic_dataset(spec);
  CHECK(bundle.coords == st.coords);
  CHECK(bundle.labels[0] == "0");
  CHECK(bundle.labels[19] == "19");
}

TEST_CASE("spec validation") {
  SyntheticSpec spec = small_spec();
  spec.knn_k = 20;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.t_steps = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.gen_band_size = 21;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.lat_min = 50.0;
  spec.lat_max = 40.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.band_indices = {0, 20};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.band_indices = {0, 19};
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("bundle validation") {
  DatasetBundle b;
  b.signal = Eigen::MatrixXd::Zero(3, 2);
  b.coords = {{40.0, -100.0}, {41.0, -101.0}};  // one row short
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);

  b.coords.push_back({42.0, -102.0});
  CHECK_NOTHROW(b.validate());

  b.signal(1, 1) = std::nan("");
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

}  // TEST_SUITE
