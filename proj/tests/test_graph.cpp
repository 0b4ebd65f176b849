#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "gns/graph.hpp"
#include "gns/rng.hpp"

using namespace gns;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Central angle through 3D unit vectors; independent of the haversine form
// used by the library.
double angle_oracle(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  auto unit = [](const std::array<double, 2>& p) {
    const double lat = p[0] * kPi / 180.0, lon = p[1] * kPi / 180.0;
    return std::array<double, 3>{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon),
                                 std::sin(lat)};
  };
  const auto u = unit(a), v = unit(b);
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  const std::array<double, 3> c = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                   u[0] * v[1] - u[1] * v[0]};
  const double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  return std::atan2(cross, dot);
}

std::vector<std::array<double, 2>> random_coords(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::array<double, 2>> coords(n);
  for (auto& c : coords) {
    c[0] = 35.0 + 10.0 * rng.uniform();
    c[1] = -110.0 + 20.0 * rng.uniform();
  }
  return coords;
}

// All-pairs brute force: each node keeps its k closest (ties to the lower
// index), then the union symmetrizes.
std::set<std::pair<int, int>> knn_oracle(const std::vector<std::array<double, 2>>& coords,
                                         int k) {
  const int n = static_cast<int>(coords.size());
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    std::sort(others.begin(), others.end(), [&](int a, int b) {
      const double da = angle_oracle(coords[i], coords[a]);
      const double db = angle_oracle(coords[i], coords[b]);
      return da < db || (da == db && a < b);
    });
    for (int m = 0; m < k; ++m) {
      const int j = others[m];
      edges.insert({std::min(i, j), std::max(i, j)});
    }
  }
  return edges;
}

int components_oracle(const GraphTopology& g) {
  std::vector<std::vector<int>> adj(g.n_nodes);
  for (const auto& [i, j] : g.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(g.n_nodes, false);
  int count = 0;
  for (int s = 0; s < g.n_nodes; ++s) {
    if (seen[s]) continue;
    ++count;
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const int v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
    }
  }
  return count;
}

GraphTopology path3() {
  GraphTopology g;
  g.n_nodes = 3;
  g.edges = {{0, 1}, {1, 2}};
  return g;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("great-circle distance against the vector oracle") {
  CHECK(great_circle_distance({40.0, -100.0}, {40.0, -100.0}) == doctest::Approx(0.0));
  CHECK(great_circle_distance({0.0, 0.0}, {0.0, 90.0}) == doctest::Approx(kPi / 2));
  CHECK(great_circle_distance({90.0, 0.0}, {-90.0, 0.0}) == doctest::Approx(kPi));

  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::array<double, 2> a = {180.0 * rng.uniform() - 90.0, 360.0 * rng.uniform() - 180.0};
    const std::array<double, 2> b = {180.0 * rng.uniform() - 90.0, 360.0 * rng.uniform() - 180.0};
    CHECK(great_circle_distance(a, b) == doctest::Approx(angle_oracle(a, b)).epsilon(1e-9));
    CHECK(great_circle_distance(a, b) == doctest::Approx(great_circle_distance(b, a)));
  }
}

TEST_CASE("three collinear stations, k = 1") {
  const std::vector<std::array<double, 2>> coords = {{40.0, -100.0}, {40.0, -99.0}, {40.0, -97.9}};
  const GraphTopology g = build_knn_graph(coords, 1);
  CHECK(g.n_nodes == 3);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(g.coords == coords);
}

TEST_CASE("kNN matches the all-pairs oracle") {
  for (const std::uint64_t seed : {101u, 102u, 103u}) {
    for (const int k : {1, 3, 5}) {
      const auto coords = random_coords(25, seed);
      const GraphTopology g = build_knn_graph(coords, k);
      const auto want = knn_oracle(coords, k);
      const std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
      CHECK(got == want);
      CHECK(g.edges.size() == got.size());  // no duplicates
      CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
      for (int i = 0; i < g.n_nodes; ++i) CHECK(g.degree(i) >= k);
    }
  }
}

TEST_CASE("kNN is invariant under node relabeling") {
  const auto coords = random_coords(20, 104);
  const int k = 3;
  const GraphTopology base = build_knn_graph(coords, k);

  std::vector<int> perm(coords.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(105);
  for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.bounded(i + 1)]);

  std::vector<std::array<double, 2>> shuffled(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) shuffled[perm[i]] = coords[i];
  const GraphTopology relabeled = build_knn_graph(shuffled, k);

  std::set<std::pair<int, int>> mapped;
  for (const auto& [i, j] : base.edges)
    mapped.insert({std::min(perm[i], perm[j]), std::max(perm[i], perm[j])});
  const std::set<std::pair<int, int>> got(relabeled.edges.begin(), relabeled.edges.end());
  CHECK(got == mapped);
}

TEST_CASE("kNN rejects bad input") {
  CHECK_THROWS_AS(build_knn_graph({{0.0, 0.0}, {1.0, 1.0}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_knn_graph({{0.0, 0.0}, {1.0, std::nan("")}, {2.0, 2.0}}, 1),
                  std::invalid_argument);
}

TEST_CASE("Laplacian of small graphs by hand") {
  const Eigen::MatrixXd l3 = laplacian(path3());
  Eigen::MatrixXd want(3, 3);
  want << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((l3 - want).cwiseAbs().maxCoeff() == 0.0);

  GraphTopology tri;
  tri.n_nodes = 3;
  tri.edges = {{0, 1}, {0, 2}, {1, 2}};
  const Eigen::MatrixXd lt = laplacian(tri);
  CHECK((lt.diagonal() - Eigen::Vector3d(2, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(lt.sum() == 0.0);
  CHECK(lt(0, 1) == -1.0);
}

TEST_CASE("row sums vanish and the quadratic form counts edge differences") {
  const auto coords = random_coords(30, 106);
  const GraphTopology g = build_knn_graph(coords, 4);
  const Eigen::MatrixXd l = laplacian(g);
  CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);

  Rng rng(107);
  Eigen::VectorXd x(g.n_nodes);
  for (int i = 0; i < g.n_nodes; ++i) x[i] = 2.0 * rng.uniform() - 1.0;
  double edge_sum = 0.0;
  for (const auto& [i, j] : g.edges) edge_sum += (x[i] - x[j]) * (x[i] - x[j]);
  CHECK(x.dot(l * x) == doctest::Approx(edge_sum).epsilon(1e-12));
  CHECK(x.dot(l * x) >= -1e-12);
}

TEST_CASE("spectra of a single edge and a triangle") {
  GraphTopology p2;
  p2.n_nodes = 2;
  p2.edges = {{0, 1}};
  const LaplacianSpectrum s2 = eigendecompose(laplacian(p2));
  CHECK(s2.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s2.eigenvalues[1] == doctest::Approx(2.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s2.u(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(s2.u(0, 0) == doctest::Approx(s2.u(1, 0)));  // constant mode

  GraphTopology tri;
  tri.n_nodes = 3;
  tri.edges = {{0, 1}, {0, 2}, {1, 2}};
  const LaplacianSpectrum s3 = eigendecompose(laplacian(tri));
  CHECK(s3.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s3.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(s3.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("path-3 spectrum: 0, 1, 3") {
  const LaplacianSpectrum s = eigendecompose(laplacian(path3()));
  CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("eigendecomposition reconstructs and is orthonormal") {
  const auto coords = random_coords(40, 108);
  const GraphTopology g = build_knn_graph(coords, 5);
  const Eigen::MatrixXd l = laplacian(g);
  const LaplacianSpectrum s = eigendecompose(l);

  CHECK(std::is_sorted(s.eigenvalues.data(), s.eigenvalues.data() + s.n()));
  CHECK(s.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
  const Eigen::MatrixXd recon = s.u * s.eigenvalues.asDiagonal() * s.u.transpose();
  CHECK((recon - l).cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::MatrixXd gram = s.u.transpose() * s.u;
  CHECK((gram - Eigen::MatrixXd::Identity(s.n(), s.n())).cwiseAbs().maxCoeff() < 1e-10);

  // Sign normalization pins each column, so repeat runs agree exactly.
  const LaplacianSpectrum again = eigendecompose(l);
  CHECK((s.u - again.u).cwiseAbs().maxCoeff() == 0.0);
  for (int j = 0; j < s.n(); ++j) {
    int arg = 0;
    s.u.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(s.u(arg, j) > 0.0);
  }
}

TEST_CASE("constant eigenvector for a connected graph") {
  const auto coords = random_coords(30, 109);
  const GraphTopology g = build_knn_graph(coords, 4);
  REQUIRE(connected_components(g) == 1);
  const LaplacianSpectrum s = eigendecompose(laplacian(g));
  const double c = 1.0 / std::sqrt(static_cast<double>(g.n_nodes));
  for (int i = 0; i < g.n_nodes; ++i) CHECK(s.u(i, 0) == doctest::Approx(c).epsilon(1e-8));
}

TEST_CASE("eigendecompose rejects asymmetry") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(eigendecompose(m), std::invalid_argument);
}

TEST_CASE("GFT round-trips and preserves energy") {
  const auto coords = random_coords(35, 110);
  const GraphTopology g = build_knn_graph(coords, 4);
  const LaplacianSpectrum s = eigendecompose(laplacian(g));
  Rng rng(111);
  GraphSignal x(g.n_nodes);
  for (int i = 0; i < g.n_nodes; ++i) x[i] = 3.0 * (2.0 * rng.uniform() - 1.0);

  const SpectralSignal coef = gft(s, x);
  const GraphSignal back = igft(s, coef);
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(coef.norm() == doctest::Approx(x.norm()).epsilon(1e-12));

  CHECK_THROWS_AS(gft(s, GraphSignal::Zero(g.n_nodes + 1)), std::invalid_argument);
  CHECK_THROWS_AS(igft(s, SpectralSignal::Zero(g.n_nodes - 1)), std::invalid_argument);
}

TEST_CASE("connected components against BFS") {
  GraphTopology g;
  g.n_nodes = 4;
  g.edges = {{0, 1}, {2, 3}};
  CHECK(connected_components(g) == 2);
  g.edges = {};
  CHECK(connected_components(g) == 4);
  CHECK(connected_components(path3()) == 1);

  for (const std::uint64_t seed : {112u, 113u}) {
    const auto coords = random_coords(30, seed);
    const GraphTopology knn = build_knn_graph(coords, 2);
    CHECK(connected_components(knn) == components_oracle(knn));
  }
}

}  // TEST_SUITE
