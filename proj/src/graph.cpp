#include "gns/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "gns/kernels.hpp"

namespace gns {

int GraphTopology::degree(int node) const {
  int d = 0;
  for (const auto& [i, j] : edges)
    if (i == node || j == node) ++d;
  return d;
}

double great_circle_distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  constexpr double deg = 0.017453292519943295;  // pi / 180
  const double lat1 = a[0] * deg, lat2 = b[0] * deg;
  const double dlat = (b[0] - a[0]) * deg;
  const double dlon = (b[1] - a[1]) * deg;
  const double s1 = std::sin(0.5 * dlat);
  const double s2 = std::sin(0.5 * dlon);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
}

GraphTopology build_knn_graph(const std::vector<std::array<double, 2>>& coords, int k,
                              DistanceMetric metric) {
  const int n = static_cast<int>(coords.size());
  if (k < 1) throw std::invalid_argument("build_knn_graph: k must be positive");
  if (n < k + 1)
    throw std::invalid_argument("build_knn_graph: need at least k+1 = " + std::to_string(k + 1) +
                                " nodes, got " + std::to_string(n));
  for (const auto& c : coords)
    if (!std::isfinite(c[0]) || !std::isfinite(c[1]))
      throw std::invalid_argument("build_knn_graph: non-finite coordinate");

  auto dist = [&](int i, int j) {
    if (metric == DistanceMetric::great_circle) return great_circle_distance(coords[i], coords[j]);
    const double dx = coords[i][0] - coords[j][0];
    const double dy = coords[i][1] - coords[j][1];
    return std::sqrt(dx * dx + dy * dy);
  };

  std::set<std::pair<int, int>> edge_set;
  std::vector<std::pair<double, int>> order(n - 1);
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.emplace_back(dist(i, j), j);
    // (distance, index) ordering breaks distance ties by lower node index.
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    for (int m = 0; m < k; ++m) {
      const int j = order[m].second;
      edge_set.emplace(std::min(i, j), std::max(i, j));
    }
  }

  GraphTopology topo;
  topo.n_nodes = n;
  topo.edges.assign(edge_set.begin(), edge_set.end());
  topo.coords = coords;
  return topo;
}

Eigen::MatrixXd laplacian(const GraphTopology& topology) {
  const int n = topology.n_nodes;
  if (n <= 0) throw std::invalid_argument("laplacian: empty topology");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : topology.edges) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("laplacian: invalid edge");
    l(i, j) -= 1.0;
    l(j, i) -= 1.0;
    l(i, i) += 1.0;
    l(j, j) += 1.0;
  }
  return l;
}

LaplacianSpectrum eigendecompose(const Eigen::MatrixXd& l) {
  if (l.rows() != l.cols()) throw std::invalid_argument("eigendecompose: matrix not square");
  const double asym = (l - l.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw std::invalid_argument("eigendecompose: matrix not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: eigensolver failed to converge");

  LaplacianSpectrum spectrum;
  spectrum.eigenvalues = solver.eigenvalues();  // ascending
  spectrum.u = solver.eigenvectors();

  // Fix each column's sign by its largest-magnitude entry (first one wins on
  // exact ties).
  const int n = spectrum.n();
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    double best = std::abs(spectrum.u(0, j));
    for (int i = 1; i < n; ++i) {
      const double a = std::abs(spectrum.u(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (spectrum.u(arg, j) < 0.0) spectrum.u.col(j) = -spectrum.u.col(j);
  }
  return spectrum;
}

SpectralSignal gft(const LaplacianSpectrum& spectrum, const GraphSignal& x) {
  const int n = spectrum.n();
  if (x.size() != n)
    throw std::invalid_argument("gft: signal length " + std::to_string(x.size()) +
                                " != graph size " + std::to_string(n));
  SpectralSignal s(n);
  kernels::matvec_t(spectrum.u.data(), n, n, x.data(), s.data());
  return s;
}

GraphSignal igft(const LaplacianSpectrum& spectrum, const SpectralSignal& s) {
  const int n = spectrum.n();
  if (s.size() != n)
    throw std::invalid_argument("igft: coefficient length " + std::to_string(s.size()) +
                                " != graph size " + std::to_string(n));
  GraphSignal x(n);
  kernels::matvec(spectrum.u.data(), n, n, s.data(), x.data());
  return x;
}

int connected_components(const GraphTopology& topology) {
  std::vector<int> parent(topology.n_nodes);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  int components = topology.n_nodes;
  for (const auto& [i, j] : topology.edges) {
    const int ri = find(i), rj = find(j);
    if (ri != rj) {
      parent[ri] = rj;
      --components;
    }
  }
  return components;
}

}  // namespace gns
