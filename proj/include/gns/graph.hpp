#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

// Graph construction, the combinatorial Laplacian, and the graph Fourier
// transform. Graphs here are small (a couple hundred nodes), unweighted and
// undirected; everything is dense.

namespace gns {

// A graph signal is one real value per node; spectral coefficients are the
// same vector expressed in the Laplacian eigenbasis.
using GraphSignal = Eigen::VectorXd;
using SpectralSignal = Eigen::VectorXd;

struct GraphTopology {
  int n_nodes = 0;
  // Unordered pairs stored as (i, j) with i < j, sorted, no duplicates.
  std::vector<std::pair<int, int>> edges;
  // Optional per-node (latitude, longitude) in degrees; empty if absent.
  std::vector<std::array<double, 2>> coords;

  int degree(int node) const;
};

// Eigendecomposition L = U diag(eigenvalues) U^T with eigenvalues ascending
// and U orthonormal. Column signs are normalized so the largest-magnitude
// entry of each eigenvector is positive, which makes spectra reproducible;
// downstream operators are sign-invariant.
struct LaplacianSpectrum {
  Eigen::MatrixXd u;
  Eigen::VectorXd eigenvalues;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

enum class DistanceMetric {
  great_circle,        // haversine central angle on the sphere (default)
  euclidean_degrees,   // plain Euclidean distance on (lat, lon) as numbers
};

// Central angle in radians between two (lat, lon) points given in degrees.
double great_circle_distance(const std::array<double, 2>& a, const std::array<double, 2>& b);

// Connect each node to its k nearest neighbors (ties broken by lower node
// index), then symmetrize: the edge exists if either endpoint selected the
// other. Throws std::invalid_argument if fewer than k+1 nodes or any
// coordinate is non-finite.
GraphTopology build_knn_graph(const std::vector<std::array<double, 2>>& coords, int k,
                              DistanceMetric metric = DistanceMetric::great_circle);

// Combinatorial Laplacian: diagonal holds degrees, off-diagonal (i, j) is -1
// iff the edge exists.
Eigen::MatrixXd laplacian(const GraphTopology& topology);

// Throws std::invalid_argument if l is not symmetric to 1e-10.
LaplacianSpectrum eigendecompose(const Eigen::MatrixXd& l);

// Forward transform U^T x and inverse U s. Throw on dimension mismatch.
SpectralSignal gft(const LaplacianSpectrum& spectrum, const GraphSignal& x);
GraphSignal igft(const LaplacianSpectrum& spectrum, const SpectralSignal& s);

int connected_components(const GraphTopology& topology);

}  // namespace gns
