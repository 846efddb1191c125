// net.hpp — static networks and consensus weight matrices
//
// A network is an undirected, unweighted graph on nodes {0, ..., n-1}
// together with a symmetric doubly stochastic weight matrix W whose
// off-diagonal support is contained in the edge set.  Everything downstream
// consumes W through this module:
//
//   - metropolis_weights   w_ij = 1 / (1 + max(deg_i, deg_j)) on edges,
//                          w_ii = 1 - sum_{j != i} w_ij
//   - safeguard_weights    W' = ((1+eta)/2) I + ((1-eta)/2) W, which maps
//                          every eigenvalue lambda to
//                          (1+eta)/2 + ((1-eta)/2) lambda >= eta
//   - spectral             eigenvalues of W, the second-largest modulus
//                          mu(W), the spectral gap 1 - mu, and lambda_min
//
// Random geometric graphs place n points uniformly in the unit square and
// connect pairs closer than a radius; the radius is bisected until the edge
// density matches a target within +-0.01, resampling points (with a derived
// seed) when the draw is disconnected or the target is missed.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace dgm {

// Undirected simple graph; edges are normalized to i < j and sorted.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

// Validates node count and edges (in-range, no self loops, no duplicates)
// and returns the normalized graph.  Throws std::invalid_argument naming
// the failed check.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

// True when every node is reachable from node 0 (vacuously true for n = 1).
bool is_connected(const Graph& g);

// Fraction of the n(n-1)/2 possible edges that are present.
double graph_density(const Graph& g);

// Random geometric graph: n points uniform in [0,1]^2, an edge when the
// Euclidean distance is below a radius chosen by 40 bisection steps so the
// density lands within +-0.01 of target_density.  Draws that miss the
// density window or come out disconnected are resampled with a derived
// seed, up to 100 attempts.  Deterministic for a fixed (n, density, seed).
// Throws std::invalid_argument on an invalid target and std::runtime_error
// when no attempt produces a connected graph in the density window.
Graph generate_geometric(int n, double target_density, std::uint64_t seed);

// Symmetric doubly stochastic weight matrix with nonnegative entries.
// Instances are validated on construction; the invariant tolerance is
// 1e-12 on symmetry, row sums, and entry sign.
class WeightMatrix {
  public:
    // Empty placeholder (size 0) so configs can default-construct; every
    // consumer validates the size against its node count.
    WeightMatrix() = default;

    int size() const { return static_cast<int>(w_.rows()); }
    const Eigen::MatrixXd& matrix() const { return w_; }
    double operator()(int i, int j) const { return w_(i, j); }

    // Graph induced by the strictly positive off-diagonal entries.
    Graph induced_graph() const;

  private:
    explicit WeightMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {}
    Eigen::MatrixXd w_;

    friend WeightMatrix metropolis_weights(const Graph& g);
    friend WeightMatrix custom_weights(int n, const Eigen::MatrixXd& entries);
    friend WeightMatrix safeguard_weights(const WeightMatrix& w, double eta);
};

// Metropolis weights for a graph: w_ij = 1/(1 + max(deg_i, deg_j)) on
// edges, zero off the edge set, and diagonal entries that complete each
// row to 1.  Accepts disconnected graphs (the result then has mu = 1).
WeightMatrix metropolis_weights(const Graph& g);

// Wraps an explicit matrix after checking symmetry, row sums, and entry
// signs; throws std::invalid_argument naming the first failed check.
WeightMatrix custom_weights(int n, const Eigen::MatrixXd& entries);

// Safeguarded matrix W' = ((1+eta)/2) I + ((1-eta)/2) W for eta in (0, 1);
// every eigenvalue of W' is at least eta.
WeightMatrix safeguard_weights(const WeightMatrix& w, double eta);

// Eigenvalue summary of a weight matrix.  Eigenvalues are sorted by
// increasing modulus; mu is the modulus of the second-largest-in-modulus
// eigenvalue (0 when n = 1), gap = 1 - mu, and lambda_min is the smallest
// eigenvalue.
struct SpectralInfo {
    Eigen::VectorXd eigenvalues;
    double mu = 0.0;
    double lambda_min = 0.0;
    double gap = 1.0;

    // mu < 1: repeated averaging contracts disagreement.
    bool mixing() const { return mu < 1.0; }
    // All eigenvalues at least eta (the floor the safeguard map enforces).
    bool spectrum_at_least(double eta) const {
        return eigenvalues.size() == 0 || eigenvalues.minCoeff() >= eta;
    }
};

SpectralInfo spectral(const WeightMatrix& w);

// Plain-text serialization: node and edge counts, the edge list, then the
// dense weight matrix row by row at 17 significant digits (values
// round-trip exactly).  read_network re-validates everything it parses.
void write_network(std::ostream& out, const Graph& g, const WeightMatrix& w);
std::pair<Graph, WeightMatrix> read_network(std::istream& in);

}  // namespace dgm
