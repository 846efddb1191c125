// net.cpp — graphs, weight matrices, spectral summaries, serialization.

#include <dgm/net.hpp>
#include <dgm/rng.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dgm {

namespace {

// Tolerance for the weight-matrix invariants (symmetry, row sums, signs).
constexpr double kWeightTol = 1e-12;

std::string pair_str(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw std::invalid_argument("make_graph: node count must be positive");
    for (auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("make_graph: edge " + pair_str(i, j) +
                                        " out of range for " + std::to_string(n) + " nodes");
        if (i == j)
            throw std::invalid_argument("make_graph: self loop at node " + std::to_string(i));
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("make_graph: duplicate edge");
    return Graph{n, std::move(edges)};
}

bool is_connected(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (auto [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<char> seen(g.n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                frontier.push(u);
            }
    }
    return reached == g.n;
}

double graph_density(const Graph& g) {
    if (g.n < 2) return 0.0;
    return static_cast<double>(g.edges.size()) / (g.n * (g.n - 1) / 2.0);
}

Graph generate_geometric(int n, double target_density, std::uint64_t seed) {
    if (n < 2)
        throw std::invalid_argument("generate_geometric: need at least 2 nodes");
    if (!(target_density > 0.0) || target_density > 1.0)
        throw std::invalid_argument(
            "generate_geometric: target density must lie in (0, 1]");

    const double pairs = n * (n - 1) / 2.0;
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        std::vector<double> px(n), py(n);
        for (int i = 0; i < n; ++i) {
            px[i] = rng.uniform();
            py[i] = rng.uniform();
        }
        // Squared pairwise distances; an edge is dist < radius.
        std::vector<double> d2(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double dx = px[i] - px[j], dy = py[i] - py[j];
                d2[static_cast<std::size_t>(i) * n + j] = dx * dx + dy * dy;
            }
        auto count_at = [&](double r) {
            double r2 = r * r;
            int count = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (d2[static_cast<std::size_t>(i) * n + j] < r2) ++count;
            return count;
        };

        // Density is nondecreasing in the radius for fixed points: bisect.
        double lo = 0.0, hi = std::sqrt(2.0);
        for (int step = 0; step < 40; ++step) {
            double mid = 0.5 * (lo + hi);
            if (count_at(mid) / pairs < target_density)
                lo = mid;
            else
                hi = mid;
        }

        // hi is the tightest radius reaching the target from above, lo from
        // below; take the first candidate inside the window that is connected
        // (the denser one first, since it is likelier to be connected).
        for (double r : {hi, lo}) {
            std::vector<std::pair<int, int>> edges;
            double r2 = r * r;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (d2[static_cast<std::size_t>(i) * n + j] < r2) edges.emplace_back(i, j);
            Graph g = make_graph(n, std::move(edges));
            if (std::abs(graph_density(g) - target_density) <= 0.01 && is_connected(g))
                return g;
        }
    }
    std::ostringstream msg;
    msg << "generate_geometric: no connected graph within 0.01 of density "
        << target_density << " on " << n << " nodes after 100 attempts";
    throw std::runtime_error(msg.str());
}

Graph WeightMatrix::induced_graph() const {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j)
            if (w_(i, j) > 0.0) edges.emplace_back(i, j);
    return Graph{size(), std::move(edges)};
}

WeightMatrix metropolis_weights(const Graph& g) {
    std::vector<int> deg(g.n, 0);
    for (auto [i, j] : g.edges) {
        ++deg[i];
        ++deg[j];
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [i, j] : g.edges) {
        double wij = 1.0 / (1.0 + std::max(deg[i], deg[j]));
        w(i, j) = wij;
        w(j, i) = wij;
    }
    for (int i = 0; i < g.n; ++i) w(i, i) = 1.0 - w.row(i).sum();
    return WeightMatrix(std::move(w));
}

WeightMatrix custom_weights(int n, const Eigen::MatrixXd& entries) {
    if (n < 1) throw std::invalid_argument("custom_weights: node count must be positive");
    if (entries.rows() != n || entries.cols() != n)
        throw std::invalid_argument("custom_weights: matrix shape does not match node count");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(entries(i, j) - entries(j, i)) > kWeightTol) {
                std::ostringstream msg;
                msg << "custom_weights: matrix is not symmetric at " << pair_str(i, j)
                    << ": " << entries(i, j) << " vs " << entries(j, i);
                throw std::invalid_argument(msg.str());
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (entries(i, j) < -kWeightTol) {
                std::ostringstream msg;
                msg << "custom_weights: negative entry " << entries(i, j) << " at "
                    << pair_str(i, j);
                throw std::invalid_argument(msg.str());
            }
    for (int i = 0; i < n; ++i) {
        double rs = entries.row(i).sum();
        if (std::abs(rs - 1.0) > kWeightTol) {
            std::ostringstream msg;
            msg << "custom_weights: row " << i << " sums to " << rs
                << " (doubly stochastic violated)";
            throw std::invalid_argument(msg.str());
        }
    }
    return WeightMatrix(entries);
}

WeightMatrix safeguard_weights(const WeightMatrix& w, double eta) {
    if (!(eta > 0.0) || eta >= 1.0)
        throw std::invalid_argument("safeguard_weights: eta must lie in (0, 1)");
    const int n = w.size();
    Eigen::MatrixXd m = ((1.0 + eta) / 2.0) * Eigen::MatrixXd::Identity(n, n) +
                        ((1.0 - eta) / 2.0) * w.matrix();
    return WeightMatrix(std::move(m));
}

SpectralInfo spectral(const WeightMatrix& w) {
    // The wrapped matrix is symmetric within tolerance; symmetrize exactly so
    // the self-adjoint solver sees what it expects.
    Eigen::MatrixXd sym = 0.5 * (w.matrix() + w.matrix().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral: eigenvalue decomposition failed");

    SpectralInfo si;
    si.lambda_min = es.eigenvalues()(0);
    si.eigenvalues = es.eigenvalues();
    std::sort(si.eigenvalues.data(), si.eigenvalues.data() + si.eigenvalues.size(),
              [](double a, double b) {
                  return std::abs(a) < std::abs(b) ||
                         (std::abs(a) == std::abs(b) && a < b);
              });
    const int n = si.eigenvalues.size();
    // mu is the modulus of the runner-up eigenvalue; a single node has no
    // runner-up and gets mu = 0.  Snap eigensolver roundoff to the exact
    // endpoints so "mu < 1" and "mu == 0" tests are reliable.
    si.mu = n >= 2 ? std::min(std::abs(si.eigenvalues(n - 2)), 1.0) : 0.0;
    if (si.mu > 1.0 - 1e-12) si.mu = 1.0;
    if (si.mu < 1e-12) si.mu = 0.0;
    si.gap = 1.0 - si.mu;
    return si;
}

void write_network(std::ostream& out, const Graph& g, const WeightMatrix& w) {
    if (w.size() != g.n)
        throw std::invalid_argument("write_network: weight matrix size does not match graph");
    out << "dgm-network 1\n";
    out << "nodes " << g.n << "\n";
    out << "edges " << g.edges.size() << "\n";
    for (auto [i, j] : g.edges) out << i << " " << j << "\n";
    out << "weights\n";
    out << std::setprecision(17);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) out << (j ? " " : "") << w(i, j);
        out << "\n";
    }
}

std::pair<Graph, WeightMatrix> read_network(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "dgm-network" || version != 1)
        throw std::invalid_argument("read_network: missing 'dgm-network 1' header");
    std::string key;
    int n = 0;
    std::size_t m = 0;
    if (!(in >> key >> n) || key != "nodes")
        throw std::invalid_argument("read_network: expected 'nodes <count>'");
    if (!(in >> key >> m) || key != "edges")
        throw std::invalid_argument("read_network: expected 'edges <count>'");
    std::vector<std::pair<int, int>> edges(m);
    for (auto& [i, j] : edges)
        if (!(in >> i >> j)) throw std::invalid_argument("read_network: truncated edge list");
    if (!(in >> key) || key != "weights")
        throw std::invalid_argument("read_network: expected 'weights' section");
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> w(i, j)))
                throw std::invalid_argument("read_network: truncated weight matrix");

    Graph g = make_graph(n, std::move(edges));
    WeightMatrix wm = custom_weights(n, w);
    // Off-diagonal support must stay inside the edge set.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (wm(i, j) > 0.0 &&
                !std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(i, j))) {
                throw std::invalid_argument("read_network: positive weight at non-edge " +
                                            pair_str(i, j));
            }
    return {std::move(g), std::move(wm)};
}

}  // namespace dgm
