// solvers.hpp — distributed first-order runners with full traces
//
// Three distributed methods over a static network with weight matrix W,
// plus the centralized reference iteration.  All nodes hold x_i, y_i in
// R^d; stacked states are node-major.  With F(y) = (f_1(y_1),...,f_n(y_n))
// and grad F its per-node gradients:
//
//   accelerated, diminishing steps (per-node communication k after k steps):
//     x(k) = (W (x) I) y(k-1) - alpha_{k-1} grad F(y(k-1)),
//     y(k) = x(k) + beta_{k-1} (x(k) - x(k-1)),
//     alpha_k = c/(k+1),  beta_k = k/(k+3)
//
//   accelerated, constant step + nested consensus rounds:
//     x(k) = W^{tau_x(k)} [ y(k-1) - alpha grad F(y(k-1)) ],
//     y(k) = W^{tau_y(k)} [ x(k) + beta_{k-1} (x(k) - x(k-1)) ],
//     tau_x(k) = ceil(2 log k / (-log mu)),
//     tau_y(k) = ceil((log 3 + 2 log k) / (-log mu)),
//   consensus realized by repeated multiplication with W (matrix powers
//   are never formed); per-node communication after k steps is
//   sum_{t<=k} (tau_x(t) + tau_y(t))
//
//   (sub)gradient baseline:  x(k) = W x(k-1) - alpha_{k-1} grad F(x(k-1)),
//     alpha_k = c/(k+1)^tau
//
// Traces record the stacked states, the network averages xbar/ybar, the
// disagreement norms dis_x = ||x(k) - 1 (x) xbar(k)|| (likewise dis_y),
// and communication counters.  Optimality gaps are derived quantities:
// apply_reference() computes them from the stored states for any reference
// value, so a refined f* can be re-applied without re-running.

#pragma once

#include <dgm/net.hpp>
#include <dgm/objectives.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dgm {

// alpha_k = c/(k+1) for k >= 0 (the step applied at outer iteration k+1).
double alpha_dng(double c, long long k);

// beta_k = k/(k+3) for k >= 0, with beta_{-1} = 0 (no momentum at the
// first iteration).
double beta(long long k);

// Consensus-round schedules for the constant-step method; k >= 1 and
// mu in [0, 1).  mu = 0 means one multiplication by W averages exactly,
// so both schedules are clamped to 1 round for k >= 2 (and 0 at k = 1,
// exactly as the formulas dictate).
long long tau_x(long long k, double mu);
long long tau_y(long long k, double mu);

// Called after every outer iteration with k and the n x d state matrix
// x(k) (rows = nodes); return false to stop the run early.
using Observer = std::function<bool(long long, const Eigen::MatrixXd&)>;

struct DngConfig {
    double c = 1.0;        // step constant, > 0
    long long k_max = 0;   // outer iterations
    WeightMatrix weight;   // caller applies safeguard_weights when needed
    long long record_every = 1;
    Observer observer;
};

struct DncConfig {
    double alpha = 0.0;    // constant step, > 0
    long long k_max = 0;
    WeightMatrix weight;
    double mu = 0.0;       // second-largest modulus of weight; in [0, 1)
    long long record_every = 1;
    Observer observer;
};

struct DsgConfig {
    double c = 1.0;        // step constant, > 0
    double tau = 0.0;      // step decay exponent, >= 0
    long long k_max = 0;
    WeightMatrix weight;
    long long record_every = 1;
    Observer observer;
};

struct IterRecord {
    long long k = 0;
    long long comms_per_node = 0;  // cumulative
    Eigen::VectorXd x_stack, y_stack;  // node-major, n*d entries
    Eigen::VectorXd xbar, ybar;        // network averages, d entries
    double dis_x = 0.0, dis_y = 0.0;   // disagreement norms
    // Filled by apply_reference (empty / NaN until then):
    std::vector<double> gap_per_node;  // f(x_i(k)) - f*
    double avg_rel_err = std::numeric_limits<double>::quiet_NaN();
    double max_gap = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
    std::string method;     // "dng" | "dnc" | "dsg" | "centralized"
    std::uint64_t seed = 0; // caller-supplied provenance for CSV export
    std::string config;     // parameter snapshot
    std::string objective;  // objective descriptor
    int n = 0, d = 0;
    bool diverged = false;  // state escaped (norm > 1e150 or non-finite)
    std::optional<bool> safe_step;   // step within the 1/(2L) regime, when L known
    std::optional<double> step_scale;  // c (diminishing-step methods) or alpha
    std::optional<double> f_star;    // reference value the gaps refer to
    std::vector<IterRecord> records; // k = 0 first; last recorded iterate last
};

// Runners.  The plain overloads start every node at x0 (the standing
// equal-initialization assumption); the *_from overloads take an n x d
// matrix of per-node starts (rows = nodes) for the divergence demos.
// Records are kept at k = 0, every record_every-th iteration, and k_max.
// When the objective carries an optimum, gaps are applied automatically.
// A state norm beyond 1e150 (or any non-finite value) stops the run with
// the diverged flag; runs whose recorded states overflow the objective
// are truncated to the finite prefix by apply_reference.
RunTrace run_dng(const ObjectiveSet& obj, const DngConfig& cfg, const Eigen::VectorXd& x0);
RunTrace run_dng_from(const ObjectiveSet& obj, const DngConfig& cfg, const Eigen::MatrixXd& x0_rows);
RunTrace run_dnc(const ObjectiveSet& obj, const DncConfig& cfg, const Eigen::VectorXd& x0);
RunTrace run_dnc_from(const ObjectiveSet& obj, const DncConfig& cfg, const Eigen::MatrixXd& x0_rows);
RunTrace run_dsg(const ObjectiveSet& obj, const DsgConfig& cfg, const Eigen::VectorXd& x0);
RunTrace run_dsg_from(const ObjectiveSet& obj, const DsgConfig& cfg, const Eigen::MatrixXd& x0_rows);

// Centralized fast-gradient iteration on f = sum f_i with a constant step
// (validated against 1/(nL) when L is known) or an explicit schedule
// step_at(k) = step applied when producing x(k), k >= 1 (caller-checked).
RunTrace run_centralized(const ObjectiveSet& obj, double alpha, long long k_max,
                         const Eigen::VectorXd& x0);
RunTrace run_centralized(const ObjectiveSet& obj,
                         const std::function<double(long long)>& step_at,
                         long long k_max, const Eigen::VectorXd& x0);

// Fill gap_per_node / avg_rel_err / max_gap on every record from the
// stored states and the given reference value; re-applicable with a
// refined f*.  Records whose states overflow the objective (non-finite
// gaps) mark the trace diverged and are dropped along with later records.
// avg_rel_err is NaN when the initial gap is <= 0 (start at the optimum).
void apply_reference(RunTrace& trace, const ObjectiveSet& obj, double f_star);

// First iteration (among recorded ones) whose avg_rel_err reaches each
// target 1e-1 ... 1e-7, with the communication spent at that point.
struct TargetHit {
    double eps = 0.0;
    long long k = 0;
    long long comms_per_node = 0;
    long long total_comms = 0;  // n * comms_per_node
};

struct MetricsSummary {
    std::vector<std::optional<TargetHit>> hits;  // one per target, in order
};

// Monotone scan over the trace records; unreached targets are absent, and
// a diverged trace reports every target absent.
MetricsSummary metrics(const RunTrace& trace, const ObjectiveSet& obj);

}  // namespace dgm
