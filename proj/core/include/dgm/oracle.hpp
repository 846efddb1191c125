// oracle.hpp — inexact first-order oracle built from disagreeing node states,
// and numeric checkers for the inequalities the convergence analysis rests on.
//
// With y_i the state of node i and ybar their average, the aggregate
//
//   f_hat = sum_i { f_i(y_i) + grad f_i(y_i)'(ybar - y_i) },
//   g_hat = sum_i grad f_i(y_i)
//
// is an inexact oracle for f = sum_i f_i at ybar: for every x,
//
//   f_hat + g_hat'(x - ybar)  <=  f(x)
//     <=  f_hat + g_hat'(x - ybar) + (L_k/2) ||x - ybar||^2 + delta_k
//
// with L_k = 2 n L and delta_k = L ||ytilde||^2, where ytilde stacks
// y_i - ybar and L bounds each node's gradient Lipschitz constant.
//
// The progress checker evaluates, along a recorded trace, the residual of
//
//   (k+1)^2 (f(xbar(k)) - f(x_ref)) + 2 L_{k-1} ||vbar(k) - x_ref||^2
//     <=  (k^2-1) (f(xbar(k-1)) - f(x_ref))
//         + 2 L_{k-1} ||vbar(k-1) - x_ref||^2 + (k+1)^2 delta_{k-1}
//
// with L_{k-1} = n / alpha_{k-1}, gamma_k = 2/(k+2) and
// vbar(k) = (ybar(k) - (1 - gamma_k) xbar(k)) / gamma_k.  The inequality
// is asserted for every k when the step scale is at most 1/(2L), and for
// k >= 2 c L otherwise.

#pragma once

#include <dgm/objectives.hpp>
#include <dgm/solvers.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dgm {

/// Aggregated oracle data at one stacked state.
struct OracleSample {
    Eigen::VectorXd y_stack;  ///< per-node states, node-major (n*d entries)
    Eigen::VectorXd ybar;     ///< network average of the y_i
    double f_hat = 0.0;       ///< inexact value estimate at ybar
    Eigen::VectorXd g_hat;    ///< inexact (sub)gradient estimate at ybar
    double L_k = 0.0;         ///< curvature constant of the upper model, 2 n L
    double delta_k = 0.0;     ///< slack of the upper model, L ||ytilde||^2
};

/// Evaluates the aggregate oracle at a stacked state.  Requires the
/// objective to declare a gradient Lipschitz constant.
OracleSample inexact_oracle_at(const ObjectiveSet& obj, const Eigen::VectorXd& y_stack);

/// Worst violations of the two-sided sandwich inequality over a probe set
/// (negative values mean the inequality held with slack everywhere).
struct SandwichReport {
    double lower = 0.0;  ///< max over probes of  affine_model(x) - f(x)
    double upper = 0.0;  ///< max over probes of  f(x) - upper_model(x)
};

/// Slack pair {f(x) - affine_model(x), upper_model(x) - f(x)} at one probe;
/// both are nonnegative when the sandwich inequality holds at x.
std::pair<double, double> sandwich_slacks(const OracleSample& sample,
                                          const ObjectiveSet& obj,
                                          const Eigen::VectorXd& x);

/// Probes the sandwich inequality at `probes` uniform draws from the cube
/// [-box, box]^d plus structured points (ybar, every y_i, the reference
/// optimum when declared, and any caller-supplied extras).  Violations are
/// data, not errors: the caller judges the returned maxima.
SandwichReport check_sandwich(const OracleSample& sample, const ObjectiveSet& obj,
                              long long probes, double box, std::uint64_t seed,
                              const std::vector<Eigen::VectorXd>& extra_points = {});

/// Runs check_sandwich at every recorded iterate with k divisible by
/// `every` (plus the average state xbar(k) as an extra probe) and returns
/// the worst violations across the trace.
SandwichReport check_sandwich_trace(const RunTrace& trace, const ObjectiveSet& obj,
                                    long long every, long long probes, double box,
                                    std::uint64_t seed);

/// Extrapolation point vbar(k) = (ybar - (1 - gamma_k) xbar) / gamma_k with
/// gamma_k = 2/(k+2); vbar(0) = xbar(0) whenever ybar(0) = xbar(0).
Eigen::VectorXd vbar(const Eigen::VectorXd& xbar, const Eigen::VectorXd& ybar,
                     long long k);

/// Residual of the per-iteration progress inequality at one iterate.
struct ProgressEntry {
    long long k = 0;
    double residual = 0.0;   ///< RHS - LHS; negative values are violations
    bool regime_ok = false;  ///< iterate is judged: inside the step regime
                             ///< and on a function-value scale <= 1e6
};

struct ProgressReport {
    std::vector<ProgressEntry> entries;  ///< one per consecutive iterate pair
    long long judged = 0;                ///< entries with regime_ok
    long long violations = 0;            ///< judged entries with residual < -1e-8
    double worst_residual = 0.0;         ///< smallest judged residual
    bool pass = false;                   ///< no violations among judged entries
};

/// Evaluates the progress inequality along a trace produced by the
/// diminishing-step or consensus-rounds accelerated runner.  `x_ref` is
/// the comparison point; when empty the objective's reference optimum is
/// used.  L_{k-1} is n k / c for the diminishing-step method and
/// n / alpha for the constant-step one.
ProgressReport check_progress(const RunTrace& trace, const ObjectiveSet& obj,
                              const Eigen::VectorXd& x_ref = Eigen::VectorXd());

/// Writes `k,residual,regime_ok` rows for every entry.
void write_progress_csv(std::ostream& out, const ProgressReport& report);

/// One-line worst-case summary of a progress report.
std::string progress_summary(const ProgressReport& report);

}  // namespace dgm
