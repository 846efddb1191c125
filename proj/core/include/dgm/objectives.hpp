// objectives.hpp — per-node convex objectives with certified constants
//
// Each node i owns a convex f_i : R^d -> R; the network minimizes
// f(x) = sum_i f_i(x).  An ObjectiveSet bundles the n node functions with
// whatever certificates the family supports:
//
//   lipschitz_L        the family's canonical smoothness constant, the one
//                      step-size rules are quoted against (for the logistic
//                      family this is the classical averaged estimate
//                      lambda_max(sum c_i c_i')/(4n))
//   lipschitz_L_node   certified per-node constant: EVERY single node obeys
//                      ||grad f_i(x) - grad f_i(y)|| <= L_node ||x - y||.
//                      This is the constant the inexact-oracle and progress
//                      machinery requires.  It coincides with lipschitz_L
//                      for families whose nodes share one curvature scale;
//                      for the logistic family it is max_i ||c_i||^2/4.
//   grad_bound_G       per-node gradient norm bound (||grad f_i(x)|| <= G)
//   optimum            minimizer and value of f, tagged closed_form or solved
//
// Families:
//   logistic            f_i(x) = log(1 + exp(-c_i' x)), c_i from seeded data
//   huber_two_group     20 Huber losses anchored near +theta (6) / -theta (14)
//   huber_pair          2 Huber losses anchored at +1 / -1
//   hard_nonsmooth_pair two-region pair on R^2: quadratic ellipse
//                       q_i(x) = theta (x1+s_i)^2 + (x2+s_i)^2 inside
//                       q_i <= chi^2 (chi = 6, s_i = (-1)^i), value q_i/2;
//                       outside, chi (sqrt(q_i) - chi/2)
//   hard_quadratic_pair f_i(x) = (x + (-1)^i theta)^2 / 2 (gradient unbounded)
//   cubic_pair          f_1 = 4x^3 + 3x^2/2 for x > 1, 15x^2/2 - 2 below;
//                       f_2(x) = f_1(-x); no L, no G (divergence demo)
//   fair                f_i(x) = b0^2 (|x-a_i|/b0 - log(1 + |x-a_i|/b0))
//
// Sampled certificate checks (finite differences, Lipschitz, gradient
// bound, convexity, optimality) live here so tests and the verification
// command share one implementation.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dgm {

// One node's function.  Evaluation is pure; instances are immutable and
// safe to share.  knot_distance (when set) lower-bounds the distance to the
// nearest piece boundary, so samplers can avoid finite-difference trouble.
struct NodeObjective {
    int dim = 1;
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<double(const Eigen::VectorXd&)> knot_distance;  // null = smooth
};

enum class OptimumKind { closed_form, solved };

struct Optimum {
    Eigen::VectorXd x;
    double f = 0.0;
    OptimumKind kind = OptimumKind::closed_form;
};

struct ObjectiveSet {
    std::vector<NodeObjective> items;
    std::optional<double> lipschitz_L;
    std::optional<double> lipschitz_L_node;
    std::optional<double> grad_bound_G;
    std::optional<Optimum> optimum;
    std::string descriptor;       // generating parameters, e.g. "logistic n=10 seed=3"
    std::vector<double> anchors;  // per-node anchor for scalar anchor families
    double test_box = 20.0;       // certificate sampling halfwidth per coordinate

    int nodes() const { return static_cast<int>(items.size()); }
    int dim() const { return items.empty() ? 0 : items.front().dim; }
    const NodeObjective& node(int i) const { return items.at(i); }

    // f(x) = sum_i f_i(x) and its gradient.
    double total_value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd total_gradient(const Eigen::VectorXd& x) const;
};

// Single logistic loss log(1 + exp(-c' x)) with gradient -c sigma(-c' x).
NodeObjective make_logistic_node(const Eigen::VectorXd& c);

// n logistic losses on R^3.  Data: a_i in R^2 standard normal, a "true"
// vector in R^3 standard normal, labels b_i = sign(a_i' x1* + x0* + eps_i)
// with eps_i normal of variance 3, c_i = (b_i a_i', b_i)'.
// L = ||sum c_i c_i'|| / (4n), G = max_i ||c_i||; optimum solved.
ObjectiveSet make_logistic(int n, std::uint64_t seed);

// 20 Huber losses (quadratic within distance 1 of the anchor, linear
// beyond): anchors theta + nu_i for nodes 0..5 and -theta + nu_i for nodes
// 6..19, nu_i uniform on [-theta/10, theta/10].  L = G = 1; optimum solved.
ObjectiveSet make_huber_two_group(double theta, std::uint64_t seed);

// Two Huber losses anchored at +1 and -1.  L = G = 1; closed-form optimum
// x* = 0, f* = 1.
ObjectiveSet make_huber_pair();

// Two-region pair on R^2 described above; requires theta in [0, 1] (the
// certified constants L = sqrt(2), G = 10 are proven there).  Closed-form
// optimum x* = (0,0), f* = theta + 1.
ObjectiveSet make_hard_nonsmooth_pair(double theta);

// Quadratic pair with node minimizers at +theta and -theta; L = 1, G
// absent (the gradient grows linearly).  Closed-form x* = 0, f* = theta^2.
ObjectiveSet make_hard_quadratic_pair(double theta);

// Piecewise cubic/quadratic pair (C^1 at the knots x = +-1); no L, no G.
// Optimum solved by derivative bisection on [-2, 2]: x* = 0, f* = -4.
ObjectiveSet make_cubic_pair();

// n fair losses with the given anchors (one per node); L = 1, G = b0.
ObjectiveSet make_fair_loss(int n, double b0, std::vector<double> anchors);

// Minimizer of f = sum_i f_i.  Closed-form optima are returned unchanged;
// otherwise runs the centralized fast-gradient iteration
//   x(k) = y(k-1) - (1/(nL)) grad f(y(k-1)),
//   y(k) = x(k) + ((k-1)/(k+2)) (x(k) - x(k-1))
// from zero until ||grad f(x)|| <= tol or `cap` iterations, returning the
// achieved point and value either way (the cap exit covers objectives
// whose infimum is not attained, where the value stabilizes but no finite
// minimizer exists).  Throws std::invalid_argument without a Lipschitz
// constant (such sets must carry their own solved optimum).
Optimum reference_optimum(const ObjectiveSet& obj, double tol = 1e-10,
                          long long cap = 1000000);

// Sampled certificate result: pass/fail plus the worst observed margin
// (metric depends on the check; see each function).
struct CertReport {
    bool pass = false;
    double worst = 0.0;
    int samples = 0;
};

// Centered finite differences (h = 1e-6) against the implemented gradient
// at `points` random points per node, uniform in [-box, box]^d.  Points
// within 1e-4 of a piece boundary or with gradient norm below 1e-6 are
// resampled (relative error is meaningless at stationary points).  Passes
// when the worst relative error is <= 1e-5.
CertReport check_gradient_fd(const ObjectiveSet& obj, int points, double box,
                             std::uint64_t seed);

// ||grad f_i(x) - grad f_i(y)|| <= L_node ||x - y|| for every node on
// random pairs, certifying lipschitz_L_node.  Allows a 1e-9 relative
// slack for roundoff; worst = max ratio lhs / (L_node ||x - y||).
CertReport check_lipschitz(const ObjectiveSet& obj, int pairs, double box,
                           std::uint64_t seed);

// ||grad f_i(x)|| <= G on random points; worst = max ||grad|| / G.
CertReport check_grad_bound(const ObjectiveSet& obj, int points, double box,
                            std::uint64_t seed);

// Midpoint convexity f_i((x+y)/2) <= (f_i(x)+f_i(y))/2 + 1e-10 on random
// segments; worst = max violation.
CertReport check_convexity(const ObjectiveSet& obj, int segments, double box,
                           std::uint64_t seed);

// f(x*) <= f(x* + delta) + 1e-9 for random ||delta|| <= 1 (the slack covers
// solved optima); worst = max f(x*) - f(x* + delta).
CertReport check_optimum(const ObjectiveSet& obj, int points, std::uint64_t seed);

}  // namespace dgm
