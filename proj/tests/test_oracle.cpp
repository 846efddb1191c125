// test_oracle.cpp — inexact first-order oracle and its verification harness
//
// Covers: the aggregated oracle sample (f_hat, g_hat, L_k, delta_k) built
// from per-node states, the two-sided sandwich inequality
//   f_hat + g_hat'(x - ybar) <= f(x) <= f_hat + g_hat'(x - ybar)
//                                       + (L_k/2)||x - ybar||^2 + delta_k,
// the extrapolation point vbar, and the per-iteration progress inequality
// checked over whole solver traces.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgm/net.hpp>
#include <dgm/objectives.hpp>
#include <dgm/oracle.hpp>
#include <dgm/rng.hpp>
#include <dgm/solvers.hpp>

#include <cmath>
#include <sstream>

using namespace dgm;

namespace {

// Single-node quadratic f(x) = x^2 / 2.
ObjectiveSet scalar_quadratic() {
    ObjectiveSet set;
    NodeObjective f;
    f.dim = 1;
    f.value = [](const Eigen::VectorXd& x) { return 0.5 * x(0) * x(0); };
    f.gradient = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x); };
    set.items.push_back(std::move(f));
    set.lipschitz_L = 1.0;
    set.lipschitz_L_node = 1.0;
    set.descriptor = "quadratic";
    set.optimum = Optimum{Eigen::VectorXd::Zero(1), 0.0, OptimumKind::closed_form};
    return set;
}

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

Eigen::VectorXd pair_stack(double a, double b) {
    Eigen::VectorXd y(2);
    y << a, b;
    return y;
}

WeightMatrix ring_weights(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return metropolis_weights(make_graph(n, edges));
}

}  // namespace

TEST_CASE("oracle sample at a consensus point is the exact oracle") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    OracleSample s = inexact_oracle_at(obj, pair_stack(0.3, 0.3));
    CHECK(s.ybar(0) == doctest::Approx(0.3).epsilon(1e-15));
    // f(v) = (v-1)^2/2 + (v+1)^2/2 = v^2 + 1, grad = 2v
    CHECK(s.f_hat == doctest::Approx(0.3 * 0.3 + 1.0).epsilon(1e-15));
    CHECK(s.g_hat(0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.delta_k == 0.0);
    CHECK(s.L_k == 4.0);  // 2 n L with n = 2, L = 1

    OracleSample again = inexact_oracle_at(obj, pair_stack(0.3, 0.3));
    CHECK(again.f_hat == s.f_hat);  // bit-identical recompute
    CHECK(again.g_hat(0) == s.g_hat(0));
}

TEST_CASE("oracle sample with both nodes at their own minimizers") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    OracleSample s = inexact_oracle_at(obj, pair_stack(1.0, -1.0));
    CHECK(s.ybar(0) == 0.0);
    CHECK(s.f_hat == 0.0);
    CHECK(s.g_hat(0) == 0.0);
    CHECK(s.delta_k == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.L_k == 4.0);
}

TEST_CASE("single-node oracle sample is always exact") {
    ObjectiveSet obj = scalar_quadratic();
    OracleSample s = inexact_oracle_at(obj, scalar(0.7));
    CHECK(s.f_hat == doctest::Approx(0.245).epsilon(1e-15));
    CHECK(s.g_hat(0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(s.delta_k == 0.0);
    CHECK(s.L_k == 2.0);
}

TEST_CASE("oracle sample requires a smoothness constant") {
    ObjectiveSet obj = make_cubic_pair();  // declares no curvature bound
    CHECK_THROWS_AS(inexact_oracle_at(obj, pair_stack(0.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("delta matches the recorded y-disagreement") {
    ObjectiveSet obj = make_logistic(10, 3);
    DngConfig cfg;
    cfg.c = 1.0;
    cfg.k_max = 20;
    cfg.weight = ring_weights(10);
    RunTrace tr = run_dng(obj, cfg, Eigen::VectorXd::Zero(3));
    const double L = *obj.lipschitz_L_node;
    for (std::size_t r = 1; r < tr.records.size(); r += 5) {
        const IterRecord& rec = tr.records[r];
        OracleSample s = inexact_oracle_at(obj, rec.y_stack);
        CHECK(std::abs(s.delta_k - L * rec.dis_y * rec.dis_y) <=
              1e-12 * std::max(1.0, s.delta_k));
    }
}

TEST_CASE("sandwich slacks at hand-checked points") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    OracleSample split = inexact_oracle_at(obj, pair_stack(1.0, -1.0));
    auto [lo, hi] = sandwich_slacks(split, obj, scalar(0.0));
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-15));  // f(0) - affine = 1 - 0
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-15));  // model(0) - f(0) = 2 - 1

    // At a consensus point both slacks are (x - v)^2 for this quadratic.
    OracleSample cons = inexact_oracle_at(obj, pair_stack(0.3, 0.3));
    auto [clo, chi] = sandwich_slacks(cons, obj, scalar(2.0));
    CHECK(clo == doctest::Approx(1.7 * 1.7).epsilon(1e-12));
    CHECK(chi == doctest::Approx(1.7 * 1.7).epsilon(1e-12));
}

TEST_CASE("sandwich check passes on a logistic instance") {
    ObjectiveSet obj = make_logistic(10, 5);
    Rng rng(17);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) y(i) = rng.uniform(-2.0, 2.0);
    OracleSample s = inexact_oracle_at(obj, y);
    SandwichReport rep = check_sandwich(s, obj, 500, 5.0, 99);
    CHECK(rep.lower <= 1e-9);
    CHECK(rep.upper <= 1e-9);
}

TEST_CASE("sandwich check flags a corrupted sample") {
    ObjectiveSet obj = make_logistic(10, 5);
    Rng rng(17);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) y(i) = rng.uniform(-0.5, 0.5);
    OracleSample s = inexact_oracle_at(obj, y);

    OracleSample inflated = s;
    inflated.f_hat += 1.0;  // affine minorant pushed above f
    CHECK(check_sandwich(inflated, obj, 100, 5.0, 99).lower > 0.5);

    OracleSample starved = s;
    starved.delta_k -= 8.0;  // upper model pulled below f
    CHECK(check_sandwich(starved, obj, 100, 5.0, 99).upper > 4.0);
}

TEST_CASE("vbar extrapolates the averaged sequences") {
    Eigen::VectorXd v = scalar(1.5);
    CHECK(vbar(v, v, 0)(0) == doctest::Approx(1.5).epsilon(1e-15));  // gamma_0 = 1
    // gamma_2 = 1/2 so vbar = 2 ybar - xbar
    CHECK(vbar(scalar(1.0), scalar(2.0), 2)(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(vbar(v, v, -1), std::invalid_argument);
}

TEST_CASE("progress residuals are nonnegative in the safe regime") {
    ObjectiveSet obj = scalar_quadratic();
    DngConfig cfg;
    cfg.c = 0.5;  // equals 1/(2L): the inequality holds from k = 1 on
    cfg.k_max = 1000;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace tr = run_dng(obj, cfg, scalar(1.0));
    ProgressReport rep = check_progress(tr, obj);
    REQUIRE(rep.entries.size() == 1000);
    CHECK(rep.violations == 0);
    CHECK(rep.pass);
    for (const ProgressEntry& e : rep.entries) {
        CHECK(e.regime_ok);
        CHECK(e.residual >= -1e-8);
    }
}

TEST_CASE("progress residuals are nonnegative for the consensus-rounds method") {
    ObjectiveSet obj = make_logistic(10, 3);
    WeightMatrix w = ring_weights(10);
    DncConfig cfg;
    cfg.alpha = 1.0 / (2.0 * *obj.lipschitz_L_node);
    cfg.mu = spectral(w).mu;
    cfg.k_max = 500;
    cfg.weight = w;
    RunTrace tr = run_dnc(obj, cfg, Eigen::VectorXd::Zero(3));
    ProgressReport rep = check_progress(tr, obj);
    REQUIRE(rep.entries.size() == 500);
    CHECK(rep.violations == 0);
    CHECK(rep.pass);
}

TEST_CASE("progress regime excludes early iterates for large steps") {
    ObjectiveSet obj = scalar_quadratic();
    DngConfig cfg;
    cfg.c = 2.0;  // threshold 2 c L = 4
    cfg.k_max = 50;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace tr = run_dng(obj, cfg, scalar(1.0));
    ProgressReport rep = check_progress(tr, obj);
    REQUIRE(rep.entries.size() == 50);
    for (const ProgressEntry& e : rep.entries) CHECK(e.regime_ok == (e.k >= 4));
    CHECK(rep.violations == 0);
    CHECK(rep.pass);
}

TEST_CASE("progress checker rejects unsupported traces") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    DsgConfig cfg;
    cfg.c = 0.5;
    cfg.tau = 0.5;
    cfg.k_max = 5;
    Eigen::MatrixXd m(2, 2);
    m << 0.75, 0.25, 0.25, 0.75;
    cfg.weight = custom_weights(2, m);
    RunTrace tr = run_dsg(obj, cfg, scalar(0.0));
    CHECK_THROWS_AS(check_progress(tr, obj), std::invalid_argument);

    // Without a reference optimum an explicit x_ref is required.
    ObjectiveSet bare = scalar_quadratic();
    bare.optimum.reset();
    DngConfig dcfg;
    dcfg.c = 0.5;
    dcfg.k_max = 5;
    dcfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace dtr = run_dng(bare, dcfg, scalar(1.0));
    CHECK_THROWS_AS(check_progress(dtr, bare), std::invalid_argument);
    ProgressReport rep = check_progress(dtr, bare, scalar(0.0));
    CHECK(rep.entries.size() == 5);
}

TEST_CASE("progress report exports as CSV with a summary line") {
    ObjectiveSet obj = scalar_quadratic();
    DngConfig cfg;
    cfg.c = 0.5;
    cfg.k_max = 10;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace tr = run_dng(obj, cfg, scalar(1.0));
    ProgressReport rep = check_progress(tr, obj);

    std::ostringstream out;
    write_progress_csv(out, rep);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "k,residual,regime_ok");
    long long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find(",1") != std::string::npos);  // all iterates in regime
    }
    CHECK(rows == 10);

    std::string s = progress_summary(rep);
    CHECK(s.find("violations=0") != std::string::npos);
    CHECK(s.find("judged=10") != std::string::npos);
}

TEST_CASE("trace-level sandwich sweep stays within tolerance") {
    ObjectiveSet obj = make_logistic(10, 3);
    DngConfig cfg;
    cfg.c = 1.0;  // still within 1/(2L) for this instance
    cfg.k_max = 100;
    cfg.weight = ring_weights(10);
    RunTrace tr = run_dng(obj, cfg, Eigen::VectorXd::Zero(3));
    SandwichReport rep = check_sandwich_trace(tr, obj, 10, 500, 5.0, 7);
    CHECK(rep.lower <= 1e-8);
    CHECK(rep.upper <= 1e-8);
}
