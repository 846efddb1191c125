// test_solvers.cpp — distributed runners, schedules, traces, metrics, CSV
//
// Covers: the step and momentum schedules, the consensus-round schedules
// tau_x/tau_y, hand-checked iterations of all three distributed methods,
// average preservation, divergence handling, the n=1 reduction to the
// centralized method, first-hit metrics, and the trace CSV round trip.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgm/csv.hpp>
#include <dgm/net.hpp>
#include <dgm/objectives.hpp>
#include <dgm/solvers.hpp>

#include <cmath>
#include <sstream>

using namespace dgm;

namespace {

// Single-node quadratic f(x) = x^2 / 2 for hand iterations.
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

WeightMatrix two_node_weights(double off) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0 - off, off, off, 1.0 - off;
    return custom_weights(2, m);
}

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

}  // namespace

TEST_CASE("step and momentum schedules") {
    CHECK(alpha_dng(1.0, 0) == 1.0);
    CHECK(alpha_dng(0.5, 1) == 0.25);
    CHECK(beta(-1) == 0.0);
    CHECK(beta(0) == 0.0);
    CHECK(beta(1) == 0.25);
    CHECK(beta(7) == 0.7);
    CHECK_THROWS_AS(alpha_dng(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(alpha_dng(1.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(beta(-2), std::invalid_argument);
}

TEST_CASE("consensus round schedules") {
    CHECK(tau_x(1, 0.5) == 0);
    CHECK(tau_x(2, 0.5) == 2);
    CHECK(tau_y(2, 0.5) == 4);  // ceil(log3/log2 + 2)
    CHECK(tau_y(1, 1.0 / 3.0) == 1);
    CHECK(tau_y(1, 0.5) == 2);
    // exact averaging: no rounds needed at k=1, one round suffices after
    CHECK(tau_x(1, 0.0) == 0);
    CHECK(tau_y(1, 0.0) == 0);
    CHECK(tau_x(2, 0.0) == 1);
    CHECK(tau_y(100, 0.0) == 1);
    // schedules are nondecreasing in k
    for (double mu : {0.3, 0.75, 0.9})
        for (long long k = 1; k < 50; ++k) {
            CHECK(tau_x(k + 1, mu) >= tau_x(k, mu));
            CHECK(tau_y(k, mu) >= tau_x(k, mu));
        }
    CHECK_THROWS_AS(tau_x(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(tau_x(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tau_y(1, -0.1), std::invalid_argument);
}

TEST_CASE("accelerated run with diminishing steps: hand iteration on one node") {
    ObjectiveSet obj = scalar_quadratic();
    DngConfig cfg;
    cfg.c = 0.5;
    cfg.k_max = 2;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace tr = run_dng(obj, cfg, scalar(1.0));
    REQUIRE(tr.records.size() == 3);  // k = 0, 1, 2
    CHECK(tr.records[1].x_stack(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tr.records[1].y_stack(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tr.records[2].x_stack(0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(tr.records[2].y_stack(0) == doctest::Approx(0.34375).epsilon(1e-15));
    CHECK(tr.records[1].comms_per_node == 1);
    CHECK(tr.records[2].comms_per_node == 2);
    CHECK_FALSE(tr.diverged);
}

TEST_CASE("accelerated run preserves the network average identity") {
    ObjectiveSet obj = make_logistic(5, 3);
    Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    DngConfig cfg;
    cfg.c = 1.0;
    cfg.k_max = 50;
    cfg.weight = metropolis_weights(g);
    RunTrace tr = run_dng(obj, cfg, Eigen::VectorXd::Zero(3));
    REQUIRE(tr.records.size() == 51);
    for (long long k = 1; k <= 50; ++k) {
        const IterRecord& prev = tr.records[k - 1];
        const IterRecord& cur = tr.records[k];
        // xbar(k) = ybar(k-1) - (alpha_{k-1}/n) sum_i grad f_i(y_i(k-1))
        Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(3);
        for (int i = 0; i < 5; ++i)
            g_sum += obj.node(i).gradient(prev.y_stack.segment(3 * i, 3));
        Eigen::VectorXd expect = prev.ybar - (alpha_dng(1.0, k - 1) / 5.0) * g_sum;
        CHECK((cur.xbar - expect).norm() <= 1e-10);
        // disagreement vector has zero mean per coordinate
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
        for (int i = 0; i < 5; ++i) mean += cur.x_stack.segment(3 * i, 3) - cur.xbar;
        CHECK(mean.cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(cur.comms_per_node == k);
    }
    // reference-based metrics were applied by the runner
    CHECK(tr.f_star.has_value());
    CHECK(tr.records[0].avg_rel_err == doctest::Approx(1.0));
}

TEST_CASE("multi-round run charges the consensus schedule") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    DncConfig cfg;
    cfg.alpha = 0.5;
    cfg.k_max = 3;
    cfg.weight = two_node_weights(0.25);  // eigenvalues {1/2, 1}
    cfg.mu = 0.5;
    RunTrace tr = run_dnc(obj, cfg, scalar(0.0));
    // comms(1) = 0 + 2, comms(2) = 2 + (2 + 4), comms(3) = 8 + (4 + 6)
    CHECK(tr.records[1].comms_per_node == 2);
    CHECK(tr.records[2].comms_per_node == 8);
    CHECK(tr.records[3].comms_per_node == 8 + tau_x(3, 0.5) + tau_y(3, 0.5));
}

TEST_CASE("multi-round run rejects a mu inconsistent with the weights") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    DncConfig cfg;
    cfg.alpha = 0.5;
    cfg.k_max = 2;
    cfg.weight = two_node_weights(0.25);
    cfg.mu = 0.6;
    CHECK_THROWS_AS(run_dnc(obj, cfg, scalar(0.0)), std::invalid_argument);
}

TEST_CASE("multi-round comms stay within the closed-form budget") {
    for (double mu : {0.3, 0.75, 0.9}) {
        long long total = 0;
        for (long long k = 1; k <= 100; ++k) {
            total += tau_x(k, mu) + tau_y(k, mu);
            double budget = (2.0 / (-std::log(mu))) *
                            (k * std::log(3.0) + 2.0 * (k + 1) * std::log(k + 1.0));
            CHECK(total <= budget);
        }
    }
}

TEST_CASE("multi-round run on the scaled quadratic pair leaves a large gap") {
    // theta = 8 sqrt(M) k^2 with M = 1, horizon k = 10: the best gap over
    // the network is still at least M at the horizon.
    ObjectiveSet obj = make_hard_quadratic_pair(800.0);
    DncConfig cfg;
    cfg.alpha = 0.5;
    cfg.k_max = 10;
    cfg.weight = two_node_weights(0.25);
    cfg.mu = 0.5;
    RunTrace tr = run_dnc(obj, cfg, scalar(0.0));
    CHECK(tr.records[10].max_gap >= 1.0);
}

TEST_CASE("ideal averaging weights equalize states after the first iteration") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    DncConfig cfg;
    cfg.alpha = 0.5;
    cfg.k_max = 3;
    cfg.weight = two_node_weights(0.5);  // eigenvalues {0, 1}
    cfg.mu = 0.0;
    RunTrace tr = run_dnc(obj, cfg, scalar(0.0));
    CHECK(tr.records[1].dis_x > 0.0);  // tau_x(1) = 0: no averaging yet
    for (long long k = 2; k <= 3; ++k) {
        CHECK(tr.records[k].dis_x <= 1e-14);
        CHECK(tr.records[k].dis_y <= 1e-14);
    }
}

TEST_CASE("baseline run sits at the closed-form fixed point") {
    // W11 - W12 - alpha = 3/4 - 1/4 - 1/2 = 0, so node values jump to
    // +-alpha*theta = +-1/2 and stay there.
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    DsgConfig cfg;
    cfg.c = 0.5;
    cfg.tau = 0.0;
    cfg.k_max = 20;
    cfg.weight = two_node_weights(0.25);
    RunTrace tr = run_dsg(obj, cfg, scalar(0.0));
    for (long long k = 1; k <= 20; ++k) {
        CHECK(tr.records[k].x_stack(0) == 0.5);
        CHECK(tr.records[k].x_stack(1) == -0.5);
        CHECK(tr.records[k].y_stack(0) == 0.5);  // baseline records y = x
        CHECK(tr.records[k].comms_per_node == k);
    }
}

TEST_CASE("baseline run with one node is plain gradient descent") {
    ObjectiveSet obj = scalar_quadratic();
    DsgConfig cfg;
    cfg.c = 0.3;
    cfg.tau = 0.5;
    cfg.k_max = 10;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace tr = run_dsg(obj, cfg, scalar(2.0));
    double x = 2.0;
    for (long long k = 1; k <= 10; ++k) {
        x = x - 0.3 / std::pow(static_cast<double>(k), 0.5) * x;
        CHECK(tr.records[k].x_stack(0) == doctest::Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("centralized run: fixed points, rate, and schedule matching") {
    ObjectiveSet obj = scalar_quadratic();
    // gradient-zero start stays fixed
    RunTrace still = run_centralized(obj, 0.5, 5, scalar(0.0));
    for (const auto& r : still.records) CHECK(r.x_stack(0) == 0.0);

    // constant step alpha = 1/2 from x0 = 1 matches the hand iteration
    RunTrace tr = run_centralized(obj, 0.5, 2, scalar(1.0));
    CHECK(tr.records[1].x_stack(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tr.records[2].x_stack(0) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(run_centralized(obj, 1.5, 2, scalar(1.0)), std::invalid_argument);

    // empirical O(1/k^2): doubling the horizon at least halves the gap
    ObjectiveSet lg = make_logistic(10, 3);
    RunTrace lt = run_centralized(lg, 1.0 / (10 * *lg.lipschitz_L_node), 256,
                                  Eigen::VectorXd::Zero(3));
    auto gap = [&](long long k) {
        return lg.total_value(lt.records[k].x_stack) - lt.f_star.value();
    };
    for (long long k : {32, 64, 128}) CHECK(gap(2 * k) <= gap(k) / 2.0 + 1e-14);
}

TEST_CASE("one-node accelerated run equals the centralized diminishing-step run") {
    ObjectiveSet obj = make_fair_loss(1, 2.0, {0.7});
    DngConfig cfg;
    cfg.c = 0.9;
    cfg.k_max = 1000;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    RunTrace a = run_dng(obj, cfg, scalar(-3.0));
    RunTrace b = run_centralized(
        obj, [](long long k) { return 0.9 / static_cast<double>(k); }, 1000, scalar(-3.0));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t r = 0; r < a.records.size(); ++r) {
        CHECK(std::abs(a.records[r].x_stack(0) - b.records[r].x_stack(0)) <= 1e-12);
        CHECK(std::abs(a.records[r].y_stack(0) - b.records[r].y_stack(0)) <= 1e-12);
    }
}

TEST_CASE("disagreement lower bound on the nearly-disconnected weight pair") {
    const double lam = 1e-6, c = 0.25e-6, theta = 1000.0;
    Eigen::MatrixXd w(2, 2);
    w << (1 + lam) / 2, (1 - lam) / 2, (1 - lam) / 2, (1 + lam) / 2;
    ObjectiveSet obj = make_hard_quadratic_pair(theta);
    DngConfig cfg;
    cfg.c = c;
    cfg.k_max = 100;
    cfg.weight = custom_weights(2, w);
    RunTrace tr = run_dng(obj, cfg, scalar(0.0));
    for (long long k = 5; k <= 100; ++k)
        CHECK(tr.records[k].dis_x >= std::sqrt(2.0) * c * theta / (2.0 * k));
}

TEST_CASE("divergence guard flags the cubic demo and keeps records finite") {
    ObjectiveSet obj = make_cubic_pair();
    DngConfig cfg;
    cfg.c = 1.0;
    cfg.k_max = 500;
    cfg.weight = two_node_weights(0.1);
    Eigen::MatrixXd x0(2, 1);
    x0 << -1.0, 1.0;
    RunTrace tr = run_dng_from(obj, cfg, x0);
    CHECK(tr.diverged);
    CHECK(tr.records.back().k < 500);
    for (const auto& r : tr.records) {
        CHECK(std::isfinite(r.x_stack.norm()));
        if (!r.gap_per_node.empty())
            for (double gp : r.gap_per_node) CHECK(std::isfinite(gp));
    }
}

TEST_CASE("record cadence keeps endpoints and the observer can stop a run") {
    ObjectiveSet obj = scalar_quadratic();
    DngConfig cfg;
    cfg.c = 0.5;
    cfg.k_max = 25;
    cfg.weight = custom_weights(1, Eigen::MatrixXd::Ones(1, 1));
    cfg.record_every = 10;
    RunTrace tr = run_dng(obj, cfg, scalar(1.0));
    std::vector<long long> ks;
    for (const auto& r : tr.records) ks.push_back(r.k);
    CHECK(ks == std::vector<long long>{0, 10, 20, 25});

    cfg.record_every = 1;
    cfg.observer = [](long long k, const Eigen::MatrixXd&) { return k < 5; };
    RunTrace stopped = run_dng(obj, cfg, scalar(1.0));
    CHECK(stopped.records.back().k == 5);
    CHECK_FALSE(stopped.diverged);
}

TEST_CASE("first-hit metrics report targets in reach and skip the rest") {
    ObjectiveSet obj = make_hard_quadratic_pair(1.0);
    Graph g = make_graph(2, {{0, 1}});
    DngConfig cfg;
    cfg.c = 0.45;  // inside the safe-step regime c <= 1/(2L)
    cfg.k_max = 400;
    cfg.weight = metropolis_weights(g);
    // Start away from the optimizer so the initial gap (the relative-error
    // denominator) is positive.
    RunTrace tr = run_dng(obj, cfg, scalar(3.0));
    CHECK(tr.safe_step.has_value());
    CHECK(*tr.safe_step);
    MetricsSummary ms = metrics(tr, obj);
    REQUIRE(ms.hits.size() == 7);
    REQUIRE(ms.hits[0].has_value());  // 1e-1
    CHECK(ms.hits[0]->eps == 1e-1);
    CHECK(ms.hits[0]->total_comms == 2 * ms.hits[0]->comms_per_node);
    for (std::size_t t = 1; t < 7; ++t)
        if (ms.hits[t] && ms.hits[t - 1])
            CHECK(ms.hits[t]->k >= ms.hits[t - 1]->k);
    CHECK_FALSE(ms.hits[6].has_value());  // 1e-7 out of reach at k=400

    // a diverged trace reports nothing
    ObjectiveSet cubic = make_cubic_pair();
    DngConfig dcfg;
    dcfg.c = 1.0;
    dcfg.k_max = 500;
    dcfg.weight = two_node_weights(0.1);
    Eigen::MatrixXd x0(2, 1);
    x0 << -1.0, 1.0;
    MetricsSummary dms = metrics(run_dng_from(cubic, dcfg, x0), cubic);
    for (const auto& h : dms.hits) CHECK_FALSE(h.has_value());
}

TEST_CASE("trace CSV emits the documented schema and validates") {
    ObjectiveSet obj = make_hard_quadratic_pair(2.0);
    Graph g = make_graph(2, {{0, 1}});
    DngConfig cfg;
    cfg.c = 0.25;
    cfg.k_max = 30;
    cfg.weight = metropolis_weights(g);
    RunTrace tr = run_dng(obj, cfg, scalar(0.0));
    tr.seed = 42;
    std::ostringstream out;
    write_trace_csv(out, tr);
    std::string text = out.str();
    CHECK(text.rfind("method,seed,k,comms_per_node,total_comms,avg_rel_err,"
                     "max_gap,dis_x,dis_y,diverged\n", 0) == 0);

    std::istringstream in(text);
    CHECK(validate_trace_csv(in) == 31);  // rows k = 0..30

    // deterministic re-emission
    std::ostringstream out2;
    write_trace_csv(out2, tr);
    CHECK(out.str() == out2.str());

    // truncated data row is rejected
    std::istringstream bad(text.substr(0, text.size() - 20));
    CHECK_THROWS_AS(validate_trace_csv(bad), std::invalid_argument);

    // non-numeric field is rejected
    std::string tampered = text;
    tampered.replace(tampered.find("dng,42,0"), 8, "dng,42,xx");
    std::istringstream bad2(tampered);
    CHECK_THROWS_AS(validate_trace_csv(bad2), std::invalid_argument);
}

TEST_CASE("identical configs reproduce bit-identical traces") {
    ObjectiveSet obj = make_logistic(5, 9);
    Graph g = generate_geometric(5, 0.8, 4);
    DngConfig cfg;
    cfg.c = 1.0;
    cfg.k_max = 40;
    cfg.weight = safeguard_weights(metropolis_weights(g), 0.1);
    RunTrace a = run_dng(obj, cfg, Eigen::VectorXd::Zero(3));
    RunTrace b = run_dng(make_logistic(5, 9), cfg, Eigen::VectorXd::Zero(3));
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t r = 0; r < a.records.size(); ++r) {
        CHECK(a.records[r].x_stack == b.records[r].x_stack);
        CHECK(a.records[r].y_stack == b.records[r].y_stack);
    }
}
