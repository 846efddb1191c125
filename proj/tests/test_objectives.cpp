// test_objectives.cpp — loss families, certified constants, reference optima
//
// Covers: logistic regression losses, Huber losses (two-group and the
// two-node pair), the two-region hard pair, the quadratic hard pair, the
// piecewise-cubic pair, the fair loss, sampled certificates for gradients /
// L / G / convexity / optima, and the centralized reference solve.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgm/objectives.hpp>
#include <dgm/rng.hpp>

#include <cmath>

using namespace dgm;

namespace {

// Every certificate an objective set declares must pass on a sample.
void check_declared_certificates(const ObjectiveSet& set, std::uint64_t seed) {
    INFO("family: ", set.descriptor);
    CHECK(check_gradient_fd(set, 100, set.test_box, seed).pass);
    CHECK(check_convexity(set, 200, set.test_box, seed + 1).pass);
    if (set.lipschitz_L_node)
        CHECK(check_lipschitz(set, 1000, set.test_box, seed + 2).pass);
    if (set.grad_bound_G) CHECK(check_grad_bound(set, 1000, set.test_box, seed + 3).pass);
    if (set.optimum) CHECK(check_optimum(set, 100, seed + 4).pass);
}

}  // namespace

TEST_CASE("logistic node with unit data vector") {
    NodeObjective f = make_logistic_node(Eigen::Vector3d(1, 1, 1));
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3);
    CHECK(f.value(x0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    Eigen::VectorXd g = f.gradient(x0);
    for (int l = 0; l < 3; ++l) CHECK(g(l) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("logistic family certifies L and G") {
    ObjectiveSet set = make_logistic(100, 7);
    CHECK(set.nodes() == 100);
    CHECK(set.dim() == 3);
    REQUIRE(set.lipschitz_L.has_value());
    CHECK(*set.lipschitz_L > 0.05);   // around 0.3 for this generator
    CHECK(*set.lipschitz_L < 2.0);
    // the certified per-node constant dominates the averaged one
    REQUIRE(set.lipschitz_L_node.has_value());
    CHECK(*set.lipschitz_L_node >= *set.lipschitz_L);
    REQUIRE(set.grad_bound_G.has_value());
    REQUIRE(set.optimum.has_value());
    CHECK(set.optimum->kind == OptimumKind::solved);
    // sampled certificates in the declared box
    CHECK(check_lipschitz(set, 1000, set.test_box, 99).pass);
    CHECK(check_grad_bound(set, 1000, set.test_box, 99).pass);
}

TEST_CASE("logistic generation is reproducible and seed-sensitive") {
    ObjectiveSet a = make_logistic(10, 3);
    ObjectiveSet b = make_logistic(10, 3);
    ObjectiveSet c = make_logistic(10, 4);
    Eigen::VectorXd x(3);
    x << 0.3, -1.2, 0.5;
    CHECK(a.total_value(x) == b.total_value(x));
    CHECK(a.total_value(x) != c.total_value(x));
}

TEST_CASE("logistic reference optimum is self-consistent in the tolerance") {
    ObjectiveSet set = make_logistic(10, 1);
    Optimum coarse = reference_optimum(set, 1e-10);
    Optimum fine = reference_optimum(set, 1e-11);
    CHECK(std::abs(coarse.f - fine.f) < 1e-9);
}

TEST_CASE("huber two-group structure and anchors") {
    ObjectiveSet set = make_huber_two_group(10.0, 5);
    CHECK(set.nodes() == 20);
    CHECK(set.dim() == 1);
    CHECK(*set.lipschitz_L == 1.0);
    CHECK(*set.lipschitz_L_node == 1.0);
    CHECK(*set.grad_bound_G == 1.0);
    REQUIRE(set.anchors.size() == 20);
    for (int i = 0; i < 6; ++i) {
        CHECK(set.anchors[i] >= 0.9 * 10.0);  // theta + uniform on [-theta/10, theta/10]
        CHECK(set.anchors[i] <= 1.1 * 10.0);
    }
    for (int i = 6; i < 20; ++i) {
        CHECK(set.anchors[i] >= -1.1 * 10.0);
        CHECK(set.anchors[i] <= -0.9 * 10.0);
    }
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd a(1);
        a << set.anchors[i];
        // each node's gradient vanishes at its own anchor
        CHECK(set.node(i).gradient(a)(0) == doctest::Approx(0.0));
        // two past the anchor is in the linear region: |r| - 1/2 = 1.5
        Eigen::VectorXd p(1);
        p << set.anchors[i] + 2.0;
        CHECK(set.node(i).value(p) == doctest::Approx(1.5).epsilon(1e-14));
    }
}

TEST_CASE("huber two-group optimum stays near zero for small spread") {
    ObjectiveSet set = make_huber_two_group(0.01, 2);
    REQUIRE(set.optimum.has_value());
    CHECK(set.optimum->kind == OptimumKind::solved);
    CHECK(set.optimum->x(0) >= -0.011);
    CHECK(set.optimum->x(0) <= 0.011);
}

TEST_CASE("huber pair has the closed-form optimum at the origin") {
    ObjectiveSet set = make_huber_pair();
    CHECK(set.nodes() == 2);
    REQUIRE(set.optimum.has_value());
    CHECK(set.optimum->kind == OptimumKind::closed_form);
    CHECK(set.optimum->x(0) == 0.0);
    CHECK(set.optimum->f == doctest::Approx(1.0));  // 1/2 + 1/2
    Eigen::VectorXd z(1), three(1);
    z << 0.0;
    three << 3.0;
    CHECK(set.node(0).gradient(z)(0) == doctest::Approx(-1.0));
    CHECK(set.node(0).gradient(three)(0) == doctest::Approx(1.0));  // linear region
}

TEST_CASE("two-region hard pair: optimum value, gradients, certified bounds") {
    for (double theta : {0.0, 0.5, 1.0}) {
        ObjectiveSet set = make_hard_nonsmooth_pair(theta);
        CHECK(set.nodes() == 2);
        CHECK(set.dim() == 2);
        CHECK(*set.lipschitz_L == doctest::Approx(std::sqrt(2.0)));
        CHECK(*set.lipschitz_L_node == doctest::Approx(std::sqrt(2.0)));
        CHECK(*set.grad_bound_G == 10.0);
        REQUIRE(set.optimum.has_value());
        Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
        CHECK(set.optimum->f == doctest::Approx(theta + 1.0).epsilon(1e-14));
        CHECK(set.total_value(origin) == doctest::Approx(theta + 1.0).epsilon(1e-14));
        Eigen::VectorXd g1 = set.node(0).gradient(origin);
        CHECK(g1(0) == doctest::Approx(-theta));
        CHECK(g1(1) == doctest::Approx(-1.0));

        // sampled gradient norms stay below 6*sqrt(2) on the test box,
        // comfortably inside the certified bound of 10
        Rng rng(17);
        double worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            Eigen::VectorXd x(2);
            x << rng.uniform(-20, 20), rng.uniform(-20, 20);
            for (int i = 0; i < 2; ++i)
                worst = std::max(worst, set.node(i).gradient(x).norm());
        }
        CHECK(worst <= 6.0 * std::sqrt(2.0));
    }
    CHECK_THROWS_AS(make_hard_nonsmooth_pair(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_hard_nonsmooth_pair(1.1), std::invalid_argument);
}

TEST_CASE("two-region hard pair is continuous across the region boundary") {
    const double chi = 6.0;
    for (double theta : {0.0, 0.5, 1.0}) {
        ObjectiveSet set = make_hard_nonsmooth_pair(theta);
        for (int i = 0; i < 2; ++i) {
            double s = (i == 0) ? -1.0 : 1.0;  // additive shift of node i
            for (int t = 0; t < 64; ++t) {
                // boundary point: theta*(x1+s)^2 + (x2+s)^2 = chi^2
                double phi = 2.0 * M_PI * t / 64.0;
                Eigen::VectorXd p(2);
                if (theta > 0.0) {
                    p << -s + chi * std::cos(phi) / std::sqrt(theta),
                        -s + chi * std::sin(phi);
                } else {
                    p << -s + 40.0 * (t / 64.0 - 0.5), -s + (t % 2 ? chi : -chi);
                }
                Eigen::VectorXd center(2);
                center << -s, -s;
                // offsets small enough that smooth variation stays below the
                // tolerance while a glue mismatch between pieces would not
                Eigen::VectorXd in = center + (p - center) * (1.0 - 1e-12);
                Eigen::VectorXd out = center + (p - center) * (1.0 + 1e-12);
                CHECK(std::abs(set.node(i).value(in) - set.node(i).value(out)) <= 1e-8);
                CHECK((set.node(i).gradient(in) - set.node(i).gradient(out)).norm() <= 1e-8);
            }
        }
    }
}

TEST_CASE("quadratic hard pair: node minimizers at +-theta, global at zero") {
    ObjectiveSet set = make_hard_quadratic_pair(5.0);
    CHECK(set.nodes() == 2);
    CHECK(*set.lipschitz_L == 1.0);
    CHECK(*set.lipschitz_L_node == 1.0);
    CHECK_FALSE(set.grad_bound_G.has_value());  // unbounded gradient by design
    REQUIRE(set.optimum.has_value());
    CHECK(set.optimum->kind == OptimumKind::closed_form);
    CHECK(set.optimum->x(0) == 0.0);
    CHECK(set.optimum->f == 25.0);
    REQUIRE(set.anchors.size() == 2);
    CHECK(set.anchors[0] == 5.0);   // node 1 minimizer +theta
    CHECK(set.anchors[1] == -5.0);  // node 2 minimizer -theta
    Eigen::VectorXd z(1);
    z << 0.0;
    CHECK(set.node(0).gradient(z)(0) == doctest::Approx(-5.0));
    ObjectiveSet unit = make_hard_quadratic_pair(1.0);
    CHECK(unit.optimum->f == 1.0);
    CHECK_THROWS_AS(make_hard_quadratic_pair(0.0), std::invalid_argument);
}

TEST_CASE("cubic pair: continuity at the knot and solved optimum") {
    ObjectiveSet set = make_cubic_pair();
    CHECK_FALSE(set.lipschitz_L.has_value());
    CHECK_FALSE(set.lipschitz_L_node.has_value());
    CHECK_FALSE(set.grad_bound_G.has_value());
    Eigen::VectorXd one(1), mone(1);
    one << 1.0;
    mone << -1.0;
    CHECK(set.node(0).value(one) == doctest::Approx(5.5).epsilon(1e-15));   // 4+3/2 = 15/2-2
    CHECK(set.node(1).value(mone) == doctest::Approx(5.5).epsilon(1e-15));  // reflection
    Eigen::VectorXd just_above(1);
    just_above << 1.0 + 1e-9;
    CHECK(set.node(0).value(just_above) == doctest::Approx(5.5).epsilon(1e-7));
    REQUIRE(set.optimum.has_value());
    CHECK(set.optimum->kind == OptimumKind::solved);
    CHECK(std::abs(set.optimum->x(0)) <= 1e-9);
    CHECK(set.optimum->f == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("fair loss: anchor values, derivative bound, closed-form evaluations") {
    const double b0 = 1.5;
    ObjectiveSet set = make_fair_loss(3, b0, {-1.0, 0.0, 2.0});
    CHECK(set.nodes() == 3);
    CHECK(*set.lipschitz_L == 1.0);
    CHECK(*set.lipschitz_L_node == 1.0);
    CHECK(*set.grad_bound_G == b0);
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd a(1), ab(1);
        a << set.anchors[i];
        ab << set.anchors[i] + b0;
        CHECK(set.node(i).value(a) == doctest::Approx(0.0));
        CHECK(set.node(i).gradient(a)(0) == doctest::Approx(0.0));
        CHECK(set.node(i).value(ab) ==
              doctest::Approx(b0 * b0 * (1.0 - std::log(2.0))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(make_fair_loss(2, 0.0, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_fair_loss(2, 1.0, {0.0}), std::invalid_argument);  // anchor count
}

TEST_CASE("reference optimum: closed forms short-circuit, smooth sets solve") {
    Optimum hq = reference_optimum(make_hard_quadratic_pair(5.0), 1e-10);
    CHECK(hq.x(0) == 0.0);
    CHECK(hq.f == 25.0);
    Optimum hp = reference_optimum(make_huber_pair(), 1e-10);
    CHECK(hp.x(0) == 0.0);
    CHECK(hp.f == 1.0);

    // single fair loss: the solve must land on the anchor
    Optimum fo = reference_optimum(make_fair_loss(1, 2.0, {0.7}), 1e-10);
    CHECK(fo.kind == OptimumKind::solved);
    CHECK(fo.x(0) == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(fo.f == doctest::Approx(0.0));

    // no Lipschitz constant, no solve
    ObjectiveSet cubic = make_cubic_pair();
    cubic.optimum.reset();
    CHECK_THROWS_AS(reference_optimum(cubic, 1e-10), std::invalid_argument);
}

TEST_CASE("sampled certificates pass for every family that declares them") {
    check_declared_certificates(make_logistic(20, 11), 1000);
    check_declared_certificates(make_huber_two_group(10.0, 4), 2000);
    check_declared_certificates(make_huber_two_group(0.01, 4), 2100);
    check_declared_certificates(make_huber_pair(), 3000);
    check_declared_certificates(make_hard_nonsmooth_pair(0.0), 4000);
    check_declared_certificates(make_hard_nonsmooth_pair(0.5), 4100);
    check_declared_certificates(make_hard_nonsmooth_pair(1.0), 4200);
    check_declared_certificates(make_hard_quadratic_pair(3.0), 5000);
    check_declared_certificates(make_cubic_pair(), 6000);
    check_declared_certificates(make_fair_loss(4, 0.5, {-3.0, -1.0, 0.5, 4.0}), 7000);
}

TEST_CASE("objective sets describe their generating parameters") {
    CHECK(make_logistic(10, 3).descriptor == "logistic n=10 seed=3");
    CHECK(make_huber_two_group(10.0, 5).descriptor == "huber_two_group theta=10 seed=5");
    CHECK(make_huber_pair().descriptor == "huber_pair");
    CHECK(make_hard_nonsmooth_pair(0.5).descriptor == "hard_nonsmooth theta=0.5");
    CHECK(make_hard_quadratic_pair(2.0).descriptor == "hard_quadratic theta=2");
    CHECK(make_cubic_pair().descriptor == "cubic_pair");
    CHECK(make_fair_loss(2, 1.5, {0.0, 1.0}).descriptor == "fair b0=1.5 anchors=0,1");
}
