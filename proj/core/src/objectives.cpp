// objectives.cpp — loss families, certificates, reference optima.

#include <dgm/objectives.hpp>
#include <dgm/rng.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dgm {

namespace {

// log(1 + e^u) without overflow for large u.
double log1pexp(double u) {
    return u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// 1 / (1 + e^-u) evaluated from the side that cannot overflow.
double sigmoid(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    double e = std::exp(u);
    return e / (1.0 + e);
}

// Default-precision number formatting for descriptors ("10", "0.5").
std::string num(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

// Huber loss around an anchor: quadratic within distance 1, linear beyond.
NodeObjective make_huber_node(double a) {
    NodeObjective f;
    f.dim = 1;
    f.value = [a](const Eigen::VectorXd& x) {
        double r = x(0) - a;
        return std::abs(r) <= 1.0 ? 0.5 * r * r : std::abs(r) - 0.5;
    };
    f.gradient = [a](const Eigen::VectorXd& x) {
        double r = x(0) - a;
        Eigen::VectorXd g(1);
        g(0) = std::abs(r) <= 1.0 ? r : (r > 0.0 ? 1.0 : -1.0);
        return g;
    };
    f.knot_distance = [a](const Eigen::VectorXd& x) {
        return std::abs(std::abs(x(0) - a) - 1.0);
    };
    return f;
}

// Two-region node on R^2 with additive shift s: quadratic
// q/2 = (theta (x1+s)^2 + (x2+s)^2)/2 while q <= chi^2, then the scaled
// norm chi (sqrt(q) - chi/2); value and gradient agree on the boundary.
NodeObjective make_two_region_node(double theta, double s) {
    constexpr double chi = 6.0;
    NodeObjective f;
    f.dim = 2;
    f.value = [theta, s](const Eigen::VectorXd& x) {
        double u = x(0) + s, v = x(1) + s;
        double q = theta * u * u + v * v;
        return q <= chi * chi ? 0.5 * q : chi * (std::sqrt(q) - 0.5 * chi);
    };
    f.gradient = [theta, s](const Eigen::VectorXd& x) {
        double u = x(0) + s, v = x(1) + s;
        double q = theta * u * u + v * v;
        Eigen::VectorXd g(2);
        g << theta * u, v;
        if (q > chi * chi) g *= chi / std::sqrt(q);
        return g;
    };
    // |sqrt(q) - chi| lower-bounds the distance to the boundary ellipse for
    // theta <= 1 (the gradient of sqrt(q) has norm at most 1 there).
    f.knot_distance = [theta, s](const Eigen::VectorXd& x) {
        double u = x(0) + s, v = x(1) + s;
        return std::abs(std::sqrt(theta * u * u + v * v) - chi);
    };
    return f;
}

NodeObjective make_fair_node(double a, double b0) {
    NodeObjective f;
    f.dim = 1;
    f.value = [a, b0](const Eigen::VectorXd& x) {
        double u = std::abs(x(0) - a) / b0;
        return b0 * b0 * (u - std::log1p(u));
    };
    f.gradient = [a, b0](const Eigen::VectorXd& x) {
        double r = x(0) - a;
        Eigen::VectorXd g(1);
        g(0) = b0 * r / (b0 + std::abs(r));
        return g;
    };
    return f;
}

// Uniform draw in the ball ||delta|| <= 1 by cube rejection (d <= 3 here).
Eigen::VectorXd ball_point(Rng& rng, int d) {
    Eigen::VectorXd delta(d);
    do {
        for (int l = 0; l < d; ++l) delta(l) = rng.uniform(-1.0, 1.0);
    } while (delta.norm() > 1.0);
    return delta;
}

Eigen::VectorXd box_point(Rng& rng, int d, double box) {
    Eigen::VectorXd x(d);
    for (int l = 0; l < d; ++l) x(l) = rng.uniform(-box, box);
    return x;
}

}  // namespace

double ObjectiveSet::total_value(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const auto& f : items) s += f.value(x);
    return s;
}

Eigen::VectorXd ObjectiveSet::total_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
    for (const auto& f : items) g += f.gradient(x);
    return g;
}

NodeObjective make_logistic_node(const Eigen::VectorXd& c) {
    NodeObjective f;
    f.dim = static_cast<int>(c.size());
    f.value = [c](const Eigen::VectorXd& x) { return log1pexp(-c.dot(x)); };
    f.gradient = [c](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(-sigmoid(-c.dot(x)) * c);
    };
    return f;
}

ObjectiveSet make_logistic(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_logistic: need at least one node");
    Rng rng(seed);
    // "true" separating vector, then per node: a_i (2 normals), label noise.
    double t0 = rng.normal(), t1 = rng.normal(), t2 = rng.normal();
    ObjectiveSet set;
    Eigen::Matrix3d outer_sum = Eigen::Matrix3d::Zero();
    double gmax = 0.0, lnode = 0.0;
    for (int i = 0; i < n; ++i) {
        double a1 = rng.normal(), a2 = rng.normal();
        double eps = rng.normal(0.0, std::sqrt(3.0));
        double b = (t0 * a1 + t1 * a2 + t2 + eps) >= 0.0 ? 1.0 : -1.0;
        Eigen::Vector3d c(b * a1, b * a2, b);
        outer_sum += c * c.transpose();
        gmax = std::max(gmax, c.norm());
        // hessian of log(1+exp(-c'x)) is sigmoid'(-c'x) c c' <= (1/4) c c'
        lnode = std::max(lnode, c.squaredNorm() / 4.0);
        set.items.push_back(make_logistic_node(c));
    }
    set.lipschitz_L =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(outer_sum).eigenvalues().maxCoeff() /
        (4.0 * n);
    set.lipschitz_L_node = lnode;
    set.grad_bound_G = gmax;
    set.test_box = 10.0;
    std::ostringstream d;
    d << "logistic n=" << n << " seed=" << seed;
    set.descriptor = d.str();
    set.optimum = reference_optimum(set);
    return set;
}

ObjectiveSet make_huber_two_group(double theta, std::uint64_t seed) {
    if (!(theta > 0.0))
        throw std::invalid_argument("make_huber_two_group: theta must be positive");
    Rng rng(seed);
    ObjectiveSet set;
    for (int i = 0; i < 20; ++i) {
        double nu = rng.uniform(-0.1 * theta, 0.1 * theta);
        double a = (i < 6 ? theta : -theta) + nu;
        set.anchors.push_back(a);
        set.items.push_back(make_huber_node(a));
    }
    set.lipschitz_L = 1.0;
    set.lipschitz_L_node = 1.0;  // each Huber node has |f''| <= 1 everywhere
    set.grad_bound_G = 1.0;
    std::ostringstream d;
    d << "huber_two_group theta=" << num(theta) << " seed=" << seed;
    set.descriptor = d.str();
    set.optimum = reference_optimum(set);
    return set;
}

ObjectiveSet make_huber_pair() {
    ObjectiveSet set;
    set.anchors = {1.0, -1.0};
    set.items = {make_huber_node(1.0), make_huber_node(-1.0)};
    set.lipschitz_L = 1.0;
    set.lipschitz_L_node = 1.0;
    set.grad_bound_G = 1.0;
    set.descriptor = "huber_pair";
    set.optimum = Optimum{Eigen::VectorXd::Zero(1), 1.0, OptimumKind::closed_form};
    return set;
}

ObjectiveSet make_hard_nonsmooth_pair(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument(
            "make_hard_nonsmooth_pair: theta must lie in [0, 1] "
            "(constants are certified only there)");
    ObjectiveSet set;
    set.items = {make_two_region_node(theta, -1.0), make_two_region_node(theta, 1.0)};
    set.lipschitz_L = std::sqrt(2.0);
    set.lipschitz_L_node = std::sqrt(2.0);  // the two nodes are mirror images
    set.grad_bound_G = 10.0;
    set.descriptor = "hard_nonsmooth theta=" + num(theta);
    set.optimum = Optimum{Eigen::VectorXd::Zero(2), theta + 1.0, OptimumKind::closed_form};
    return set;
}

ObjectiveSet make_hard_quadratic_pair(double theta) {
    if (!(theta > 0.0))
        throw std::invalid_argument("make_hard_quadratic_pair: theta must be positive");
    ObjectiveSet set;
    for (int i = 1; i <= 2; ++i) {
        double s = (i % 2 == 1) ? -1.0 : 1.0;  // (-1)^i
        NodeObjective f;
        f.dim = 1;
        f.value = [s, theta](const Eigen::VectorXd& x) {
            double r = x(0) + s * theta;
            return 0.5 * r * r;
        };
        f.gradient = [s, theta](const Eigen::VectorXd& x) {
            Eigen::VectorXd g(1);
            g(0) = x(0) + s * theta;
            return g;
        };
        set.items.push_back(std::move(f));
        set.anchors.push_back(-s * theta);  // node minimizer
    }
    set.lipschitz_L = 1.0;  // G intentionally absent: the gradient is unbounded
    set.lipschitz_L_node = 1.0;
    set.descriptor = "hard_quadratic theta=" + num(theta);
    set.optimum = Optimum{Eigen::VectorXd::Zero(1), theta * theta, OptimumKind::closed_form};
    return set;
}

ObjectiveSet make_cubic_pair() {
    // f1 is cubic above the knot at +1 and quadratic below (C^1 there);
    // f2 is its reflection with the knot at -1.
    auto v1 = [](double t) {
        return t > 1.0 ? 4.0 * t * t * t + 1.5 * t * t : 7.5 * t * t - 2.0;
    };
    auto g1 = [](double t) { return t > 1.0 ? 12.0 * t * t + 3.0 * t : 15.0 * t; };

    ObjectiveSet set;
    NodeObjective f1;
    f1.dim = 1;
    f1.value = [v1](const Eigen::VectorXd& x) { return v1(x(0)); };
    f1.gradient = [g1](const Eigen::VectorXd& x) {
        Eigen::VectorXd g(1);
        g(0) = g1(x(0));
        return g;
    };
    f1.knot_distance = [](const Eigen::VectorXd& x) { return std::abs(x(0) - 1.0); };
    NodeObjective f2;
    f2.dim = 1;
    f2.value = [v1](const Eigen::VectorXd& x) { return v1(-x(0)); };
    f2.gradient = [g1](const Eigen::VectorXd& x) {
        Eigen::VectorXd g(1);
        g(0) = -g1(-x(0));
        return g;
    };
    f2.knot_distance = [](const Eigen::VectorXd& x) { return std::abs(x(0) + 1.0); };
    set.items = {std::move(f1), std::move(f2)};
    set.descriptor = "cubic_pair";

    // No Lipschitz constant, so solve by bisecting the total derivative on
    // [-2, 2] (it is -84 at -2 and +84 at +2).
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g1(mid) - g1(-mid) <= 0.0 ? lo : hi) = mid;
    }
    Eigen::VectorXd xs(1);
    xs(0) = 0.5 * (lo + hi);
    set.optimum = Optimum{xs, set.total_value(xs), OptimumKind::solved};
    return set;
}

ObjectiveSet make_fair_loss(int n, double b0, std::vector<double> anchors) {
    if (n < 1) throw std::invalid_argument("make_fair_loss: need at least one node");
    if (!(b0 > 0.0)) throw std::invalid_argument("make_fair_loss: b0 must be positive");
    if (static_cast<int>(anchors.size()) != n)
        throw std::invalid_argument("make_fair_loss: anchor count must equal node count");
    ObjectiveSet set;
    for (double a : anchors) set.items.push_back(make_fair_node(a, b0));
    set.anchors = std::move(anchors);
    set.lipschitz_L = 1.0;
    set.lipschitz_L_node = 1.0;  // d^2/dr^2 [b0^2 (|r|/b0 - log(1+|r|/b0))] <= 1
    set.grad_bound_G = b0;
    std::ostringstream d;
    d << "fair b0=" << num(b0) << " anchors=";
    for (std::size_t i = 0; i < set.anchors.size(); ++i)
        d << (i ? "," : "") << num(set.anchors[i]);
    set.descriptor = d.str();
    return set;
}

Optimum reference_optimum(const ObjectiveSet& obj, double tol, long long cap) {
    if (obj.optimum && obj.optimum->kind == OptimumKind::closed_form) return *obj.optimum;
    if (!obj.lipschitz_L && !obj.lipschitz_L_node)
        throw std::invalid_argument(
            "reference_optimum: objective set declares no Lipschitz constant");
    const int d = obj.dim();
    // The sum of n functions that are each L_node-smooth is (n * L_node)-smooth,
    // so this step is provably stable; fall back to the averaged constant if no
    // per-node constant is declared.
    const double smooth =
        obj.lipschitz_L_node ? *obj.lipschitz_L_node : *obj.lipschitz_L;
    const double step = 1.0 / (obj.nodes() * smooth);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd y = x;
    for (long long k = 1; k <= cap; ++k) {
        Eigen::VectorXd xn = y - step * obj.total_gradient(y);
        y = xn + (static_cast<double>(k - 1) / (k + 2)) * (xn - x);
        x = xn;
        if (obj.total_gradient(x).norm() <= tol) break;
    }
    // Reaching the cap returns the achieved point: for objectives whose
    // infimum is not attained (separable logistic data) the value still
    // stabilizes even though the iterates drift, which is what reference
    // error metrics need.
    return Optimum{x, obj.total_value(x), OptimumKind::solved};
}

CertReport check_gradient_fd(const ObjectiveSet& obj, int points, double box,
                             std::uint64_t seed) {
    constexpr double h = 1e-6;
    Rng rng(seed);
    CertReport rep;
    for (int i = 0; i < obj.nodes(); ++i) {
        const NodeObjective& f = obj.node(i);
        for (int p = 0; p < points; ++p) {
            Eigen::VectorXd x, g;
            // avoid piece boundaries (FD would straddle them) and stationary
            // points (relative error is meaningless there)
            for (int tries = 0; tries < 1000; ++tries) {
                x = box_point(rng, f.dim, box);
                if (f.knot_distance && f.knot_distance(x) < 1e-4) continue;
                g = f.gradient(x);
                if (g.norm() >= 1e-6) break;
            }
            Eigen::VectorXd fd(f.dim);
            for (int l = 0; l < f.dim; ++l) {
                Eigen::VectorXd xp = x, xm = x;
                xp(l) += h;
                xm(l) -= h;
                fd(l) = (f.value(xp) - f.value(xm)) / (2.0 * h);
            }
            rep.worst = std::max(rep.worst, (fd - g).norm() / g.norm());
            ++rep.samples;
        }
    }
    rep.pass = rep.worst <= 1e-5;
    return rep;
}

CertReport check_lipschitz(const ObjectiveSet& obj, int pairs, double box,
                           std::uint64_t seed) {
    if (!obj.lipschitz_L_node)
        throw std::invalid_argument(
            "check_lipschitz: set declares no per-node Lipschitz constant");
    const double L = *obj.lipschitz_L_node;
    Rng rng(seed);
    CertReport rep;
    rep.pass = true;
    for (int p = 0; p < pairs; ++p) {
        Eigen::VectorXd x = box_point(rng, obj.dim(), box);
        Eigen::VectorXd y = box_point(rng, obj.dim(), box);
        double rhs = L * (x - y).norm();
        if (rhs == 0.0) continue;
        for (int i = 0; i < obj.nodes(); ++i) {
            const NodeObjective& f = obj.node(i);
            double lhs = (f.gradient(x) - f.gradient(y)).norm();
            rep.worst = std::max(rep.worst, lhs / rhs);
            // equality is attained on quadratic pieces; allow roundoff
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) rep.pass = false;
        }
        ++rep.samples;
    }
    return rep;
}

CertReport check_grad_bound(const ObjectiveSet& obj, int points, double box,
                            std::uint64_t seed) {
    if (!obj.grad_bound_G)
        throw std::invalid_argument("check_grad_bound: set declares no gradient bound");
    const double G = *obj.grad_bound_G;
    Rng rng(seed);
    CertReport rep;
    rep.pass = true;
    for (int i = 0; i < obj.nodes(); ++i) {
        const NodeObjective& f = obj.node(i);
        for (int p = 0; p < points; ++p) {
            double gn = f.gradient(box_point(rng, f.dim, box)).norm();
            rep.worst = std::max(rep.worst, gn / G);
            if (gn > G * (1.0 + 1e-12)) rep.pass = false;
            ++rep.samples;
        }
    }
    return rep;
}

CertReport check_convexity(const ObjectiveSet& obj, int segments, double box,
                           std::uint64_t seed) {
    Rng rng(seed);
    CertReport rep;
    rep.pass = true;
    for (int i = 0; i < obj.nodes(); ++i) {
        const NodeObjective& f = obj.node(i);
        for (int p = 0; p < segments; ++p) {
            Eigen::VectorXd x = box_point(rng, f.dim, box);
            Eigen::VectorXd y = box_point(rng, f.dim, box);
            double viol = f.value(0.5 * (x + y)) - 0.5 * (f.value(x) + f.value(y));
            rep.worst = std::max(rep.worst, viol);
            if (viol > 1e-10) rep.pass = false;
            ++rep.samples;
        }
    }
    return rep;
}

CertReport check_optimum(const ObjectiveSet& obj, int points, std::uint64_t seed) {
    if (!obj.optimum)
        throw std::invalid_argument("check_optimum: set declares no optimum");
    Rng rng(seed);
    CertReport rep;
    rep.pass = true;
    const double fstar = obj.total_value(obj.optimum->x);
    for (int p = 0; p < points; ++p) {
        Eigen::VectorXd delta = ball_point(rng, obj.dim());
        double drop = fstar - obj.total_value(obj.optimum->x + delta);
        rep.worst = std::max(rep.worst, drop);
        if (drop > 1e-9) rep.pass = false;  // slack covers solved optima
        ++rep.samples;
    }
    return rep;
}

}  // namespace dgm
