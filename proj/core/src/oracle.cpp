// oracle.cpp — inexact-oracle aggregation and inequality checkers.

#include <dgm/oracle.hpp>
#include <dgm/rng.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgm {

namespace {

constexpr double kScaleCap = 1e6;       // function-value scale beyond which
                                        // checks are not judged
constexpr double kProgressTol = 1e-8;   // violation threshold for residuals

void require_shape(const char* who, const ObjectiveSet& obj,
                   const Eigen::VectorXd& y_stack) {
    if (!obj.lipschitz_L_node)
        throw std::invalid_argument(std::string(who) +
                                    ": objective declares no per-node smoothness constant");
    if (y_stack.size() != static_cast<Eigen::Index>(obj.nodes()) * obj.dim())
        throw std::invalid_argument(std::string(who) + ": stacked state has wrong size");
}

}  // namespace

OracleSample inexact_oracle_at(const ObjectiveSet& obj, const Eigen::VectorXd& y_stack) {
    require_shape("inexact_oracle_at", obj, y_stack);
    const int n = obj.nodes(), d = obj.dim();
    OracleSample s;
    s.y_stack = y_stack;
    s.ybar = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) s.ybar += y_stack.segment(i * d, d);
    s.ybar /= n;
    s.g_hat = Eigen::VectorXd::Zero(d);
    double spread = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd yi = y_stack.segment(i * d, d);
        Eigen::VectorXd gi = obj.node(i).gradient(yi);
        s.f_hat += obj.node(i).value(yi) + gi.dot(s.ybar - yi);
        s.g_hat += gi;
        spread += (yi - s.ybar).squaredNorm();
    }
    s.L_k = 2.0 * n * *obj.lipschitz_L_node;
    s.delta_k = *obj.lipschitz_L_node * spread;
    return s;
}

std::pair<double, double> sandwich_slacks(const OracleSample& sample,
                                          const ObjectiveSet& obj,
                                          const Eigen::VectorXd& x) {
    const double fx = obj.total_value(x);
    const Eigen::VectorXd diff = x - sample.ybar;
    const double affine = sample.f_hat + sample.g_hat.dot(diff);
    const double upper_model =
        affine + 0.5 * sample.L_k * diff.squaredNorm() + sample.delta_k;
    return {fx - affine, upper_model - fx};
}

SandwichReport check_sandwich(const OracleSample& sample, const ObjectiveSet& obj,
                              long long probes, double box, std::uint64_t seed,
                              const std::vector<Eigen::VectorXd>& extra_points) {
    if (probes < 0) throw std::invalid_argument("check_sandwich: probes must be >= 0");
    if (!(box > 0.0)) throw std::invalid_argument("check_sandwich: box must be positive");
    const int n = obj.nodes(), d = obj.dim();
    SandwichReport rep;
    rep.lower = rep.upper = -std::numeric_limits<double>::infinity();
    auto consider = [&](const Eigen::VectorXd& x) {
        auto [lo, hi] = sandwich_slacks(sample, obj, x);
        rep.lower = std::max(rep.lower, -lo);
        rep.upper = std::max(rep.upper, -hi);
    };
    consider(sample.ybar);
    for (int i = 0; i < n; ++i)
        consider(Eigen::VectorXd(sample.y_stack.segment(i * d, d)));
    if (obj.optimum) consider(obj.optimum->x);
    for (const Eigen::VectorXd& x : extra_points) consider(x);
    Rng rng(seed);
    Eigen::VectorXd x(d);
    for (long long p = 0; p < probes; ++p) {
        for (int l = 0; l < d; ++l) x(l) = rng.uniform(-box, box);
        consider(x);
    }
    return rep;
}

SandwichReport check_sandwich_trace(const RunTrace& trace, const ObjectiveSet& obj,
                                    long long every, long long probes, double box,
                                    std::uint64_t seed) {
    if (every < 1)
        throw std::invalid_argument("check_sandwich_trace: every must be positive");
    SandwichReport worst;
    worst.lower = worst.upper = -std::numeric_limits<double>::infinity();
    for (const IterRecord& rec : trace.records) {
        if (rec.k % every != 0) continue;
        OracleSample s = inexact_oracle_at(obj, rec.y_stack);
        SandwichReport rep = check_sandwich(s, obj, probes, box,
                                            derive_seed(seed, static_cast<std::uint64_t>(
                                                                  rec.k)),
                                            {rec.xbar});
        worst.lower = std::max(worst.lower, rep.lower);
        worst.upper = std::max(worst.upper, rep.upper);
    }
    return worst;
}

Eigen::VectorXd vbar(const Eigen::VectorXd& xbar, const Eigen::VectorXd& ybar,
                     long long k) {
    if (k < 0) throw std::invalid_argument("vbar: k must be nonnegative");
    if (xbar.size() != ybar.size())
        throw std::invalid_argument("vbar: xbar and ybar sizes differ");
    const double gamma = 2.0 / static_cast<double>(k + 2);
    return (ybar - (1.0 - gamma) * xbar) / gamma;
}

ProgressReport check_progress(const RunTrace& trace, const ObjectiveSet& obj,
                              const Eigen::VectorXd& x_ref) {
    if (trace.method != "dng" && trace.method != "dnc")
        throw std::invalid_argument(
            "check_progress: trace must come from the accelerated runners");
    if (!obj.lipschitz_L_node)
        throw std::invalid_argument(
            "check_progress: objective declares no per-node smoothness constant");
    if (!trace.step_scale)
        throw std::invalid_argument("check_progress: trace carries no step scale");
    Eigen::VectorXd ref = x_ref;
    if (ref.size() == 0) {
        if (!obj.optimum)
            throw std::invalid_argument(
                "check_progress: no x_ref given and objective has no reference optimum");
        ref = obj.optimum->x;
    }
    if (ref.size() != obj.dim())
        throw std::invalid_argument("check_progress: x_ref has wrong dimension");

    const double L = *obj.lipschitz_L_node;
    const double scale = *trace.step_scale;  // c or alpha
    const double n = static_cast<double>(trace.n);
    const bool global = scale <= 1.0 / (2.0 * L);
    const double k_regime = 2.0 * scale * L;  // judged from here when not global
    const double f_ref = obj.total_value(ref);

    ProgressReport rep;
    rep.worst_residual = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r < trace.records.size(); ++r) {
        const IterRecord& prev = trace.records[r - 1];
        const IterRecord& cur = trace.records[r];
        if (cur.k != prev.k + 1) continue;  // needs consecutive iterates
        const double k = static_cast<double>(cur.k);
        // L_{k-1} = n / alpha_{k-1}: n k / c when the step diminishes as
        // c/k, and n / alpha for a constant step.
        const double bigL = trace.method == "dng" ? n * k / scale : n / scale;
        const double delta_prev = L * prev.dis_y * prev.dis_y;
        const double gap_prev = obj.total_value(prev.xbar) - f_ref;
        const double gap_cur = obj.total_value(cur.xbar) - f_ref;
        const Eigen::VectorXd v_prev = vbar(prev.xbar, prev.ybar, prev.k);
        const Eigen::VectorXd v_cur = vbar(cur.xbar, cur.ybar, cur.k);
        const double lhs = (k + 1.0) * (k + 1.0) * gap_cur +
                           2.0 * bigL * (v_cur - ref).squaredNorm();
        const double rhs = (k * k - 1.0) * gap_prev +
                           2.0 * bigL * (v_prev - ref).squaredNorm() +
                           (k + 1.0) * (k + 1.0) * delta_prev;
        if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
        ProgressEntry e;
        e.k = cur.k;
        e.residual = rhs - lhs;
        e.regime_ok = (global || k >= k_regime) &&
                      std::max(std::abs(lhs), std::abs(rhs)) <= kScaleCap;
        if (e.regime_ok) {
            ++rep.judged;
            rep.worst_residual = std::min(rep.worst_residual, e.residual);
            if (e.residual < -kProgressTol) ++rep.violations;
        }
        rep.entries.push_back(std::move(e));
    }
    rep.pass = rep.violations == 0;
    return rep;
}

void write_progress_csv(std::ostream& out, const ProgressReport& report) {
    out << "k,residual,regime_ok\n";
    for (const ProgressEntry& e : report.entries) {
        std::ostringstream r;
        r << std::setprecision(17) << e.residual;
        out << e.k << ',' << r.str() << ',' << (e.regime_ok ? 1 : 0) << "\n";
    }
}

std::string progress_summary(const ProgressReport& report) {
    std::ostringstream o;
    o << "progress: entries=" << report.entries.size() << " judged=" << report.judged
      << " violations=" << report.violations;
    if (report.judged > 0) o << " worst_residual=" << report.worst_residual;
    o << (report.pass ? " pass" : " FAIL");
    return o.str();
}

}  // namespace dgm
