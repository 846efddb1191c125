// solvers.cpp — distributed runners, trace assembly, metrics.

#include <dgm/solvers.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dgm {

namespace {

constexpr double kBlowup = 1e150;

bool blown(const Eigen::MatrixXd& m) { return !m.allFinite() || m.norm() > kBlowup; }

// Per-node gradients, one row per node.
Eigen::MatrixXd grad_rows(const ObjectiveSet& obj, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd g(y.rows(), y.cols());
    for (int i = 0; i < y.rows(); ++i)
        g.row(i) = obj.node(i).gradient(y.row(i).transpose()).transpose();
    return g;
}

IterRecord snapshot(long long k, long long comms, const Eigen::MatrixXd& x,
                    const Eigen::MatrixXd& y) {
    const int n = static_cast<int>(x.rows()), d = static_cast<int>(x.cols());
    IterRecord r;
    r.k = k;
    r.comms_per_node = comms;
    r.x_stack.resize(n * d);
    r.y_stack.resize(n * d);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < d; ++l) {
            r.x_stack(i * d + l) = x(i, l);
            r.y_stack(i * d + l) = y(i, l);
        }
    r.xbar = x.colwise().mean().transpose();
    r.ybar = y.colwise().mean().transpose();
    r.dis_x = (x.rowwise() - r.xbar.transpose()).norm();
    r.dis_y = (y.rowwise() - r.ybar.transpose()).norm();
    return r;
}

void check_run_args(const char* who, const ObjectiveSet& obj, const WeightMatrix& w,
                    const Eigen::MatrixXd& x0, long long k_max, long long record_every) {
    if (obj.nodes() < 1)
        throw std::invalid_argument(std::string(who) + ": objective set is empty");
    if (w.size() != obj.nodes())
        throw std::invalid_argument(std::string(who) +
                                    ": weight matrix size does not match node count");
    if (x0.rows() != obj.nodes() || x0.cols() != obj.dim())
        throw std::invalid_argument(std::string(who) + ": initial state has wrong shape");
    if (k_max < 0)
        throw std::invalid_argument(std::string(who) + ": k_max must be nonnegative");
    if (record_every < 1)
        throw std::invalid_argument(std::string(who) + ": record_every must be positive");
}

// Shared outer loop: advance(k, x, y, comms) performs one iteration in
// place; the driver guards against blowup, records on cadence, and lets
// the observer stop the run.
template <typename Advance>
RunTrace drive(const ObjectiveSet& obj, std::string method, std::string config,
               const Eigen::MatrixXd& x0, long long k_max, long long record_every,
               const Observer& observer, Advance advance) {
    RunTrace tr;
    tr.method = std::move(method);
    tr.config = std::move(config);
    tr.objective = obj.descriptor;
    tr.n = static_cast<int>(x0.rows());
    tr.d = static_cast<int>(x0.cols());
    Eigen::MatrixXd x = x0, y = x0;
    long long comms = 0;
    tr.records.push_back(snapshot(0, 0, x, y));
    for (long long k = 1; k <= k_max; ++k) {
        advance(k, x, y, comms);
        if (blown(x) || blown(y)) {
            tr.diverged = true;
            break;
        }
        if (k % record_every == 0 || k == k_max)
            tr.records.push_back(snapshot(k, comms, x, y));
        if (observer && !observer(k, x)) break;
    }
    if (obj.optimum) apply_reference(tr, obj, obj.optimum->f);
    return tr;
}

std::string dng_config_str(const DngConfig& cfg) {
    std::ostringstream o;
    o << "c=" << cfg.c << " k_max=" << cfg.k_max;
    return o.str();
}

std::string dnc_config_str(const DncConfig& cfg) {
    std::ostringstream o;
    o << "alpha=" << cfg.alpha << " mu=" << cfg.mu << " k_max=" << cfg.k_max;
    return o.str();
}

std::string dsg_config_str(const DsgConfig& cfg) {
    std::ostringstream o;
    o << "c=" << cfg.c << " tau=" << cfg.tau << " k_max=" << cfg.k_max;
    return o.str();
}

}  // namespace

double alpha_dng(double c, long long k) {
    if (!(c > 0.0)) throw std::invalid_argument("alpha_dng: c must be positive");
    if (k < 0) throw std::invalid_argument("alpha_dng: k must be nonnegative");
    return c / static_cast<double>(k + 1);
}

double beta(long long k) {
    if (k < -1) throw std::invalid_argument("beta: k must be at least -1");
    if (k <= 0) return 0.0;  // beta_{-1} := 0 and beta_0 = 0/3
    return static_cast<double>(k) / static_cast<double>(k + 3);
}

namespace {

long long consensus_rounds(const char* who, long long k, double mu, double numer_at_k1) {
    if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be at least 1");
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument(std::string(who) +
                                    ": mu must lie in [0, 1) (a mixing matrix is required)");
    if (mu == 0.0) return k == 1 ? 0 : 1;  // one multiplication averages exactly
    double numer = numer_at_k1 + 2.0 * std::log(static_cast<double>(k));
    return static_cast<long long>(std::ceil(numer / (-std::log(mu))));
}

}  // namespace

long long tau_x(long long k, double mu) { return consensus_rounds("tau_x", k, mu, 0.0); }

long long tau_y(long long k, double mu) {
    return consensus_rounds("tau_y", k, mu, std::log(3.0));
}

RunTrace run_dng_from(const ObjectiveSet& obj, const DngConfig& cfg,
                      const Eigen::MatrixXd& x0_rows) {
    check_run_args("run_dng", obj, cfg.weight, x0_rows, cfg.k_max, cfg.record_every);
    if (!(cfg.c > 0.0)) throw std::invalid_argument("run_dng: c must be positive");
    const Eigen::MatrixXd& w = cfg.weight.matrix();
    auto advance = [&obj, &w, c = cfg.c](long long k, Eigen::MatrixXd& x,
                                         Eigen::MatrixXd& y, long long& comms) {
        Eigen::MatrixXd xn = w * y - alpha_dng(c, k - 1) * grad_rows(obj, y);
        Eigen::MatrixXd yn = xn + beta(k - 1) * (xn - x);
        x = std::move(xn);
        y = std::move(yn);
        comms += 1;
    };
    RunTrace tr = drive(obj, "dng", dng_config_str(cfg), x0_rows, cfg.k_max,
                        cfg.record_every, cfg.observer, advance);
    tr.step_scale = cfg.c;
    if (obj.lipschitz_L_node)
        tr.safe_step = cfg.c <= 1.0 / (2.0 * *obj.lipschitz_L_node);
    return tr;
}

RunTrace run_dng(const ObjectiveSet& obj, const DngConfig& cfg, const Eigen::VectorXd& x0) {
    return run_dng_from(obj, cfg, x0.transpose().replicate(obj.nodes(), 1));
}

RunTrace run_dnc_from(const ObjectiveSet& obj, const DncConfig& cfg,
                      const Eigen::MatrixXd& x0_rows) {
    check_run_args("run_dnc", obj, cfg.weight, x0_rows, cfg.k_max, cfg.record_every);
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("run_dnc: alpha must be positive");
    if (!(cfg.mu >= 0.0 && cfg.mu < 1.0))
        throw std::invalid_argument("run_dnc: mu must lie in [0, 1)");
    if (std::abs(spectral(cfg.weight).mu - cfg.mu) > 1e-10)
        throw std::invalid_argument(
            "run_dnc: cfg.mu is inconsistent with the weight matrix spectrum");
    const Eigen::MatrixXd& w = cfg.weight.matrix();
    auto advance = [&obj, &w, alpha = cfg.alpha, mu = cfg.mu](
                       long long k, Eigen::MatrixXd& x, Eigen::MatrixXd& y,
                       long long& comms) {
        Eigen::MatrixXd t = y - alpha * grad_rows(obj, y);
        const long long tx = tau_x(k, mu), ty = tau_y(k, mu);
        for (long long s = 0; s < tx; ++s) t = w * t;  // repeated sweeps, no powers
        Eigen::MatrixXd u = t + beta(k - 1) * (t - x);
        for (long long s = 0; s < ty; ++s) u = w * u;
        x = std::move(t);
        y = std::move(u);
        comms += tx + ty;
    };
    RunTrace tr = drive(obj, "dnc", dnc_config_str(cfg), x0_rows, cfg.k_max,
                        cfg.record_every, cfg.observer, advance);
    tr.step_scale = cfg.alpha;
    if (obj.lipschitz_L_node)
        tr.safe_step = cfg.alpha <= 1.0 / (2.0 * *obj.lipschitz_L_node);
    return tr;
}

RunTrace run_dnc(const ObjectiveSet& obj, const DncConfig& cfg, const Eigen::VectorXd& x0) {
    return run_dnc_from(obj, cfg, x0.transpose().replicate(obj.nodes(), 1));
}

RunTrace run_dsg_from(const ObjectiveSet& obj, const DsgConfig& cfg,
                      const Eigen::MatrixXd& x0_rows) {
    check_run_args("run_dsg", obj, cfg.weight, x0_rows, cfg.k_max, cfg.record_every);
    if (!(cfg.c > 0.0)) throw std::invalid_argument("run_dsg: c must be positive");
    if (!(cfg.tau >= 0.0)) throw std::invalid_argument("run_dsg: tau must be nonnegative");
    const Eigen::MatrixXd& w = cfg.weight.matrix();
    auto advance = [&obj, &w, c = cfg.c, tau = cfg.tau](
                       long long k, Eigen::MatrixXd& x, Eigen::MatrixXd& y,
                       long long& comms) {
        double alpha = c / std::pow(static_cast<double>(k), tau);  // alpha_{k-1}
        x = w * x - alpha * grad_rows(obj, x);
        y = x;  // single-sequence method: records mirror x
        comms += 1;
    };
    RunTrace tr = drive(obj, "dsg", dsg_config_str(cfg), x0_rows, cfg.k_max,
                        cfg.record_every, cfg.observer, advance);
    tr.step_scale = cfg.c;
    return tr;
}

RunTrace run_dsg(const ObjectiveSet& obj, const DsgConfig& cfg, const Eigen::VectorXd& x0) {
    return run_dsg_from(obj, cfg, x0.transpose().replicate(obj.nodes(), 1));
}

RunTrace run_centralized(const ObjectiveSet& obj,
                         const std::function<double(long long)>& step_at,
                         long long k_max, const Eigen::VectorXd& x0) {
    if (x0.size() != obj.dim())
        throw std::invalid_argument("run_centralized: initial state has wrong dimension");
    if (k_max < 0)
        throw std::invalid_argument("run_centralized: k_max must be nonnegative");
    auto advance = [&obj, &step_at](long long k, Eigen::MatrixXd& x, Eigen::MatrixXd& y,
                                    long long&) {
        Eigen::MatrixXd xn =
            y - step_at(k) * obj.total_gradient(y.row(0).transpose()).transpose();
        Eigen::MatrixXd yn = xn + beta(k - 1) * (xn - x);
        x = std::move(xn);
        y = std::move(yn);
    };
    return drive(obj, "centralized", "schedule", x0.transpose(), k_max, 1, Observer{},
                 advance);
}

RunTrace run_centralized(const ObjectiveSet& obj, double alpha, long long k_max,
                         const Eigen::VectorXd& x0) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("run_centralized: alpha must be positive");
    if (obj.lipschitz_L_node &&
        alpha > (1.0 + 1e-12) / (obj.nodes() * *obj.lipschitz_L_node))
        throw std::invalid_argument(
            "run_centralized: alpha exceeds 1/(n L_node) for the summed objective");
    std::ostringstream cfg;
    cfg << "alpha=" << alpha << " k_max=" << k_max;
    RunTrace tr = run_centralized(
        obj, [alpha](long long) { return alpha; }, k_max, x0);
    tr.config = cfg.str();
    tr.step_scale = alpha;
    return tr;
}

void apply_reference(RunTrace& trace, const ObjectiveSet& obj, double f_star) {
    trace.f_star = f_star;
    const int d = trace.d;
    const int rows = trace.records.empty()
                         ? 0
                         : static_cast<int>(trace.records.front().x_stack.size()) / d;
    std::vector<double> denom(rows, 0.0);
    for (std::size_t r = 0; r < trace.records.size(); ++r) {
        IterRecord& rec = trace.records[r];
        rec.gap_per_node.assign(rows, 0.0);
        bool finite = true;
        double mg = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < rows; ++i) {
            double g = obj.total_value(rec.x_stack.segment(i * d, d)) - f_star;
            rec.gap_per_node[i] = g;
            if (!std::isfinite(g)) finite = false;
            mg = std::max(mg, g);
        }
        if (!finite) {
            // The state is finite but the objective overflowed: treat as
            // divergence and keep only the cleanly evaluable prefix.
            trace.diverged = true;
            trace.records.erase(trace.records.begin() + static_cast<std::ptrdiff_t>(r),
                                trace.records.end());
            break;
        }
        if (r == 0) denom = rec.gap_per_node;
        double rel = 0.0;
        bool rel_ok = true;
        for (int i = 0; i < rows; ++i) {
            if (denom[i] > 0.0)
                rel += rec.gap_per_node[i] / denom[i];
            else
                rel_ok = false;  // started at (or below) the reference value
        }
        rec.avg_rel_err = rel_ok ? rel / rows : std::numeric_limits<double>::quiet_NaN();
        rec.max_gap = mg;
    }
}

MetricsSummary metrics(const RunTrace& trace, const ObjectiveSet& obj) {
    if (trace.method != "centralized" && trace.n != obj.nodes())
        throw std::invalid_argument("metrics: trace and objective node counts differ");
    MetricsSummary ms;
    ms.hits.resize(7);
    if (trace.diverged) return ms;  // divergence reports nothing
    for (const IterRecord& rec : trace.records) {
        if (!std::isfinite(rec.avg_rel_err)) continue;
        for (std::size_t t = 0; t < ms.hits.size(); ++t) {
            double eps = std::pow(10.0, -static_cast<double>(t + 1));
            if (!ms.hits[t] && rec.avg_rel_err <= eps)
                ms.hits[t] = TargetHit{eps, rec.k, rec.comms_per_node,
                                       trace.n * rec.comms_per_node};
        }
    }
    return ms;
}

}  // namespace dgm
