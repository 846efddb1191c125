// experiments.cpp — experiment construction, execution, and artifact
// emission for the command-line laboratory.
//
// The experiments mirror the library's verification suite so a CSV a user
// plots and a property the suite checks come from the same constructions:
//
//   fig1_left    seeded logistic instance on a random geometric graph;
//                the diminishing-step accelerated method (safeguarded
//                weights, c = 1), the constant-step method with consensus
//                rounds at alpha in {1/(2L), 1/L}, and the square-root-
//                decay baseline, all traced against communication counts
//   fig1_right   robust-regression instance (20 Huber losses) for scale
//                theta in {0.01, 10, 1000}; accelerated methods only
//   hard_envelope   per-horizon baseline runs on the two-node two-region
//                pair stay above the step-size-free lower envelope
//   hard_unbounded  scheduled quadratic pairs force gaps / disagreement
//                above declared floors (unbounded-gradient pathology)
//   diverge_indefinite  bounded gradients but an indefinite weight
//                matrix: disagreement grows without bound
//   diverge_cubic   cubic-growth pair: the diminishing-step method blows
//                past the state guard; the constant-step method stalls
//   verify       the twelve-check verification suite, table to checks.txt
//   custom       seeded logistic instance with a config-selected roster

#include "experiments.hpp"

#include <dgm/bounds.hpp>
#include <dgm/checks.hpp>
#include <dgm/csv.hpp>
#include <dgm/net.hpp>
#include <dgm/objectives.hpp>
#include <dgm/oracle.hpp>
#include <dgm/solvers.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgmlab {

using namespace dgm;

namespace {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream o;
    o << std::setprecision(17) << v;
    return o.str();
}

std::string fmt6(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

std::filesystem::path prepare_dir(const std::string& out) {
    const std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::invalid_argument("config: cannot create output directory '" + out +
                                    "': " + ec.message());
    return dir;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("config: cannot open output file '" +
                                    path.string() + "'");
    return f;
}

// Write a trace, then read it back through the schema validator; emitting
// a malformed file is a harness bug, not a user error.
void emit_trace(std::ostream& log, const std::filesystem::path& dir,
                const std::string& stem, const RunTrace& trace) {
    const std::filesystem::path path = dir / (stem + ".csv");
    {
        std::ofstream f = open_out(path);
        write_trace_csv(f, trace);
    }
    std::ifstream back(path, std::ios::binary);
    long long rows = 0;
    try {
        rows = validate_trace_csv(back);
    } catch (const std::exception& e) {
        throw VerificationError("schema check failed for '" + path.string() +
                                "': " + e.what());
    }
    log << "wrote " << path.string() << " (" << rows << " rows)\n";
}

void emit_bounds(std::ostream& log, const std::filesystem::path& dir,
                 const std::string& stem, const BoundReport& report) {
    const std::filesystem::path path = dir / (stem + ".csv");
    {
        std::ofstream f = open_out(path);
        write_bounds_csv(f, report);
    }
    std::ifstream back(path, std::ios::binary);
    long long rows = 0;
    try {
        rows = validate_bounds_csv(back);
    } catch (const std::exception& e) {
        throw VerificationError("schema check failed for '" + path.string() +
                                "': " + e.what());
    }
    log << "wrote " << path.string() << " (" << rows << " rows)\n";
}

void emit_network(std::ostream& log, const std::filesystem::path& dir, const Graph& g,
                  const WeightMatrix& w) {
    const std::filesystem::path path = dir / "network.txt";
    {
        std::ofstream f = open_out(path);
        write_network(f, g, w);
    }
    std::ifstream back(path, std::ios::binary);
    try {
        read_network(back);
    } catch (const std::exception& e) {
        throw VerificationError("schema check failed for '" + path.string() +
                                "': " + e.what());
    }
    log << "wrote " << path.string() << "\n";
}

void emit_text(std::ostream& log, const std::filesystem::path& dir,
               const std::string& name, const std::string& body) {
    const std::filesystem::path path = dir / name;
    std::ofstream f = open_out(path);
    f << body;
    log << "wrote " << path.string() << "\n";
}

// Successor of v on the 1, 2, 5, 10, 20, 50, ... sampling grid.
long long next_grid(long long v) {
    long long d = 1;
    while (d * 10 <= v) d *= 10;
    if (v < 2 * d) return 2 * d;
    if (v < 5 * d) return 5 * d;
    return 10 * d;
}

// First recorded iterate reaching each accuracy target, with the
// communication spent there.  Matches the metrics() semantics: a diverged
// trace reports every target unreached.
std::vector<std::optional<TargetHit>> first_hits(const RunTrace& trace,
                                                 const std::vector<double>& targets) {
    std::vector<std::optional<TargetHit>> out(targets.size());
    if (trace.diverged) return out;
    std::size_t next = 0;
    for (const IterRecord& rec : trace.records) {
        if (next == out.size()) break;
        if (!std::isfinite(rec.avg_rel_err)) continue;
        while (next < out.size() && rec.avg_rel_err <= targets[next]) {
            out[next] = TargetHit{targets[next], rec.k, rec.comms_per_node,
                                  trace.n * rec.comms_per_node};
            ++next;
        }
    }
    return out;
}

// One method's run plus whatever certified bound curves apply to it.
struct RosterEntry {
    std::string label;
    std::string params;  // human-readable step parameters for the summary
    RunTrace trace;
    std::optional<BoundReport> bounds;
};

// Envelope curves for the diminishing-step method.  The consensus column
// holds for any c > 0; the gap column uses the safe-regime form when
// c <= 1/(2 L_node), the large-step diagnostic where it is defined
// (k > 2 c L_node), and nan in the initial window it cannot cover.
std::optional<BoundReport> dng_bound_curves(const ObjectiveSet& obj,
                                            const RunTrace& trace, double c,
                                            std::optional<double> eta, double mu_run) {
    if (!eta || !obj.grad_bound_G || !obj.optimum || !obj.lipschitz_L_node)
        return std::nullopt;
    const double G = *obj.grad_bound_G;
    const double L = *obj.lipschitz_L_node;
    const double R = obj.optimum->x.norm();
    const double C = c_cons(mu_run, *eta);
    BoundReport rep;
    rep.method = "dng";
    rep.c_cons = C;
    rep.big_b_value = mu_run > 0.0 ? big_b(std::sqrt(mu_run)) : 0.0;
    for (const IterRecord& rec : trace.records) {
        if (rec.k < 1) continue;
        BoundEntry e;
        e.k = rec.k;
        e.consensus = dng_consensus_bound(rec.k, trace.n, c, G, C).first;
        if (c <= 1.0 / (2.0 * L))
            e.gap = dng_gap_bound(rec.k, c, L, G, R, C);
        else if (static_cast<double>(rec.k) > 2.0 * c * L)
            e.gap = dng_gap_bound_large_step(rec.k, c, L, G, R, C);
        else
            e.gap = std::numeric_limits<double>::quiet_NaN();
        e.comms = static_cast<double>(rec.k);
        rep.entries.push_back(e);
    }
    if (rep.entries.empty()) return std::nullopt;
    return rep;
}

// Envelope curves for the constant-step method; only the safe regime
// alpha <= 1/(2 L_node) carries certified curves.
std::optional<BoundReport> dnc_bound_curves(const ObjectiveSet& obj,
                                            const RunTrace& trace, double alpha,
                                            double mu) {
    if (!obj.grad_bound_G || !obj.optimum || !obj.lipschitz_L_node) return std::nullopt;
    const double L = *obj.lipschitz_L_node;
    if (alpha > 1.0 / (2.0 * L)) return std::nullopt;
    std::vector<long long> ks;
    for (const IterRecord& rec : trace.records)
        if (rec.k >= 1) ks.push_back(rec.k);
    if (ks.empty()) return std::nullopt;
    return dnc_bound_report(ks, trace.n, alpha, L, *obj.grad_bound_G,
                            obj.optimum->x.norm(), mu);
}

RosterEntry run_dng_entry(const ObjectiveSet& obj, const WeightMatrix& w, double c,
                          std::optional<double> eta, long long k_max,
                          std::uint64_t seed, const std::string& label,
                          long long record_every = 1) {
    const WeightMatrix run_w = eta ? safeguard_weights(w, *eta) : w;
    DngConfig dcfg;
    dcfg.c = c;
    dcfg.k_max = k_max;
    dcfg.weight = run_w;
    dcfg.record_every = record_every;
    RosterEntry entry;
    entry.trace = run_dng(obj, dcfg, Eigen::VectorXd::Zero(obj.dim()));
    entry.trace.seed = seed;
    entry.label = label;
    entry.params = "c=" + fmt6(c) + (eta ? " eta=" + fmt6(*eta) : "");
    entry.bounds = dng_bound_curves(obj, entry.trace, c, eta, spectral(run_w).mu);
    return entry;
}

RosterEntry run_dnc_entry(const ObjectiveSet& obj, const WeightMatrix& w, double alpha,
                          double mu, long long k_max, std::uint64_t seed,
                          const std::string& label) {
    DncConfig ccfg;
    ccfg.alpha = alpha;
    ccfg.k_max = k_max;
    ccfg.weight = w;
    ccfg.mu = mu;
    RosterEntry entry;
    entry.trace = run_dnc(obj, ccfg, Eigen::VectorXd::Zero(obj.dim()));
    entry.trace.seed = seed;
    entry.label = label;
    entry.params = "alpha=" + fmt6(alpha);
    entry.bounds = dnc_bound_curves(obj, entry.trace, alpha, mu);
    return entry;
}

RosterEntry run_dsg_entry(const ObjectiveSet& obj, const WeightMatrix& w, double c,
                          double tau, long long k_max, std::uint64_t seed,
                          const std::string& label) {
    DsgConfig scfg;
    scfg.c = c;
    scfg.tau = tau;
    scfg.k_max = k_max;
    scfg.weight = w;
    RosterEntry entry;
    entry.trace = run_dsg(obj, scfg, Eigen::VectorXd::Zero(obj.dim()));
    entry.trace.seed = seed;
    entry.label = label;
    entry.params = "c=" + fmt6(c) + " tau=" + fmt6(tau);
    entry.bounds = std::nullopt;  // the baseline carries no certified curve here
    return entry;
}

void append_method_summary(std::ostringstream& s, const RosterEntry& entry,
                           const std::vector<double>& targets) {
    const RunTrace& tr = entry.trace;
    s << "method=" << tr.method << " label=" << entry.label << " params=\""
      << entry.params << "\" k_last=" << tr.records.back().k
      << " diverged=" << (tr.diverged ? 1 : 0);
    if (tr.safe_step) s << " safe_step=" << (*tr.safe_step ? 1 : 0);
    s << "\n";
    const auto hits = first_hits(tr, targets);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (hits[i]) {
            s << "hit label=" << entry.label << " target=" << fmt6(targets[i])
              << " k=" << hits[i]->k << " comms_per_node=" << hits[i]->comms_per_node
              << " total_comms=" << hits[i]->total_comms << "\n";
        } else {
            s << "miss label=" << entry.label << " target=" << fmt6(targets[i])
              << "\n";
        }
    }
}

// Shared emission for the logistic-instance experiments (custom and the
// method-comparison figure): network, one trace per roster entry, bound
// curves where certified, and the first-hit summary.
void emit_roster(std::ostream& log, const std::filesystem::path& dir,
                 const ExperimentConfig& cfg, const ObjectiveSet& obj, const Graph& g,
                 const WeightMatrix& w, double mu, int n, double density,
                 const std::vector<RosterEntry>& roster) {
    emit_network(log, dir, g, w);
    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";
    s << "n=" << n << "\n";
    s << "density=" << fmt6(density) << "\n";
    s << "mu=" << fmt17(mu) << "\n";
    if (obj.optimum) s << "f_star=" << fmt17(obj.optimum->f) << "\n";
    for (const RosterEntry& entry : roster) {
        emit_trace(log, dir, entry.label, entry.trace);
        if (entry.bounds) emit_bounds(log, dir, "bounds_" + entry.label, *entry.bounds);
        append_method_summary(s, entry, cfg.targets);
    }
    emit_text(log, dir, "summary.txt", s.str());
}

// Graph and Metropolis weights for a logistic experiment; node counts of
// one fall back to the trivial single-node network.  The graph seed is
// offset from the data seed so the two draws are distinct streams.
std::pair<Graph, WeightMatrix> make_network(int n, double density,
                                            std::uint64_t seed) {
    if (n == 1) {
        Graph g = make_graph(1, {});
        return {g, custom_weights(1, Eigen::MatrixXd::Ones(1, 1))};
    }
    Graph g = generate_geometric(n, density, 7000 + seed);
    return {g, metropolis_weights(g)};
}

int run_custom(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    const ObjectiveSet obj = make_logistic(cfg.n, cfg.seed);
    const auto [g, w] = make_network(cfg.n, cfg.density, cfg.seed);
    const double mu = spectral(w).mu;

    std::vector<RosterEntry> roster;
    for (const MethodSpec& m : cfg.methods) {
        if (m.name == "dng") {
            roster.push_back(
                run_dng_entry(obj, w, *m.c, m.eta, cfg.k_max, cfg.seed, "dng"));
        } else if (m.name == "dnc") {
            double alpha = 0.0;
            if (m.alpha) {
                alpha = *m.alpha;
            } else {
                if (!obj.lipschitz_L)
                    throw std::invalid_argument(
                        "config: alpha_mode needs an objective with a smoothness "
                        "constant");
                alpha = (*m.alpha_mode == "half_over_L" ? 0.5 : 1.0) /
                        *obj.lipschitz_L;
            }
            roster.push_back(
                run_dnc_entry(obj, w, alpha, mu, cfg.k_max, cfg.seed, "dnc"));
        } else {
            roster.push_back(run_dsg_entry(obj, w, *m.c, m.tau.value_or(0.0),
                                           cfg.k_max, cfg.seed, "dsg"));
        }
    }
    emit_roster(log, dir, cfg, obj, g, w, mu, cfg.n, cfg.density, roster);
    return 0;
}

int run_fig1_left(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    // Fast mode runs the 30-node instance (0.12 is the sparsest density
    // that reliably yields a connected geometric graph at that size);
    // long mode runs the full 100-node instance at density 0.10.
    const int n = cfg.has_n ? cfg.n : (cfg.long_mode ? 100 : 30);
    const double density = cfg.has_density ? cfg.density : (cfg.long_mode ? 0.10 : 0.12);
    const long long k_hi = cfg.has_k_max ? cfg.k_max : 10000;
    // The consensus-rounds method reaches the finest target within a few
    // hundred outer iterations, and its per-iteration sweep count grows
    // as log k / (1 - mu); a longer horizon only burns communication.
    const long long k_dnc = std::min<long long>(500, k_hi);

    const ObjectiveSet obj = make_logistic(n, cfg.seed);
    const auto [g, w] = make_network(n, density, cfg.seed);
    const double mu = spectral(w).mu;
    const double L_mean = *obj.lipschitz_L;

    std::vector<RosterEntry> roster;
    roster.push_back(run_dng_entry(obj, w, 1.0, 0.1, k_hi, cfg.seed, "dng"));
    roster.push_back(run_dnc_entry(obj, w, 0.5 / L_mean, mu, k_dnc, cfg.seed,
                                   "dnc_half_L"));
    roster.push_back(run_dnc_entry(obj, w, 1.0 / L_mean, mu, k_dnc, cfg.seed,
                                   "dnc_one_L"));
    roster.push_back(run_dsg_entry(obj, w, 1.0, 0.5, k_hi, cfg.seed, "dsg"));
    emit_roster(log, dir, cfg, obj, g, w, mu, n, density, roster);
    return 0;
}

int run_fig1_right(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    const int n = 20;
    const double density = 0.32;
    const auto [g, w] = make_network(n, density, cfg.seed);
    const double mu = spectral(w).mu;

    emit_network(log, dir, g, w);
    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";
    s << "n=" << n << "\n";
    s << "density=" << fmt6(density) << "\n";
    s << "mu=" << fmt17(mu) << "\n";

    const struct {
        double theta;
        const char* label;
    } thetas[] = {{0.01, "0.01"}, {10.0, "10"}, {1000.0, "1000"}};
    for (const auto& t : thetas) {
        const ObjectiveSet obj = make_huber_two_group(t.theta, cfg.seed);
        s << "theta=" << t.label << " f_star="
          << (obj.optimum ? fmt17(obj.optimum->f) : "nan") << "\n";
        // The diminishing-step method spends one round per iteration, so
        // matching the consensus-rounds method's communication budget
        // (~6e4 rounds at the largest scale) needs a long horizon; a
        // 10-iterate recording grid keeps the trace compact.
        RosterEntry dng_entry =
            run_dng_entry(obj, w, 1.0, 0.1, 60000, cfg.seed,
                          std::string("dng_theta_") + t.label, 10);
        RosterEntry dnc_entry =
            run_dnc_entry(obj, w, 1.0 / *obj.lipschitz_L, mu, 400, cfg.seed,
                          std::string("dnc_theta_") + t.label);
        for (const RosterEntry* entry : {&dng_entry, &dnc_entry}) {
            emit_trace(log, dir, entry->label, entry->trace);
            if (entry->bounds)
                emit_bounds(log, dir, "bounds_" + entry->label, *entry->bounds);
            append_method_summary(s, *entry, cfg.targets);
        }
    }
    emit_text(log, dir, "summary.txt", s.str());
    return 0;
}

int run_hard_envelope(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    const long long horizon = cfg.has_k_max ? cfg.k_max : 1000;
    const double c0 = 1.0 / (2.0 * std::sqrt(2.0));
    const double chi_sq = 36.0;  // invariant-region radius squared
    Eigen::MatrixXd wm(2, 2);
    wm << 0.875, 0.125, 0.125, 0.875;
    const WeightMatrix w = custom_weights(2, wm);
    Eigen::MatrixXd x0(2, 2);
    x0 << 1, 0, 1, 0;

    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";
    s << "horizon=" << horizon << "\n";

    const struct {
        double tau;
        const char* show;
        const char* file;
    } taus[] = {{0.0, "0", "0"},
                {1.0 / 3.0, "1/3", "1over3"},
                {0.5, "1/2", "1over2"},
                {0.75, "3/4", "3over4"},
                {1.0, "1", "1"}};
    for (const auto& t : taus) {
        // One fresh run per horizon K: the worst-case instance magnitude
        // theta_K(tau) is horizon-specific, so the envelope comparison is
        // a family of runs, not one trajectory.
        double min_margin = std::numeric_limits<double>::infinity();
        long long min_k = 0;
        bool region_ok_all = true;
        long long next_print = 1;
        for (long long big_k = 1; big_k <= horizon; ++big_k) {
            const double theta = theta_k(big_k, t.tau);
            const ObjectiveSet obj = make_hard_nonsmooth_pair(theta);
            bool region_ok = true;
            DsgConfig scfg;
            scfg.c = c0;
            scfg.tau = t.tau;
            scfg.k_max = big_k;
            scfg.weight = w;
            scfg.record_every = big_k;
            scfg.observer = [&](long long, const Eigen::MatrixXd& x) {
                for (int i = 0; i < 2; ++i) {
                    const double sgn = i == 0 ? -1.0 : 1.0;
                    const double a = x(i, 0) + sgn, b = x(i, 1) + sgn;
                    if (theta * a * a + b * b > chi_sq + 1e-9) {
                        region_ok = false;
                        return false;
                    }
                }
                return true;
            };
            const RunTrace tr = run_dsg_from(obj, scfg, x0);
            region_ok_all = region_ok_all && region_ok;
            if (!region_ok || tr.diverged || tr.records.back().k != big_k) continue;
            const double gap = tr.records.back().max_gap;
            const double env = dsg_envelope(big_k, t.tau, c0, c0);
            if (gap - env < min_margin) {
                min_margin = gap - env;
                min_k = big_k;
            }
            if (big_k == next_print || big_k == horizon) {
                s << "demo=envelope tau=" << t.show << " K=" << big_k
                  << " gap=" << fmt17(gap) << " envelope=" << fmt17(env)
                  << " margin=" << fmt17(gap - env) << "\n";
                if (big_k == next_print) next_print = next_grid(next_print);
            }
        }
        s << "demo=envelope tau=" << t.show << " min_margin=" << fmt17(min_margin)
          << " at_K=" << min_k << " region_ok=" << (region_ok_all ? 1 : 0) << "\n";

        // Emit the full trajectory of the horizon-length instance.
        const double theta = theta_k(horizon, t.tau);
        const ObjectiveSet obj = make_hard_nonsmooth_pair(theta);
        DsgConfig scfg;
        scfg.c = c0;
        scfg.tau = t.tau;
        scfg.k_max = horizon;
        scfg.weight = w;
        RunTrace tr = run_dsg_from(obj, scfg, x0);
        tr.seed = cfg.seed;
        emit_trace(log, dir, std::string("envelope_tau_") + t.file, tr);
    }
    emit_text(log, dir, "summary.txt", s.str());
    return 0;
}

int run_hard_unbounded(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";

    // Consensus-rounds method: theta scheduled as 8 sqrt(M) k^2 forces the
    // gap above M at the target outer iteration.
    {
        Eigen::MatrixXd wm(2, 2);
        wm << 0.75, 0.25, 0.25, 0.75;
        const WeightMatrix w = custom_weights(2, wm);
        const struct {
            long long k;
            double m;
        } cases[] = {{10, 1.0}, {20, 4.0}};
        for (const auto& cs : cases) {
            const double theta = hard_theta(cs.k, cs.m, HardMethod::dnc);
            const ObjectiveSet obj = make_hard_quadratic_pair(theta);
            DncConfig ccfg;
            ccfg.alpha = 0.5;
            ccfg.k_max = cs.k;
            ccfg.weight = w;
            ccfg.mu = 0.5;
            RunTrace tr = run_dnc(obj, ccfg, Eigen::VectorXd::Zero(1));
            tr.seed = cfg.seed;
            const IterRecord& rec = tr.records.back();
            s << "demo=unbounded_dnc k=" << cs.k << " M=" << fmt6(cs.m)
              << " theta=" << fmt17(theta) << " max_gap=" << fmt17(rec.max_gap)
              << " met=" << (rec.k == cs.k && rec.max_gap >= cs.m ? 1 : 0) << "\n";
            emit_trace(log, dir, "unbounded_dnc_k" + std::to_string(cs.k), tr);
        }
    }

    // Diminishing-step method: the nearly-disconnected pair keeps the
    // disagreement above sqrt(2) c theta / (2k).
    {
        const double lam = 1e-6, c = 0.25e-6;
        const double theta = hard_theta(100, 1.0, HardMethod::dng);
        Eigen::MatrixXd wm(2, 2);
        wm << (1 + lam) / 2, (1 - lam) / 2, (1 - lam) / 2, (1 + lam) / 2;
        const ObjectiveSet obj = make_hard_quadratic_pair(theta);
        DngConfig dcfg;
        dcfg.c = c;
        dcfg.k_max = 100;
        dcfg.weight = custom_weights(2, wm);
        RunTrace tr = run_dng(obj, dcfg, Eigen::VectorXd::Zero(1));
        tr.seed = cfg.seed;
        double min_margin = std::numeric_limits<double>::infinity();
        long long min_k = 0;
        for (const IterRecord& rec : tr.records) {
            if (rec.k < 5) continue;
            const double floor = std::sqrt(2.0) * c * theta / (2.0 * rec.k);
            if (rec.dis_x - floor < min_margin) {
                min_margin = rec.dis_x - floor;
                min_k = rec.k;
            }
        }
        s << "demo=unbounded_dng theta=" << fmt17(theta)
          << " min_margin=" << fmt17(min_margin) << " at_k=" << min_k
          << " met=" << (min_margin >= 0.0 ? 1 : 0) << "\n";
        emit_trace(log, dir, "unbounded_dng", tr);
    }
    emit_text(log, dir, "summary.txt", s.str());
    return 0;
}

int run_diverge_indefinite(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    Eigen::MatrixXd wm(2, 2);
    wm << 0.1, 0.9, 0.9, 0.1;
    const ObjectiveSet obj = make_huber_pair();
    DngConfig dcfg;
    dcfg.c = 1.0;
    dcfg.k_max = 200;
    dcfg.weight = custom_weights(2, wm);
    RunTrace tr = run_dng(obj, dcfg, Eigen::VectorXd::Zero(1));
    tr.seed = cfg.seed;
    emit_trace(log, dir, "indefinite", tr);

    const auto gap_min = [](const IterRecord& r) {
        return *std::min_element(r.gap_per_node.begin(), r.gap_per_node.end());
    };
    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";
    if (!tr.diverged && tr.records.size() == 201) {
        const IterRecord& r20 = tr.records[20];
        const IterRecord& r200 = tr.records[200];
        s << "demo=diverge_indefinite dis20=" << fmt17(r20.dis_x)
          << " dis200=" << fmt17(r200.dis_x)
          << " dis_ratio=" << fmt17(r200.dis_x / r20.dis_x)
          << " min_gap20=" << fmt17(gap_min(r20))
          << " min_gap200=" << fmt17(gap_min(r200)) << "\n";
    } else {
        s << "demo=diverge_indefinite truncated=1 k_last=" << tr.records.back().k
          << "\n";
    }
    emit_text(log, dir, "summary.txt", s.str());
    return 0;
}

int run_diverge_cubic(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    Eigen::MatrixXd wm(2, 2);
    wm << 0.9, 0.1, 0.1, 0.9;
    const WeightMatrix w = custom_weights(2, wm);
    const ObjectiveSet obj = make_cubic_pair();
    const auto gap_min = [](const IterRecord& r) {
        return *std::min_element(r.gap_per_node.begin(), r.gap_per_node.end());
    };

    std::ostringstream s;
    s << "experiment=" << experiment_name(cfg.experiment) << "\n";
    s << "seed=" << cfg.seed << "\n";

    {
        Eigen::MatrixXd x0(2, 1);
        x0 << -1.0, 1.0;
        DngConfig dcfg;
        dcfg.c = 1.0;
        dcfg.k_max = 500;
        dcfg.weight = w;
        RunTrace tr = run_dng_from(obj, dcfg, x0);
        tr.seed = cfg.seed;
        emit_trace(log, dir, "cubic_dng", tr);
        const IterRecord& last = tr.records.back();
        const IterRecord& half = tr.records[tr.records.size() / 2];
        s << "demo=diverge_cubic method=dng diverged=" << (tr.diverged ? 1 : 0)
          << " k_last=" << last.k << " min_gap_half=" << fmt17(gap_min(half))
          << " min_gap_last=" << fmt17(gap_min(last)) << "\n";
    }
    {
        // The exact mirror-symmetric start (-1, 1) lies on an invariant
        // subspace where the node average stays identically zero and the
        // run converges by luck; displacing both nodes by the same 5e-10
        // excites the average mode, which this instance's curvature makes
        // unstable under a constant 0.1 step.  That is the generic
        // behavior from any nearby start.
        Eigen::MatrixXd x0(2, 1);
        x0 << -1.0 + 5e-10, 1.0 + 5e-10;
        DncConfig ccfg;
        ccfg.alpha = 0.1;
        ccfg.k_max = 1000;
        ccfg.weight = w;
        ccfg.mu = 0.8;
        RunTrace tr = run_dnc_from(obj, ccfg, x0);
        tr.seed = cfg.seed;
        emit_trace(log, dir, "cubic_dnc", tr);
        const double init = gap_min(tr.records.front());
        const double last = gap_min(tr.records.back());
        s << "demo=diverge_cubic method=dnc displaced=5e-10 k_last="
          << tr.records.back().k << " guard_tripped=" << (tr.diverged ? 1 : 0)
          << " min_gap_initial=" << fmt17(init) << " min_gap_last=" << fmt17(last)
          << " ratio=" << fmt17(last / init) << "\n";
    }
    emit_text(log, dir, "summary.txt", s.str());
    return 0;
}

int run_verify(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = prepare_dir(cfg.out);
    CheckOptions opt;
    if (cfg.long_mode) {
        opt.envelope_horizon = 10000;
        opt.figure_k_max = 10000;
        opt.long_mode = true;
    } else {
        // The envelope family is the quadratic-cost check; a 1000-horizon
        // pass keeps the quick suite under half a minute.  The figure
        // orderings need the full span to cross their targets.
        opt.envelope_horizon = 1000;
        opt.figure_k_max = 10000;
        opt.long_mode = false;
    }
    const std::vector<CheckResult> results = run_all_checks(opt);
    std::ostringstream s;
    bool all_pass = true;
    for (const CheckResult& r : results) {
        all_pass = all_pass && r.pass;
        std::ostringstream line;
        line << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail;
        s << line.str() << "\n";
        log << line.str() << "\n";
    }
    s << (all_pass ? "all checks passed" : "CHECKS FAILED") << "\n";
    log << (all_pass ? "all checks passed" : "CHECKS FAILED") << "\n";
    emit_text(log, dir, "checks.txt", s.str());
    return all_pass ? 0 : 2;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    switch (cfg.experiment) {
        case ExperimentKind::fig1_left: return run_fig1_left(cfg, log);
        case ExperimentKind::fig1_right: return run_fig1_right(cfg, log);
        case ExperimentKind::hard_envelope: return run_hard_envelope(cfg, log);
        case ExperimentKind::hard_unbounded: return run_hard_unbounded(cfg, log);
        case ExperimentKind::diverge_indefinite: return run_diverge_indefinite(cfg, log);
        case ExperimentKind::diverge_cubic: return run_diverge_cubic(cfg, log);
        case ExperimentKind::verify: return run_verify(cfg, log);
        case ExperimentKind::custom: return run_custom(cfg, log);
    }
    throw std::invalid_argument("run_experiment: unreachable experiment kind");
}

}  // namespace dgmlab
