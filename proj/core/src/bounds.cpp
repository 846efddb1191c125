// bounds.cpp — evaluation of the closed-form constants and envelopes.

#include <dgm/bounds.hpp>
#include <dgm/solvers.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgm {

namespace {

double decay_objective(double r, double z) { return z * std::pow(r, z) * std::log1p(z); }

// Averaged partial sum (1/k) sum_{t=1}^{k} (t+2)^2 / ((t+1) t^2).
double gap_profile(long long k) {
    double sum = 0.0;
    for (long long t = 1; t <= k; ++t) {
        double td = static_cast<double>(t);
        sum += (td + 2.0) * (td + 2.0) / ((td + 1.0) * td * td);
    }
    return sum / static_cast<double>(k);
}

// Averaged partial sum (1/k) sum_{t=2}^{k} (t+2)^2 / (t (t-1)^2) for the
// large-step diagnostic.
double gap_profile_large_step(long long k) {
    double sum = 0.0;
    for (long long t = 2; t <= k; ++t) {
        double td = static_cast<double>(t);
        sum += (td + 2.0) * (td + 2.0) / (td * (td - 1.0) * (td - 1.0));
    }
    return sum / static_cast<double>(k);
}

void require_mu_eta(const char* who, double mu, double eta) {
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument(std::string(who) + ": mu must lie in [0, 1)");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument(std::string(who) + ": eta must lie in (0, 1]");
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

long long parse_bounds_int(const std::string& field, const char* what, long long row) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        std::ostringstream msg;
        msg << "bounds csv: row " << row << ": " << what << " is not an integer: '"
            << field << "'";
        throw std::invalid_argument(msg.str());
    }
    return v;
}

double parse_bounds_real(const std::string& field, const char* what, long long row) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size() || field.empty()) {
        std::ostringstream msg;
        msg << "bounds csv: row " << row << ": " << what << " is not a real: '" << field
            << "'";
        throw std::invalid_argument(msg.str());
    }
    return v;
}

}  // namespace

double big_b(double r) {
    if (r == 0.0) return 0.0;
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("big_b: r must lie in [0, 1)");
    const double z_hi = std::max(10.0, 20.0 / (-std::log(r)));
    const double step = 1e-3;
    const long long steps = static_cast<long long>((z_hi - 0.5) / step);
    double best = decay_objective(r, 0.5), best_z = 0.5;
    for (long long i = 1; i <= steps; ++i) {
        double z = 0.5 + step * static_cast<double>(i);
        double v = decay_objective(r, z);
        if (v > best) {
            best = v;
            best_z = z;
        }
    }
    // Golden-section refinement in the bracketing cell around the argmax.
    double lo = std::max(0.5, best_z - step), hi = best_z + step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = decay_objective(r, a), fb = decay_objective(r, b);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = decay_objective(r, b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = decay_objective(r, a);
        }
    }
    return std::max({best, fa, fb});
}

double c_cons(double mu, double eta) {
    require_mu_eta("c_cons", mu, eta);
    return 8.0 / std::sqrt(eta * (1.0 - mu)) *
           (2.0 * big_b(std::sqrt(mu)) + 7.0 / (1.0 - mu));
}

std::pair<double, double> dng_consensus_bound(long long k, int n, double c, double G,
                                              double C_cons) {
    if (k < 1) throw std::invalid_argument("dng_consensus_bound: k must be >= 1");
    if (n < 1) throw std::invalid_argument("dng_consensus_bound: n must be >= 1");
    double bx = std::sqrt(static_cast<double>(n)) * c * G * C_cons /
                static_cast<double>(k);
    return {bx, 4.0 * bx};
}

double dng_gap_bound(long long k, double c, double L, double G, double R,
                     double C_cons) {
    if (k < 1) throw std::invalid_argument("dng_gap_bound: k must be >= 1");
    if (!(c > 0.0)) throw std::invalid_argument("dng_gap_bound: c must be positive");
    if (c > 1.0 / (2.0 * L))
        throw std::invalid_argument(
            "dng_gap_bound: requires the safe regime c <= 1/(2L)");
    const double big_c =
        2.0 * R * R / c + 16.0 * c * c * L * C_cons * C_cons * G * G + c * G * G * C_cons;
    return big_c * gap_profile(k);
}

double dng_gap_bound_large_step(long long k, double c, double L, double G, double R,
                                double C_cons) {
    if (!(c > 0.0))
        throw std::invalid_argument("dng_gap_bound_large_step: c must be positive");
    const double kp = 2.0 * c * L;  // crossover iterate
    if (!(static_cast<double>(k) > kp))
        throw std::invalid_argument("dng_gap_bound_large_step: requires k > 2cL");
    const double burn = (std::pow(3.0, kp) - 1.0) / 2.0;  // early-iterate growth cap
    const double big_c =
        kp * L * (burn * burn * 4.0 * c * c * G * G + R * R) +
        (2.0 / c) * (2.0 * (2.0 * kp + 1.0) * (2.0 * kp + 1.0) * burn * burn * 4.0 * c *
                         c * G * G +
                     2.0 * R * R) +
        16.0 * c * c * L * C_cons * C_cons * G * G + c * C_cons * G * G;
    return big_c * gap_profile_large_step(k);
}

double dnc_consensus_bound(long long k, int n, double alpha, double G) {
    if (k < 1) throw std::invalid_argument("dnc_consensus_bound: k must be >= 1");
    if (n < 1) throw std::invalid_argument("dnc_consensus_bound: n must be >= 1");
    return 2.0 * alpha * std::sqrt(static_cast<double>(n)) * G /
           (static_cast<double>(k) * static_cast<double>(k));
}

double dnc_gap_bound(long long k, double alpha, double L, double G, double R) {
    if (k < 1) throw std::invalid_argument("dnc_gap_bound: k must be >= 1");
    if (!(alpha > 0.0))
        throw std::invalid_argument("dnc_gap_bound: alpha must be positive");
    if (alpha > 1.0 / (2.0 * L))
        throw std::invalid_argument(
            "dnc_gap_bound: requires the safe regime alpha <= 1/(2L)");
    const double kd = static_cast<double>(k);
    return (2.0 * R * R / alpha + 11.0 * alpha * alpha * L * G * G + alpha * G * G) /
           (kd * kd);
}

double dnc_comm_bound(long long k, double mu) {
    if (k < 1) throw std::invalid_argument("dnc_comm_bound: k must be >= 1");
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument("dnc_comm_bound: mu must lie in [0, 1)");
    const double kd = static_cast<double>(k);
    if (mu == 0.0) return 2.0 * kd;
    return 2.0 / (-std::log(mu)) *
           (kd * std::log(3.0) + 2.0 * (kd + 1.0) * std::log(kd + 1.0));
}

Eigen::MatrixXd phi_matrix(const WeightMatrix& w, long long k, long long t) {
    if (t < 0 || k < t)
        throw std::invalid_argument("phi_matrix: requires k >= t >= 0");
    const int n = w.size();
    const Eigen::MatrixXd wt =
        w.matrix() - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    factor.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    for (long long s = 2; s <= k - t + 1; ++s) {
        const double b = beta(k - s);  // momentum factor of block M(k-s)
        factor.topLeftCorner(n, n) = (1.0 + b) * wt;
        factor.topRightCorner(n, n) = -b * wt;
        prod = prod * factor;
    }
    return prod;
}

double phi_norm_bound(double mu, double eta, long long k_minus_t) {
    require_mu_eta("phi_norm_bound", mu, eta);
    if (k_minus_t < 0)
        throw std::invalid_argument("phi_norm_bound: k_minus_t must be >= 0");
    const double lead = 8.0 / std::sqrt(eta * (1.0 - mu));
    if (mu == 0.0) return k_minus_t <= 1 ? lead : 0.0;
    return lead * std::pow(std::sqrt(mu), static_cast<double>(k_minus_t));
}

double s_k(long long k, double tau) {
    if (k < 1) throw std::invalid_argument("s_k: k must be >= 1");
    if (!(tau >= 0.0)) throw std::invalid_argument("s_k: tau must be nonnegative");
    double sum = 0.0;
    for (long long t = 0; t < k; ++t)
        sum += std::pow(static_cast<double>(t + 1), -tau);
    return sum;
}

double theta_k(long long k, double tau) { return 1.0 / s_k(k, tau); }

double dsg_envelope(long long k, double tau, double c_min, double c_max) {
    if (k < 1) throw std::invalid_argument("dsg_envelope: k must be >= 1");
    const double kd = static_cast<double>(k);
    return (1.0 - c_max) * (1.0 - c_max) / (2.0 * s_k(k, tau)) +
           c_min * c_min / (2.0 * std::pow(kd, 2.0 * tau));
}

double hard_theta(long long k, double M, HardMethod method) {
    if (!(M > 0.0)) throw std::invalid_argument("hard_theta: M must be positive");
    const double kd = static_cast<double>(k);
    if (method == HardMethod::dnc) {
        if (k < 10)
            throw std::invalid_argument(
                "hard_theta: the consensus-rounds guarantee needs k >= 10");
        return 8.0 * std::sqrt(M) * kd * kd;
    }
    if (k < 5)
        throw std::invalid_argument(
            "hard_theta: the diminishing-step guarantee needs k >= 5");
    return 8e6 * kd * std::sqrt(M);
}

BoundReport dng_bound_report(const std::vector<long long>& ks, int n, double c,
                             double L, double G, double R, double mu, double eta) {
    BoundReport rep;
    rep.method = "dng";
    rep.c_cons = c_cons(mu, eta);
    rep.big_b_value = big_b(std::sqrt(mu));
    rep.envelope_constant = 2.0 * R * R / c +
                            16.0 * c * c * L * rep.c_cons * rep.c_cons * G * G +
                            c * G * G * rep.c_cons;
    for (long long k : ks) {
        BoundEntry e;
        e.k = k;
        e.consensus = dng_consensus_bound(k, n, c, G, rep.c_cons).first;
        e.gap = dng_gap_bound(k, c, L, G, R, rep.c_cons);
        e.comms = static_cast<double>(k);  // one exchange per iterate
        rep.entries.push_back(e);
    }
    return rep;
}

BoundReport dnc_bound_report(const std::vector<long long>& ks, int n, double alpha,
                             double L, double G, double R, double mu) {
    BoundReport rep;
    rep.method = "dnc";
    rep.big_b_value = mu > 0.0 ? big_b(std::sqrt(mu)) : 0.0;
    rep.envelope_constant =
        2.0 * R * R / alpha + 11.0 * alpha * alpha * L * G * G + alpha * G * G;
    for (long long k : ks) {
        BoundEntry e;
        e.k = k;
        e.consensus = dnc_consensus_bound(k, n, alpha, G);
        e.gap = dnc_gap_bound(k, alpha, L, G, R);
        e.comms = dnc_comm_bound(k, mu);
        rep.entries.push_back(e);
    }
    return rep;
}

void write_bounds_csv(std::ostream& out, const BoundReport& report) {
    out << "k,bound_consensus,bound_gap,bound_comms\n";
    for (const BoundEntry& e : report.entries) {
        std::ostringstream row;
        row << std::setprecision(17) << e.k << ',' << e.consensus << ',' << e.gap << ','
            << e.comms;
        out << row.str() << "\n";
    }
}

long long validate_bounds_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "k,bound_consensus,bound_gap,bound_comms")
        throw std::invalid_argument("bounds csv: missing or malformed header");
    long long rows = 0;
    long long prev_k = 0;
    double prev_comms = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;  // tolerate a trailing newline
        ++rows;
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 4) {
            std::ostringstream msg;
            msg << "bounds csv: row " << rows << ": expected 4 fields, got " << f.size();
            throw std::invalid_argument(msg.str());
        }
        long long k = parse_bounds_int(f[0], "k", rows);
        double consensus = parse_bounds_real(f[1], "bound_consensus", rows);
        parse_bounds_real(f[2], "bound_gap", rows);
        double comms = parse_bounds_real(f[3], "bound_comms", rows);
        if (k < 1 || k <= prev_k) {
            std::ostringstream msg;
            msg << "bounds csv: row " << rows
                << ": iteration numbers must be >= 1 and increase";
            throw std::invalid_argument(msg.str());
        }
        if (!std::isfinite(consensus) || consensus < 0.0) {
            std::ostringstream msg;
            msg << "bounds csv: row " << rows
                << ": consensus envelope must be finite and >= 0";
            throw std::invalid_argument(msg.str());
        }
        // The gap column may be nan where no closed-form envelope applies
        // (for instance a step outside the safe regime), so only the
        // consensus and communication columns carry hard constraints.
        if (!std::isfinite(comms) || comms < prev_comms) {
            std::ostringstream msg;
            msg << "bounds csv: row " << rows
                << ": communication envelope must be finite and nondecreasing";
            throw std::invalid_argument(msg.str());
        }
        prev_k = k;
        prev_comms = comms;
    }
    if (rows == 0) throw std::invalid_argument("bounds csv: no data rows");
    return rows;
}

}  // namespace dgm
