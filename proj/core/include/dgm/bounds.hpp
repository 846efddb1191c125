// bounds.hpp — closed-form constants and per-iteration envelopes for the
// distributed accelerated methods, evaluable for bound-vs-empirical overlay.
//
// Core quantities:
//
//   B(r)     = sup_{z >= 1/2} z r^z log(1+z),  B(0) := 0
//   C_cons   = 8/sqrt(eta (1-mu)) * ( 2 B(sqrt(mu)) + 7/(1-mu) )
//   consensus (diminishing step):  ||xtilde(k)|| <= sqrt(n) c G C_cons / k,
//                                  ||ytilde(k)|| <= 4x that
//   gap (diminishing step):        per-node gap / n <=
//        ( 2R^2/c + 16 c^2 L C_cons^2 G^2 + c G^2 C_cons )
//        * (1/k) sum_{t=1..k} (t+2)^2 / ((t+1) t^2),     valid for c <= 1/(2L)
//   consensus (consensus rounds):  ||xtilde(k)|| <= 2 alpha sqrt(n) G / k^2
//   gap (consensus rounds):        per-node gap / n <=
//        (1/k^2) ( 2R^2/alpha + 11 alpha^2 L G^2 + alpha G^2 ), alpha <= 1/(2L)
//   communication budget:          sum_t (tau_x + tau_y) <=
//        2/(-log mu) ( k log 3 + 2(k+1) log(k+1) ),   or 2k when mu = 0
//   transition product:            Phi(k,t) = M(k-2) M(k-3) ... M(t-1) with
//        M(s) = [ (1+beta_s) Wt   -beta_s Wt ; I  0 ],  Wt = W - (1/n) 1 1'
//   transition norm envelope:      ||Phi(k,t)|| <= 8/sqrt(eta(1-mu))
//                                                  * sqrt(mu)^(k-t)
//   baseline step sums:            s_k(tau) = sum_{t=0..k-1} (t+1)^-tau,
//        theta_k = 1/s_k, lower envelope
//        e_k(tau) = (1-c_max)^2 / (2 s_k) + c_min^2 / (2 k^{2 tau})
//   adversarial magnitudes:        theta(k,M) = 8 sqrt(M) k^2 (consensus
//        rounds) or 8e6 k sqrt(M) (diminishing step).

#pragma once

#include <dgm/net.hpp>

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dgm {

/// Supremum of z * r^z * log(1+z) over z >= 1/2, via a dense grid over
/// [1/2, max(10, 20/(-log r))] refined by golden-section search; 0 at r = 0.
double big_b(double r);

/// Consensus constant 8/sqrt(eta(1-mu)) * (2 B(sqrt(mu)) + 7/(1-mu)).
/// Requires mu in [0,1) and eta in (0,1].
double c_cons(double mu, double eta);

/// Disagreement envelopes {on x, on y} at iterate k for the
/// diminishing-step method: sqrt(n) c G C_cons / k and 4x that.
std::pair<double, double> dng_consensus_bound(long long k, int n, double c, double G,
                                              double C_cons);

/// Per-node optimality-gap envelope (a bound on gap_i / n) at iterate k
/// for the diminishing-step method; requires the safe regime c <= 1/(2L).
double dng_gap_bound(long long k, double c, double L, double G, double R,
                     double C_cons);

/// Diagnostic gap envelope for steps beyond 1/(2L): valid for
/// k > 2cL, with a constant containing 3^(2cL) factors — finite but
/// typically astronomically loose.
double dng_gap_bound_large_step(long long k, double c, double L, double G, double R,
                                double C_cons);

/// Disagreement envelope 2 alpha sqrt(n) G / k^2 for the consensus-rounds
/// method.
double dnc_consensus_bound(long long k, int n, double alpha, double G);

/// Per-node optimality-gap envelope (a bound on gap_i / n) at iterate k
/// for the consensus-rounds method; requires alpha <= 1/(2L).
double dnc_gap_bound(long long k, double alpha, double L, double G, double R);

/// Upper bound on the cumulative consensus rounds sum_{t<=k}(tau_x+tau_y):
/// 2/(-log mu) (k log 3 + 2(k+1) log(k+1)); 2k when mu = 0 (the clamped
/// schedule uses one round per iterate after the first).
double dnc_comm_bound(long long k, double mu);

/// Ordered transition product Phi(k,t) of the 2n x 2n momentum-consensus
/// blocks; Phi(k,k) = I.  Computed by direct multiplication.
Eigen::MatrixXd phi_matrix(const WeightMatrix& w, long long k, long long t);

/// Spectral-norm envelope 8/sqrt(eta(1-mu)) sqrt(mu)^(k-t) for the
/// transition product.  At mu = 0 the single-factor product still carries
/// an identity block of norm 1, so the k-t = 1 value stays at 8/sqrt(eta);
/// deeper products vanish identically and the envelope is 0.
double phi_norm_bound(double mu, double eta, long long k_minus_t);

/// Baseline step sum s_k(tau) = sum_{t=0}^{k-1} (t+1)^-tau.
double s_k(long long k, double tau);

/// Worst-case instance magnitude theta_k = 1 / s_k(tau).
double theta_k(long long k, double tau);

/// Proven lower envelope on the baseline's worst-case max-gap:
/// (1-c_max)^2 / (2 s_k(tau)) + c_min^2 / (2 k^{2 tau}).
double dsg_envelope(long long k, double tau, double c_min, double c_max);

enum class HardMethod { dng, dnc };

/// Magnitude schedule that keeps the method's gap above M at horizon k:
/// 8 sqrt(M) k^2 for the consensus-rounds method (k >= 10) and
/// 8e6 k sqrt(M) for the diminishing-step method (k >= 5).
double hard_theta(long long k, double M, HardMethod method);

/// One bound-curve row aligned to a trace iterate.
struct BoundEntry {
    long long k = 0;
    double consensus = 0.0;  ///< envelope on ||xtilde(k)||
    double gap = 0.0;        ///< envelope on per-node gap / n
    double comms = 0.0;      ///< envelope on cumulative rounds per node
};

/// Bound curves plus the scalar constants they were built from.
struct BoundReport {
    std::string method;
    double c_cons = 0.0;             ///< consensus constant (0 when unused)
    double envelope_constant = 0.0;  ///< multiplier of the gap decay profile
    double big_b_value = 0.0;        ///< B(sqrt(mu))
    std::vector<BoundEntry> entries;
};

/// Bound curves for the diminishing-step method at the given iterates.
BoundReport dng_bound_report(const std::vector<long long>& ks, int n, double c,
                             double L, double G, double R, double mu, double eta);

/// Bound curves for the consensus-rounds method at the given iterates.
BoundReport dnc_bound_report(const std::vector<long long>& ks, int n, double alpha,
                             double L, double G, double R, double mu);

/// Writes `k,bound_consensus,bound_gap,bound_comms` rows.
void write_bounds_csv(std::ostream& out, const BoundReport& report);

/// Checks that `in` holds a well-formed bounds CSV: exact header, four
/// fields per row, iteration numbers strictly increasing and >= 1, real
/// fields that parse in full, consensus and comms envelopes finite and
/// nonnegative, comms nondecreasing (gap may be nan outside a bound's
/// validity regime).  Returns the number of data rows.  Throws
/// std::invalid_argument describing the first defect.
long long validate_bounds_csv(std::istream& in);

}  // namespace dgm
