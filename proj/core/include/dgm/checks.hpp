// checks.hpp -- end-to-end verification suites.
//
// Each function in this header packages one acceptance-level property of
// the library into a self-contained pass/fail check: it builds its own
// instances (objectives, graphs, weight matrices), runs the relevant
// solvers, compares the measured quantities against the closed-form
// envelopes or reference behaviours, and reports the worst margin seen.
// The checks are deterministic: every random draw uses a fixed seed.
//
// The twelve checks, in order:
//
//   1  gradient_families          finite-difference gradient audit of every
//                                 objective family
//   2  dng_consensus_dominance    disagreement of the diminishing-step
//                                 accelerated method under its O(1/k)
//                                 envelope on seeded logistic instances
//   3  dnc_consensus_dominance    disagreement of the consensus-rounds
//                                 method under its O(1/k^2) envelope
//   4  gap_and_budget_dominance   function gaps under their envelopes and
//                                 the consensus-rounds communication total
//                                 under its closed-form budget
//   5  oracle_sandwich            inexact-oracle lower/upper sandwich holds
//                                 along trajectories at sampled probes
//   6  progress_inequality        per-iteration potential decrease holds in
//                                 the step regime (small and large steps)
//   7  transition_norm_envelope   two-block transition products under the
//                                 geometric norm envelope
//   8  baseline_envelope          per-horizon baseline runs on the
//                                 two-node hard pair stay inside their
//                                 invariant regions and above the
//                                 step-size-free lower envelope
//   9  hard_instance_lower_bounds scheduled hard pairs force the declared
//                                 gap / disagreement lower bounds
//  10  figure_ordering            qualitative orderings: communication
//                                 advantage over the baseline, O(1/k^2)
//                                 slope, and bounded gap * k / log k
//  11  divergence_demos           the documented runaway / divergence
//                                 behaviours actually occur
//  12  single_node_reduction      one-node accelerated run coincides with
//                                 the centralized diminishing-step run
#pragma once

#include <string>
#include <vector>

namespace dgm {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  ///< worst margins, instance counts, failure site
};

/// Sizes for the two expensive checks.  Defaults are the full acceptance
/// sizes; the command-line verify harness shrinks them for a quick pass.
struct CheckOptions {
    long long envelope_horizon = 10000;  ///< baseline-envelope max horizon
    long long figure_k_max = 10000;      ///< figure-ordering iteration span
    bool long_mode = false;  ///< also reproduce absolute transmission counts
                             ///< on the full-size (n = 100) instances
};

CheckResult check_gradient_families();
CheckResult check_dng_consensus_dominance();
CheckResult check_dnc_consensus_dominance();
CheckResult check_gap_and_budget_dominance();
CheckResult check_oracle_sandwich();
CheckResult check_progress_inequality();
CheckResult check_transition_norm_envelope();
CheckResult check_baseline_envelope(long long horizon);
CheckResult check_hard_instance_lower_bounds();
CheckResult check_figure_ordering(long long k_max, bool long_mode);
CheckResult check_divergence_demos();
CheckResult check_single_node_reduction();

/// Runs all twelve checks in order.
std::vector<CheckResult> run_all_checks(const CheckOptions& opt = {});

}  // namespace dgm
