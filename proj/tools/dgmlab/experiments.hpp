// experiments.hpp — the experiment runners behind the CLI subcommands.
//
// Each experiment writes its artifacts under the configured output
// directory and logs one line per file:
//
//   network.txt        the graph and weight matrix the run used
//   <label>.csv        one full trace per method (trace CSV schema)
//   bounds_<label>.csv closed-form envelope curves aligned to the trace
//                      iterates, emitted when the certified constants
//                      apply to the method's step
//   summary.txt        deterministic key=value lines: instance facts and
//                      first-hit communication counts per accuracy target
//   checks.txt         the verification suite's pass/fail table (verify)
//
// Every emitted CSV (and the network file) is read back through its own
// schema validator before the run reports success; a validation failure
// is a harness bug and raises VerificationError.  All output is
// deterministic for a fixed configuration: re-running overwrites every
// file with byte-identical content.

#pragma once

#include "config.hpp"

#include <iosfwd>
#include <stdexcept>

namespace dgmlab {

/// An emitted artifact failed its own schema validation.  Reported with
/// exit code 2 (verification failure) rather than as a config error.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runs the configured experiment, writing artifacts under cfg.out
/// (created when missing).  Returns the process exit code: 0 on success,
/// 2 when the verification suite reports a failing check.  Config-level
/// problems (invalid parameters, graphs that cannot be generated,
/// unwritable paths) raise std::invalid_argument or std::runtime_error.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace dgmlab
