// config.hpp — experiment configuration: schema, defaults, and the
// key=value parser behind the command-line laboratory.
//
// A configuration file is flat text with one `key = value` pair per line,
// '#' comments, and optional `[method.X]` sections that select the solver
// roster for custom experiments:
//
//   # global keys
//   experiment = custom      fig1_left | fig1_right | hard_envelope |
//                            hard_unbounded | diverge_indefinite |
//                            diverge_cubic | verify | custom
//   seed       = 7           mandatory; seeds data and graph generation
//   n          = 30          node count            (custom, fig1_left)
//   density    = 0.12        geometric edge density (custom, fig1_left)
//   k_max      = 2000        outer-iteration horizon
//   targets    = 1e-1,1e-2   accuracy targets, positive, strictly decreasing
//   out        = results     output directory
//   long       = 0           full-size mode        (fig1_left, verify)
//
//   [method.dng]             diminishing-step accelerated method
//   c   = 1                  step constant alpha_k = c/(k+1), required, > 0
//   eta = 0.1                optional safeguard, in (0, 1)
//
//   [method.dnc]             constant-step method with consensus rounds
//   alpha      = 0.05        explicit step, > 0; or instead
//   alpha_mode = half_over_L half_over_L | one_over_L (step from the
//                            objective's canonical smoothness constant)
//
//   [method.dsg]             (sub)gradient baseline
//   c   = 1                  step constant alpha_k = c/(k+1)^tau, required
//   tau = 0.5                optional decay exponent, >= 0 (default 0)
//
// The parser is strict: unknown keys, duplicate keys, malformed values,
// method sections on experiments with a pinned roster, and keys an
// experiment does not accept are all rejected naming the offender.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgmlab {

enum class ExperimentKind {
    fig1_left,
    fig1_right,
    hard_envelope,
    hard_unbounded,
    diverge_indefinite,
    diverge_cubic,
    verify,
    custom,
};

/// Canonical name of an experiment kind (the `experiment =` value).
const char* experiment_name(ExperimentKind kind);

/// Inverse of experiment_name; throws std::invalid_argument on an
/// unrecognized name.
ExperimentKind parse_experiment_name(const std::string& name);

/// One `[method.X]` section: which solver to run and its step parameters.
struct MethodSpec {
    std::string name;                       ///< dng | dnc | dsg
    std::optional<double> c;                ///< dng / dsg step constant
    std::optional<double> tau;              ///< dsg decay exponent
    std::optional<double> alpha;            ///< dnc explicit step
    std::optional<std::string> alpha_mode;  ///< dnc derived step
    std::optional<double> eta;              ///< dng safeguard
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::custom;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int n = 30;
    bool has_n = false;
    double density = 0.12;
    bool has_density = false;
    long long k_max = 2000;
    bool has_k_max = false;
    std::vector<double> targets = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
    std::string out = ".";
    bool long_mode = false;
    std::vector<MethodSpec> methods;  ///< custom experiments only
};

/// Command-line values that take precedence over the file: the seed and
/// output directory replace the file's, and --long turns long mode on
/// (only where the experiment accepts it).
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool long_mode = false;
};

/// Parses and validates a configuration.  Overrides, when given, are
/// applied before validation, so a seed may come from either place.
/// Throws std::invalid_argument with a `config:` prefix naming the
/// offending key, section, or value.
ExperimentConfig parse_config(std::istream& in, const CliOverrides* overrides = nullptr);

/// parse_config on a file; additionally reports an unopenable path.
ExperimentConfig parse_config_file(const std::string& path,
                                   const CliOverrides* overrides = nullptr);

}  // namespace dgmlab
