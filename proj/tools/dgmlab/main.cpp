// main.cpp — dgmlab command-line interface.
//
// Subcommands:
//   run        execute the experiment described by a config file
//   fig1-left  method comparison on a seeded logistic instance
//   fig1-right scale sweep on the robust-regression instance
//   hard       both adversarial demos (lower envelope + unbounded floors)
//   diverge    both divergence demos (indefinite weights + cubic pair)
//   verify     the twelve-check verification suite
//
// Exit codes: 0 success, 1 configuration error (bad flags, bad config
// file, impossible instance), 2 verification failure (a failing check or
// an emitted file that does not pass its own schema validator).

#include "config.hpp"
#include "experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

namespace {

// Named subcommands build their config directly; the seed requirement is
// enforced by the flag declarations below, not by the file parser.
dgmlab::ExperimentConfig named_config(dgmlab::ExperimentKind kind, std::uint64_t seed,
                                      const std::string& out, bool long_mode) {
    dgmlab::ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.seed = seed;
    cfg.has_seed = true;
    cfg.out = out;
    cfg.long_mode = long_mode;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dgmlab — deterministic experiment runner and verification "
                 "harness for distributed gradient methods"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    bool long_mode = false;

    CLI::App* run_cmd = app.add_subcommand(
        "run", "execute the experiment described by a config file");
    run_cmd->add_option("--config", config_path, "configuration file (key = value)")
        ->required();
    CLI::Option* run_seed = run_cmd->add_option("--seed", seed, "override the seed");
    CLI::Option* run_out =
        run_cmd->add_option("--out", out, "override the output directory");
    run_cmd->add_flag("--long", long_mode,
                      "full-size mode (fig1_left and verify experiments)");

    CLI::App* left_cmd = app.add_subcommand(
        "fig1-left", "method comparison on a seeded logistic instance");
    left_cmd->add_option("--seed", seed, "instance seed")->required();
    left_cmd->add_option("--out", out, "output directory (default fig1_left)");
    left_cmd->add_flag("--long", long_mode, "run the full 100-node instance");

    CLI::App* right_cmd = app.add_subcommand(
        "fig1-right", "scale sweep on the robust-regression instance");
    right_cmd->add_option("--seed", seed, "instance seed")->required();
    right_cmd->add_option("--out", out, "output directory (default fig1_right)");

    CLI::App* hard_cmd = app.add_subcommand(
        "hard", "adversarial demos: lower envelope and unbounded-gradient floors");
    hard_cmd->add_option("--seed", seed, "recorded in the traces (instances are fixed)");
    hard_cmd->add_option("--out", out, "output directory (default hard)");

    CLI::App* diverge_cmd = app.add_subcommand(
        "diverge", "divergence demos: indefinite weights and the cubic pair");
    diverge_cmd->add_option("--seed", seed,
                            "recorded in the traces (instances are fixed)");
    diverge_cmd->add_option("--out", out, "output directory (default diverge)");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the twelve-check verification suite");
    verify_cmd->add_option("--out", out, "output directory (default verify)");
    verify_cmd->add_flag("--long", long_mode,
                         "full horizons plus absolute transmission counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        using dgmlab::ExperimentKind;
        if (app.got_subcommand(run_cmd)) {
            dgmlab::CliOverrides ov;
            if (run_seed->count() > 0) ov.seed = seed;
            if (run_out->count() > 0) ov.out = out;
            ov.long_mode = long_mode;
            const dgmlab::ExperimentConfig cfg =
                dgmlab::parse_config_file(config_path, &ov);
            return dgmlab::run_experiment(cfg, std::cout);
        }
        if (app.got_subcommand(left_cmd)) {
            return dgmlab::run_experiment(
                named_config(ExperimentKind::fig1_left, seed,
                             out.empty() ? "fig1_left" : out, long_mode),
                std::cout);
        }
        if (app.got_subcommand(right_cmd)) {
            return dgmlab::run_experiment(
                named_config(ExperimentKind::fig1_right, seed,
                             out.empty() ? "fig1_right" : out, false),
                std::cout);
        }
        if (app.got_subcommand(hard_cmd)) {
            const std::string base = out.empty() ? "hard" : out;
            const int rc1 = dgmlab::run_experiment(
                named_config(ExperimentKind::hard_envelope, seed, base + "/envelope",
                             false),
                std::cout);
            const int rc2 = dgmlab::run_experiment(
                named_config(ExperimentKind::hard_unbounded, seed, base + "/unbounded",
                             false),
                std::cout);
            return rc1 != 0 ? rc1 : rc2;
        }
        if (app.got_subcommand(diverge_cmd)) {
            const std::string base = out.empty() ? "diverge" : out;
            const int rc1 = dgmlab::run_experiment(
                named_config(ExperimentKind::diverge_indefinite, seed,
                             base + "/indefinite", false),
                std::cout);
            const int rc2 = dgmlab::run_experiment(
                named_config(ExperimentKind::diverge_cubic, seed, base + "/cubic",
                             false),
                std::cout);
            return rc1 != 0 ? rc1 : rc2;
        }
        // verify
        return dgmlab::run_experiment(
            named_config(ExperimentKind::verify, 0, out.empty() ? "verify" : out,
                         long_mode),
            std::cout);
    } catch (const dgmlab::VerificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
