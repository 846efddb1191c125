// config.cpp — strict key=value configuration parsing.

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dgmlab {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument("config: " + message);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        fail("key '" + key + "' needs an unsigned integer, got '" + value + "'");
    return v;
}

long long parse_ll(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        fail("key '" + key + "' needs an integer, got '" + value + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || value.empty() || !std::isfinite(v))
        fail("key '" + key + "' needs a finite real, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    fail("key '" + key + "' needs 0/1/true/false, got '" + value + "'");
}

std::vector<double> parse_targets(const std::string& value) {
    std::vector<double> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = value.find(',', start);
        const std::string item = trim(value.substr(
            start, pos == std::string::npos ? std::string::npos : pos - start));
        const double t = parse_real("targets", item);
        if (!(t > 0.0)) fail("key 'targets' needs positive values, got '" + item + "'");
        if (!out.empty() && t >= out.back())
            fail("key 'targets' must be strictly decreasing");
        out.push_back(t);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// Which global keys each experiment accepts.  The pinned experiments
// reject size and horizon knobs so a config cannot silently distort a
// documented demonstration.
std::set<std::string> allowed_global_keys(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::custom:
            return {"experiment", "seed", "n", "density", "k_max", "targets", "out"};
        case ExperimentKind::fig1_left:
            return {"experiment", "seed", "n",   "density", "k_max",
                    "targets",    "out",  "long"};
        case ExperimentKind::fig1_right:
            return {"experiment", "seed", "targets", "out"};
        case ExperimentKind::hard_envelope:
            return {"experiment", "seed", "k_max", "out"};
        case ExperimentKind::hard_unbounded:
        case ExperimentKind::diverge_indefinite:
        case ExperimentKind::diverge_cubic:
            return {"experiment", "seed", "out"};
        case ExperimentKind::verify:
            return {"experiment", "seed", "out", "long"};
    }
    fail("unreachable experiment kind");
}

void validate_method(const MethodSpec& m) {
    const std::string where = " in [method." + m.name + "]";
    auto reject = [&](bool present, const char* key) {
        if (present) fail("key '" + std::string(key) + "' is not accepted" + where);
    };
    if (m.name == "dng") {
        reject(m.tau.has_value(), "tau");
        reject(m.alpha.has_value(), "alpha");
        reject(m.alpha_mode.has_value(), "alpha_mode");
        if (!m.c) fail("missing key 'c'" + where);
        if (!(*m.c > 0.0)) fail("key 'c' must be > 0" + where);
        if (m.eta && !(*m.eta > 0.0 && *m.eta < 1.0))
            fail("key 'eta' must lie in (0, 1)" + where);
    } else if (m.name == "dnc") {
        reject(m.c.has_value(), "c");
        reject(m.tau.has_value(), "tau");
        reject(m.eta.has_value(), "eta");
        if (m.alpha.has_value() == m.alpha_mode.has_value())
            fail("method 'dnc' needs exactly one of 'alpha' or 'alpha_mode'");
        if (m.alpha && !(*m.alpha > 0.0)) fail("key 'alpha' must be > 0" + where);
        if (m.alpha_mode && *m.alpha_mode != "half_over_L" &&
            *m.alpha_mode != "one_over_L")
            fail("key 'alpha_mode' must be 'half_over_L' or 'one_over_L'" + where);
    } else if (m.name == "dsg") {
        reject(m.alpha.has_value(), "alpha");
        reject(m.alpha_mode.has_value(), "alpha_mode");
        reject(m.eta.has_value(), "eta");
        if (!m.c) fail("missing key 'c'" + where);
        if (!(*m.c > 0.0)) fail("key 'c' must be > 0" + where);
        if (m.tau && !(*m.tau >= 0.0)) fail("key 'tau' must be >= 0" + where);
    } else {
        fail("unknown method '" + m.name + "'");
    }
}

void finalize(ExperimentConfig& cfg, const std::set<std::string>& seen_global,
              const CliOverrides* overrides) {
    if (overrides) {
        if (overrides->seed) {
            cfg.seed = *overrides->seed;
            cfg.has_seed = true;
        }
        if (overrides->out) cfg.out = *overrides->out;
        if (overrides->long_mode) cfg.long_mode = true;
    }
    if (!cfg.has_seed) fail("missing mandatory key 'seed'");
    if (cfg.out.empty()) fail("key 'out' must name a directory");

    const std::set<std::string> allowed = allowed_global_keys(cfg.experiment);
    for (const std::string& key : seen_global)
        if (!allowed.count(key))
            fail("key '" + key + "' is not accepted by experiment '" +
                 experiment_name(cfg.experiment) + "'");
    if (cfg.long_mode && !allowed.count("long"))
        fail("long mode is not accepted by experiment '" +
             std::string(experiment_name(cfg.experiment)) + "'");

    if (cfg.experiment == ExperimentKind::custom) {
        if (cfg.methods.empty())
            fail("experiment 'custom' needs at least one [method.*] section");
    } else if (!cfg.methods.empty()) {
        fail("experiment '" + std::string(experiment_name(cfg.experiment)) +
             "' pins its methods; remove the [method.*] sections");
    }
    for (const MethodSpec& m : cfg.methods) validate_method(m);
}

}  // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::fig1_left: return "fig1_left";
        case ExperimentKind::fig1_right: return "fig1_right";
        case ExperimentKind::hard_envelope: return "hard_envelope";
        case ExperimentKind::hard_unbounded: return "hard_unbounded";
        case ExperimentKind::diverge_indefinite: return "diverge_indefinite";
        case ExperimentKind::diverge_cubic: return "diverge_cubic";
        case ExperimentKind::verify: return "verify";
        case ExperimentKind::custom: return "custom";
    }
    fail("unreachable experiment kind");
}

ExperimentKind parse_experiment_name(const std::string& name) {
    for (ExperimentKind kind :
         {ExperimentKind::fig1_left, ExperimentKind::fig1_right,
          ExperimentKind::hard_envelope, ExperimentKind::hard_unbounded,
          ExperimentKind::diverge_indefinite, ExperimentKind::diverge_cubic,
          ExperimentKind::verify, ExperimentKind::custom})
        if (name == experiment_name(kind)) return kind;
    fail("unknown experiment '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in, const CliOverrides* overrides) {
    ExperimentConfig cfg;
    std::set<std::string> seen_global;
    std::set<std::string> seen_method;
    MethodSpec* method = nullptr;  // current section; null = global scope

    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail("line " + std::to_string(line_no) + ": unterminated section '" +
                     line + "'");
            const std::string section = trim(line.substr(1, line.size() - 2));
            if (section.rfind("method.", 0) != 0)
                fail("unknown section '[" + section + "]'");
            const std::string name = section.substr(7);
            if (name != "dng" && name != "dnc" && name != "dsg")
                fail("unknown method '" + name + "' in section '[" + section + "]'");
            if (!seen_method.insert(name).second)
                fail("duplicate section [method." + name + "]");
            cfg.methods.push_back(MethodSpec{});
            cfg.methods.back().name = name;
            method = &cfg.methods.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("line " + std::to_string(line_no) + ": expected key = value, got '" +
                 line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("line " + std::to_string(line_no) + ": empty key");
        if (value.empty()) fail("key '" + key + "' has an empty value");

        if (method) {
            const std::string where = " in [method." + method->name + "]";
            auto set_once = [&](std::optional<double>& slot, double v) {
                if (slot) fail("duplicate key '" + key + "'" + where);
                slot = v;
            };
            if (key == "c") set_once(method->c, parse_real(key, value));
            else if (key == "tau") set_once(method->tau, parse_real(key, value));
            else if (key == "alpha") set_once(method->alpha, parse_real(key, value));
            else if (key == "eta") set_once(method->eta, parse_real(key, value));
            else if (key == "alpha_mode") {
                if (method->alpha_mode) fail("duplicate key 'alpha_mode'" + where);
                method->alpha_mode = value;
            } else {
                fail("unknown key '" + key + "'" + where);
            }
            continue;
        }

        if (!seen_global.insert(key).second) fail("duplicate key '" + key + "'");
        if (key == "experiment") cfg.experiment = parse_experiment_name(value);
        else if (key == "seed") {
            cfg.seed = parse_u64(key, value);
            cfg.has_seed = true;
        } else if (key == "n") {
            const long long n = parse_ll(key, value);
            if (n < 1) fail("key 'n' must be >= 1");
            cfg.n = static_cast<int>(n);
            cfg.has_n = true;
        } else if (key == "density") {
            cfg.density = parse_real(key, value);
            if (!(cfg.density > 0.0 && cfg.density <= 1.0))
                fail("key 'density' must lie in (0, 1]");
            cfg.has_density = true;
        } else if (key == "k_max") {
            cfg.k_max = parse_ll(key, value);
            if (cfg.k_max < 1) fail("key 'k_max' must be >= 1");
            cfg.has_k_max = true;
        } else if (key == "targets") {
            cfg.targets = parse_targets(value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "long") {
            cfg.long_mode = parse_bool(key, value);
        } else {
            fail("unknown key '" + key + "'");
        }
    }

    finalize(cfg, seen_global, overrides);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const CliOverrides* overrides) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    return parse_config(in, overrides);
}

}  // namespace dgmlab
