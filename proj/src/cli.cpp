#include "pollushield/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "pollushield/report_io.hpp"
#include "pollushield/scenarios.hpp"

namespace pollushield {

namespace {

enum class LogLevel { Off, Info, Debug };

LogLevel log_level_from_env() {
    const char* v = std::getenv("POLLUSHIELD_LOG");
    if (v == nullptr) return LogLevel::Info;
    const std::string s = v;
    if (s == "off") return LogLevel::Off;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

struct UnknownExperiment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Sweep {
    std::string key;
    std::vector<std::string> values;
};

Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw ConfigError("--sweep expects <key>=<v1,v2,...>, got '" + text + "'");
    Sweep s{text.substr(0, eq), {}};
    std::stringstream ss(text.substr(eq + 1));
    std::string v;
    while (std::getline(ss, v, ','))
        if (!v.empty()) s.values.push_back(v);
    if (s.values.empty()) throw ConfigError("--sweep lists no values");
    return s;
}

template <typename T>
T number(const std::string& text, const std::string& what) {
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size())
        throw ConfigError("invalid " + what + ": '" + text + "'");
    return v;
}

Policy policy_from(const std::string& text) {
    ScenarioConfig scratch;
    set_field(scratch, "policy", text);
    return scratch.policy;
}

/// Experiment knobs a sweep or flag may set. Returns false for keys that are
/// plain scenario fields.
bool apply_experiment_knob(ExperimentOverrides& o, const std::string& key,
                           const std::string& value) {
    if (key == "seed") o.seed = number<std::uint64_t>(value, key);
    else if (key == "rounds") o.rounds = number<std::int64_t>(value, key);
    else if (key == "n_peers") o.n_peers = number<std::uint32_t>(value, key);
    else if (key == "loss_rate") o.loss_rate = number<double>(value, key);
    else if (key == "malicious_fraction") o.malicious_fraction = number<double>(value, key);
    else if (key == "policy") o.policy = policy_from(value);
    else return false;
    return true;
}

struct Options {
    std::string experiment;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> rounds;
    std::string out_dir = "./out";
    std::optional<std::string> sweep;
};

std::vector<LabeledConfig> plan_runs(const Options& opt) {
    std::optional<Sweep> sweep;
    if (opt.sweep) sweep = parse_sweep(*opt.sweep);
    const std::vector<std::string> sweep_values =
        sweep ? sweep->values : std::vector<std::string>{""};

    std::vector<LabeledConfig> runs;
    for (const auto& value : sweep_values) {
        const std::string suffix = sweep ? "_" + sweep->key + value : "";
        if (!opt.experiment.empty()) {
            const auto id = parse_experiment_id(opt.experiment);
            if (!id) throw UnknownExperiment("unknown experiment id '" + opt.experiment + "'");
            ExperimentOverrides o;
            o.seed = opt.seed;
            o.rounds = opt.rounds;
            bool knob = false;
            if (sweep) knob = apply_experiment_knob(o, sweep->key, value);
            for (auto& lc : experiment_plan(*id, o)) {
                if (sweep && !knob) set_field(lc.config, sweep->key, value);
                lc.label += suffix;
                lc.config.name = lc.label;
                validate(lc.config);
                runs.push_back(std::move(lc));
            }
        } else {
            ScenarioConfig c = load_scenario(opt.scenario);
            if (opt.seed) c.seed = *opt.seed;
            if (opt.rounds) c.rounds = *opt.rounds;
            if (sweep) set_field(c, sweep->key, value);
            c.name += suffix;
            validate(c);
            runs.push_back({c.name, c});
        }
    }
    return runs;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trust management and pollution-attack simulator for P2P streaming"};
    app.require_subcommand(1);

    Options opt;
    auto add_source = [&](CLI::App* cmd) {
        auto* e = cmd->add_option("--experiment", opt.experiment, "Experiment id (e1..e6)");
        auto* s = cmd->add_option("--scenario", opt.scenario, "Scenario file");
        e->excludes(s);
        s->excludes(e);
        cmd->add_option("--seed", opt.seed, "Random seed (default 1)");
        cmd->add_option("--rounds", opt.rounds, "Measured rounds");
        cmd->add_option("--sweep", opt.sweep, "Run once per value: <key>=<v1,v2,...>");
    };
    auto* run = app.add_subcommand("run", "Run an experiment or scenario and write CSV files");
    add_source(run);
    run->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    auto* dump = app.add_subcommand("dump", "Print the scenario file(s) an invocation would run");
    add_source(dump);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadConfig;
    }
    if (opt.experiment.empty() && opt.scenario.empty()) {
        err << "error: one of --experiment or --scenario is required\n";
        return kExitBadConfig;
    }

    const LogLevel level = log_level_from_env();
    try {
        const auto runs = plan_runs(opt);
        if (dump->parsed()) {
            for (const auto& r : runs) out << serialize(r.config) << '\n';
            return kExitOk;
        }
        for (const auto& r : runs) {
            if (level == LogLevel::Debug)
                err << "[debug] running " << r.label << " (" << r.config.n_peers << " peers, "
                    << r.config.rounds << " rounds)\n";
            const MetricsReport report = run_scenario(r.config);
            const auto files = emit_csv(report, opt.out_dir);
            out << r.label << ": seed=" << report.meta.seed
                << " digest=" << report.meta.config_digest
                << " deliveries=" << report.deliveries
                << " mean_goodput=" << format_value(report.mean_goodput())
                << " files=" << files.size() << '\n';
            if (level == LogLevel::Debug)
                for (const auto& f : files) err << "[debug] wrote " << f.string() << '\n';
        }
    } catch (const UnknownExperiment& e) {
        if (level != LogLevel::Off) err << "error: " << e.what() << '\n';
        return kExitUnknownExperiment;
    } catch (const OutputError& e) {
        if (level != LogLevel::Off) err << "error: " << e.what() << '\n';
        return kExitOutputError;
    } catch (const ConfigError& e) {
        if (level != LogLevel::Off) err << "error: " << e.what() << '\n';
        return kExitBadConfig;
    } catch (const TrustError& e) {
        if (level != LogLevel::Off) err << "error: " << e.what() << '\n';
        return kExitBadConfig;
    }
    return kExitOk;
}

}  // namespace pollushield
