// Experiment driver: replicated simulation runs, hub-count sweeps, closed-form
// analysis and robustness sweeps.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hubsim/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct RunOptions {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::string> raw_settings;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
    cmd->set_help_flag("--help", "print this help and exit");
    cmd->add_option("--config", opts.config_file, "key = value config file");
    // Each flag appends to the override list so that later flags win.
    auto flag = [&](const char* name, const char* key, const char* help) {
        cmd->add_option_function<std::string>(
            name, [&opts, key](const std::string& v) { opts.overrides.emplace_back(key, v); }, help);
    };
    flag("--protocol", "protocol", "elevator | proofs | newscast | phenix");
    flag("--scenario", "scenario", "none | crash50 | churn | hub_attack | phenix_growth | phenix_churn");
    flag("--n", "n", "network size");
    flag("--c", "c", "cache size");
    flag("--h", "h", "hub count");
    flag("--cycles", "cycles", "cycles per replication");
    flag("--reps", "replications", "replications");
    flag("--seed", "seed", "master seed");
    flag("--out", "output_dir", "output directory");
    flag("--jobs", "jobs", "worker threads");
    cmd->add_option("--set", opts.raw_settings, "extra key=value settings");
}

hubsim::ExperimentConfig resolve_config(const RunOptions& opts) {
    hubsim::ExperimentConfig cfg;
    if (!opts.config_file.empty()) cfg = hubsim::load_config(opts.config_file);
    std::vector<std::pair<std::string, std::string>> settings = opts.overrides;
    for (const std::string& raw : opts.raw_settings) {
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw hubsim::ConfigError("--set expects key=value, got '" + raw + "'");
        settings.emplace_back(raw.substr(0, eq), raw.substr(eq + 1));
    }
    if (const char* env = std::getenv(hubsim::kSeedEnvVar); env != nullptr && *env != '\0') {
        settings.emplace_back("seed", env);
    }
    hubsim::apply_settings(cfg, settings);
    cfg.validate();
    return cfg;
}

std::vector<std::uint32_t> parse_hub_list(const std::string& text) {
    std::vector<std::uint32_t> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw hubsim::ConfigError("empty entry in --hubs");
        try {
            values.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        } catch (const std::exception&) {
            throw hubsim::ConfigError("invalid hub count '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hubsim: cycle-driven simulator for hub-sampling and peer-sampling overlays"};
    app.require_subcommand(1);
    // "--h" is the hub count, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "run replicated simulations and write CSV time series");
    add_run_options(run, run_opts);

    RunOptions sweep_opts;
    std::string hubs = "5,10,15,20";
    auto* sweep = app.add_subcommand("sweep-hubs", "final in-degree distributions for several hub counts");
    add_run_options(sweep, sweep_opts);
    sweep->add_option("--hubs", hubs, "comma-separated hub counts");

    RunOptions robust_opts;
    auto* robust = app.add_subcommand("robustness", "node-removal sweeps on the final network only");
    add_run_options(robust, robust_opts);

    std::uint32_t an_n = 1000, an_c = 20, an_h = 10, an_t = 20;
    std::uint64_t an_seed = 1, an_trials = 100000;
    auto* analyze = app.add_subcommand("analyze", "closed-form preferential-link and hub-maintenance probabilities");
    analyze->set_help_flag("--help", "print this help and exit");
    analyze->add_option("--n", an_n, "network size");
    analyze->add_option("--c", an_c, "cache size");
    analyze->add_option("--h", an_h, "hub count");
    analyze->add_option("--t", an_t, "iterations");
    analyze->add_option("--seed", an_seed, "Monte Carlo seed");
    analyze->add_option("--trials", an_trials, "Monte Carlo trials (used when n <= 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            const auto cfg = resolve_config(run_opts);
            const auto results = hubsim::run_replications(cfg);
            hubsim::write_run_outputs(cfg, results);
            std::cerr << "wrote " << cfg.output_dir << " (" << results.size() << " replications)\n";
        } else if (*sweep) {
            auto cfg = resolve_config(sweep_opts);
            const auto h_values = parse_hub_list(hubs);
            for (std::uint32_t h : h_values) {
                auto probe = cfg;
                probe.params.h = h;
                probe.validate();
            }
            const auto results = hubsim::sweep_hubs(cfg, h_values);
            std::filesystem::create_directories(cfg.output_dir);
            std::ofstream out(std::filesystem::path(cfg.output_dir) / "hubs_indegree.csv", std::ios::binary);
            if (!out) throw std::runtime_error("cannot write hubs_indegree.csv in " + cfg.output_dir);
            hubsim::write_hub_sweep_csv(out, results);
        } else if (*robust) {
            auto cfg = resolve_config(robust_opts);
            cfg.robustness = true;
            const auto results = hubsim::run_replications(cfg);
            std::filesystem::create_directories(cfg.output_dir);
            std::ofstream out(std::filesystem::path(cfg.output_dir) / "robustness.csv", std::ios::binary);
            if (!out) throw std::runtime_error("cannot write robustness.csv in " + cfg.output_dir);
            hubsim::write_robustness_csv(out, results);
        } else if (*analyze) {
            hubsim::write_analysis(std::cout, an_n, an_c, an_h, an_t, an_seed, an_trials);
        }
    } catch (const hubsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
