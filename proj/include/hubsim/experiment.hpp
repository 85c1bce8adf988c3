#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hubsim/metrics.hpp"
#include "hubsim/scenarios.hpp"

namespace hubsim {

// Environment variable that overrides the configured master seed.
inline constexpr const char* kSeedEnvVar = "HUBSIM_SEED";

struct ExperimentConfig {
    ProtocolKind protocol = ProtocolKind::elevator;
    ScenarioName scenario = ScenarioName::none;
    SimParams params;
    ScenarioTiming timing;
    std::uint32_t replications = 100;
    std::uint32_t jobs = 1;
    bool robustness = true;
    std::string output_dir = "out";

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

// Flat "key = value" lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Keys with c-derived defaults (h, l, s) follow c unless set explicitly.
// Used by parse_config and the CLI so that "c = 8" alone stays valid.
void apply_settings(ExperimentConfig& config, const std::vector<std::pair<std::string, std::string>>& settings);

struct SweepSeries {
    RemovalOrder order;
    ComponentKind component;
    std::vector<RobustnessPoint> points;
};

struct ReplicationResult {
    std::uint32_t replication = 0;
    std::vector<MetricsSnapshot> series;
    DegreeHistograms final_degrees;
    std::vector<SweepSeries> robustness;
};

// Called after every metric snapshot (including cycle 0).
using SnapshotObserver =
    std::function<void(const OverlayNetwork&, const GraphSnapshot&, const MetricsSnapshot&)>;

// Builds the initial network for a replication (k-out, or the growth seed
// network for Phenix).
OverlayNetwork make_network(const ExperimentConfig& config, std::uint32_t replication);

ReplicationResult run_replication(const ExperimentConfig& config, std::uint32_t replication,
                                  const SnapshotObserver& observer = {});

// Runs every replication on `config.jobs` worker threads. Results are
// ordered by replication index regardless of scheduling.
std::vector<ReplicationResult> run_replications(const ExperimentConfig& config);

// Scalar metrics in CSV order.
std::vector<std::pair<std::string, double>> scalar_metrics(const MetricsSnapshot& m);

// Formats a double with the shortest representation that round-trips.
std::string format_number(double value);

struct SummaryRow {
    std::uint32_t cycle = 0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

// Per (cycle, metric) mean and sample standard deviation across replications.
std::vector<SummaryRow> summarize(const std::vector<ReplicationResult>& results);

// CSV writers. Each writes a header row; row order is deterministic.
void write_metrics_csv(std::ostream& out, const std::vector<ReplicationResult>& results);
void write_degree_csv(std::ostream& out, const std::vector<ReplicationResult>& results, bool in_degree);
void write_robustness_csv(std::ostream& out, const std::vector<ReplicationResult>& results);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// Writes metrics.csv, indegree_final.csv, outdegree_final.csv,
// robustness.csv (when enabled), summary.csv and config.txt.
void write_run_outputs(const ExperimentConfig& config, const std::vector<ReplicationResult>& results);

// One run set per hub count; writes hubs_indegree.csv
// (h,replication,degree,count) and returns the results keyed by h.
std::map<std::uint32_t, std::vector<ReplicationResult>> sweep_hubs(const ExperimentConfig& config,
                                                                  const std::vector<std::uint32_t>& h_values);
void write_hub_sweep_csv(std::ostream& out, const std::map<std::uint32_t, std::vector<ReplicationResult>>& sweep);

// Closed forms (and Monte Carlo estimates for n <= 50) as printed by `analyze`.
void write_analysis(std::ostream& out, std::uint32_t n, std::uint32_t c, std::uint32_t h, std::uint32_t t,
                    std::uint64_t seed, std::uint64_t trials);

}  // namespace hubsim
