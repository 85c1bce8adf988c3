#include "hubsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hubsim/analysis.hpp"

namespace hubsim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("invalid boolean '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::string_view order_name(RemovalOrder o) { return o == RemovalOrder::random ? "random" : "targeted"; }
std::string_view component_name(ComponentKind k) { return k == ComponentKind::weak ? "weak" : "strong"; }

}  // namespace

void ExperimentConfig::validate() const {
    params.validate();
    if (replications == 0) throw ConfigError("replications must be >= 1");
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    (void)make_plan(scenario, protocol, params, timing);
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    auto& p = cfg.params;
    auto u32 = [&] { return parse_unsigned<std::uint32_t>(key, value); };
    if (key == "protocol") cfg.protocol = parse_protocol(value);
    else if (key == "scenario") cfg.scenario = parse_scenario(value);
    else if (key == "n") p.n = u32();
    else if (key == "c") p.c = u32();
    else if (key == "h") p.h = u32();
    else if (key == "l") p.l = u32();
    else if (key == "s") p.s = u32();
    else if (key == "gamma") p.gamma = u32();
    else if (key == "tau") p.tau = u32();
    else if (key == "maxsize_buffer_backward") p.maxsize_buffer_backward = u32();
    else if (key == "cycles") p.cycles = u32();
    else if (key == "seed") p.seed = parse_unsigned<std::uint64_t>(key, value);
    else if (key == "metric_period") p.metric_period = u32();
    else if (key == "crash_cycle") cfg.timing.crash_cycle = u32();
    else if (key == "churn_start") cfg.timing.churn_start = u32();
    else if (key == "churn_end") cfg.timing.churn_end = u32();
    else if (key == "replications") cfg.replications = u32();
    else if (key == "jobs") cfg.jobs = u32();
    else if (key == "robustness") cfg.robustness = parse_bool(key, value);
    else if (key == "output_dir") cfg.output_dir = std::string(value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_settings(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& settings) {
    for (const auto& [key, value] : settings) {
        if (key != "c") continue;
        apply_setting(cfg, key, value);
        const std::uint32_t half = std::max<std::uint32_t>(1, cfg.params.c / 2);
        cfg.params.h = cfg.params.l = cfg.params.s = half;
    }
    for (const auto& [key, value] : settings) {
        if (key != "c") apply_setting(cfg, key, value);
    }
}

ExperimentConfig parse_config(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> settings;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        settings.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    ExperimentConfig cfg;
    apply_settings(cfg, settings);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    std::ostringstream out;
    out << "protocol = " << to_string(cfg.protocol) << '\n'
        << "scenario = " << to_string(cfg.scenario) << '\n'
        << "n = " << p.n << '\n'
        << "c = " << p.c << '\n'
        << "h = " << p.h << '\n'
        << "l = " << p.l << '\n'
        << "s = " << p.s << '\n'
        << "gamma = " << p.gamma << '\n'
        << "tau = " << p.tau << '\n'
        << "maxsize_buffer_backward = " << p.maxsize_buffer_backward << '\n'
        << "cycles = " << p.cycles << '\n'
        << "seed = " << p.seed << '\n'
        << "metric_period = " << p.metric_period << '\n'
        << "crash_cycle = " << cfg.timing.crash_cycle << '\n'
        << "churn_start = " << cfg.timing.churn_start << '\n'
        << "churn_end = " << cfg.timing.churn_end << '\n'
        << "replications = " << cfg.replications << '\n'
        << "jobs = " << cfg.jobs << '\n'
        << "robustness = " << (cfg.robustness ? "true" : "false") << '\n'
        << "output_dir = " << cfg.output_dir << '\n';
    return out.str();
}

OverlayNetwork make_network(const ExperimentConfig& cfg, std::uint32_t replication) {
    if (cfg.protocol == ProtocolKind::phenix) {
        return init_complete(cfg.protocol, cfg.params, std::min(kGrowthSeedSize, cfg.params.n), replication);
    }
    return init_k_out(cfg.protocol, cfg.params, replication);
}

ReplicationResult run_replication(const ExperimentConfig& cfg, std::uint32_t replication,
                                  const SnapshotObserver& observer) {
    const SimParams& params = cfg.params;
    OverlayNetwork net = make_network(cfg, replication);
    ScenarioRunner scenario(make_plan(cfg.scenario, cfg.protocol, params, cfg.timing),
                            Rng::derive(params.seed, replication, StreamPurpose::scenario));

    ReplicationResult result;
    result.replication = replication;
    auto snapshot = [&] {
        const GraphSnapshot snap = take_snapshot(net);
        result.series.push_back(compute_metrics(snap));
        if (observer) observer(net, snap, result.series.back());
    };

    snapshot();
    while (net.cycle() < params.cycles) {
        scenario.apply_due(net);
        step_cycle(net);
        if (net.cycle() % params.metric_period == 0) snapshot();
    }

    const GraphSnapshot final_snap = take_snapshot(net);
    result.final_degrees = degree_distributions(final_snap);
    if (cfg.robustness) {
        Rng rng = Rng::derive(params.seed, replication, StreamPurpose::metrics);
        for (RemovalOrder order : {RemovalOrder::random, RemovalOrder::targeted}) {
            const auto seq = removal_order(final_snap, order, rng);
            for (ComponentKind kind : {ComponentKind::weak, ComponentKind::strong}) {
                result.robustness.push_back({order, kind, robustness_sweep(final_snap, seq, kind)});
            }
        }
    }
    return result;
}

std::vector<ReplicationResult> run_replications(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ReplicationResult> results(cfg.replications);
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::uint32_t r = next++; r < cfg.replications; r = next++) {
            try {
                results[r] = run_replication(cfg, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::uint32_t threads = std::min(cfg.jobs, cfg.replications);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::uint32_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<std::pair<std::string, double>> scalar_metrics(const MetricsSnapshot& m) {
    return {
        {"alive", static_cast<double>(m.alive)},
        {"average_path_length", m.average_path_length},
        {"clustering", m.clustering},
        {"diameter", static_cast<double>(m.diameter)},
        {"edges", static_cast<double>(m.edges)},
        {"full_in_degree_nodes", static_cast<double>(m.full_in_degree_nodes)},
        {"largest_strong_component", static_cast<double>(m.largest_strong)},
        {"largest_weak_component", static_cast<double>(m.largest_weak)},
        {"max_in_degree", static_cast<double>(m.max_in_degree)},
        {"mean_in_degree", m.mean_in_degree},
    };
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::vector<SummaryRow> summarize(const std::vector<ReplicationResult>& results) {
    std::map<std::pair<std::uint32_t, std::string>, std::vector<double>> columns;
    for (const auto& r : results) {
        for (const auto& m : r.series) {
            for (auto& [name, value] : scalar_metrics(m)) columns[{m.cycle, name}].push_back(value);
        }
    }
    std::vector<SummaryRow> rows;
    rows.reserve(columns.size());
    for (const auto& [key, values] : columns) {
        SummaryRow row;
        row.cycle = key.first;
        row.metric = key.second;
        row.count = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
            double sq = 0.0;
            for (double v : values) sq += (v - row.mean) * (v - row.mean);
            row.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<ReplicationResult>& results) {
    out << "replication,cycle,metric,key,value\n";
    for (const auto& r : results) {
        for (const auto& m : r.series) {
            // Alphabetical metric order; histograms interleave by name.
            std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> rows;
            for (auto& [name, value] : scalar_metrics(m)) rows.push_back({name, {{"", format_number(value)}}});
            for (const auto* hist : {&m.in_degree, &m.out_degree}) {
                std::vector<std::pair<std::string, std::string>> entries;
                for (const auto& [degree, count] : *hist) entries.emplace_back(std::to_string(degree), std::to_string(count));
                rows.push_back({hist == &m.in_degree ? "in_degree" : "out_degree", std::move(entries)});
            }
            std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (const auto& [name, entries] : rows) {
                for (const auto& [key, value] : entries) {
                    out << r.replication << ',' << m.cycle << ',' << name << ',' << key << ',' << value << '\n';
                }
            }
        }
    }
}

void write_degree_csv(std::ostream& out, const std::vector<ReplicationResult>& results, bool in_degree) {
    out << "replication,degree,count\n";
    for (const auto& r : results) {
        const Histogram& hist = in_degree ? r.final_degrees.in : r.final_degrees.out;
        for (const auto& [degree, count] : hist) out << r.replication << ',' << degree << ',' << count << '\n';
    }
}

void write_robustness_csv(std::ostream& out, const std::vector<ReplicationResult>& results) {
    out << "replication,order,component,removed,outside\n";
    for (const auto& r : results) {
        for (const auto& s : r.robustness) {
            for (const auto& p : s.points) {
                out << r.replication << ',' << order_name(s.order) << ',' << component_name(s.component) << ','
                    << p.removed << ',' << p.outside << '\n';
            }
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "cycle,metric,mean,stddev,count\n";
    for (const auto& row : rows) {
        out << row.cycle << ',' << row.metric << ',' << format_number(row.mean) << ',' << format_number(row.stddev)
            << ',' << row.count << '\n';
    }
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_run_outputs(const ExperimentConfig& cfg, const std::vector<ReplicationResult>& results) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    {
        auto out = open_output(dir / "config.txt");
        out << serialize_config(cfg);
    }
    {
        auto out = open_output(dir / "metrics.csv");
        write_metrics_csv(out, results);
    }
    {
        auto out = open_output(dir / "indegree_final.csv");
        write_degree_csv(out, results, true);
    }
    {
        auto out = open_output(dir / "outdegree_final.csv");
        write_degree_csv(out, results, false);
    }
    if (cfg.robustness) {
        auto out = open_output(dir / "robustness.csv");
        write_robustness_csv(out, results);
    }
    {
        auto out = open_output(dir / "summary.csv");
        write_summary_csv(out, summarize(results));
    }
}

std::map<std::uint32_t, std::vector<ReplicationResult>> sweep_hubs(const ExperimentConfig& cfg,
                                                                  const std::vector<std::uint32_t>& h_values) {
    if (cfg.protocol != ProtocolKind::elevator) throw ConfigError("sweep-hubs requires the elevator protocol");
    std::map<std::uint32_t, std::vector<ReplicationResult>> sweep;
    for (std::uint32_t h : h_values) {
        ExperimentConfig run = cfg;
        run.params.h = h;
        run.robustness = false;
        sweep[h] = run_replications(run);
    }
    return sweep;
}

void write_hub_sweep_csv(std::ostream& out, const std::map<std::uint32_t, std::vector<ReplicationResult>>& sweep) {
    out << "h,replication,degree,count\n";
    for (const auto& [h, results] : sweep) {
        for (const auto& r : results) {
            for (const auto& [degree, count] : r.final_degrees.in) {
                out << h << ',' << r.replication << ',' << degree << ',' << count << '\n';
            }
        }
    }
}

void write_analysis(std::ostream& out, std::uint32_t n, std::uint32_t c, std::uint32_t h, std::uint32_t t,
                    std::uint64_t seed, std::uint64_t trials) {
    const LogProbability once = p_no_preferential_links(n, c, 1);
    const LogProbability after_t = p_no_preferential_links(n, c, t);
    const HubMaintenance keep = p_hub_set_maintained(n, c, h);

    out << "quantity,n,c,h,t,closed_form,log10,monte_carlo,mc_stderr,ci95_low,ci95_high\n";
    auto row = [&](std::string_view name, std::uint32_t tt, const std::string& closed, double log10,
                   const MonteCarloEstimate* mc) {
        out << name << ',' << n << ',' << c << ',' << h << ',' << tt << ',' << closed << ','
            << (std::isinf(log10) ? std::string("-inf") : format_number(log10));
        if (mc != nullptr) {
            out << ',' << format_number(mc->mean) << ',' << format_number(mc->stddev) << ','
                << format_number(mc->mean - 1.96 * mc->stddev) << ',' << format_number(mc->mean + 1.96 * mc->stddev);
        } else {
            out << ",,,,";
        }
        out << '\n';
    };

    std::optional<MonteCarloEstimate> mc_once, mc_broken;
    if (n <= 50) {
        Rng rng = Rng::derive(seed, 0, StreamPurpose::analysis);
        mc_once = simulate_no_preferential_links(n, c, trials, rng);
        mc_broken = simulate_hub_set_broken(n, c, h, trials, rng);
    }
    row("p_no_preferential_links", 1, once.to_string(), once.log10, mc_once ? &*mc_once : nullptr);
    row("p_no_preferential_links", t, after_t.to_string(), after_t.log10, nullptr);
    row("p_hub_set_broken", 1, keep.complement.to_string(), keep.complement.log10, mc_broken ? &*mc_broken : nullptr);
    row("p_hub_set_maintained", 1, format_number(keep.probability), std::log10(keep.probability), nullptr);
}

}  // namespace hubsim
