// Desk-scale acceptance checks. Each criterion prints one PASS/FAIL line.
//
//   hubsim_acceptance            run every criterion
//   hubsim_acceptance 3 7        run criteria 3 and 7
//
// Exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "graph_oracles.hpp"
#include "hubsim/analysis.hpp"
#include "hubsim/experiment.hpp"

namespace {

using namespace hubsim;
namespace fs = std::filesystem;

constexpr std::uint32_t kReplications = 5;

struct Outcome {
    bool pass = false;
    std::string detail;
};

// What the criteria need from one metric snapshot.
struct Sample {
    std::uint32_t cycle = 0;
    std::size_t alive = 0;
    std::vector<NodeId> full_nodes;
    std::uint32_t diameter = 0;
    double apl = 0.0;
    double clustering = 0.0;
    double mean_in = 0.0;
    // Non-hub nodes whose cache is not exactly the set of full-in-degree nodes.
    std::size_t off_star = 0;
};

using Series = std::vector<Sample>;

ExperimentConfig desk_config(ProtocolKind protocol, ScenarioName scenario, std::uint32_t cycles) {
    ExperimentConfig cfg;
    cfg.protocol = protocol;
    cfg.scenario = scenario;
    cfg.params.cycles = cycles;
    cfg.replications = kReplications;
    cfg.robustness = false;
    cfg.validate();
    return cfg;
}

std::size_t count_off_star(const OverlayNetwork& net, const std::vector<NodeId>& hubs) {
    const std::set<NodeId> hub_set(hubs.begin(), hubs.end());
    std::size_t off = 0;
    for (NodeId v : net.alive()) {
        if (hub_set.contains(v)) continue;
        const auto links = net.out_links(v);
        if (std::set<NodeId>(links.begin(), links.end()) != hub_set) ++off;
    }
    return off;
}

// Runs every replication (in parallel) and keeps one Sample per snapshot.
std::vector<Series> run_series(const ExperimentConfig& cfg, bool check_star = false) {
    std::vector<Series> out(cfg.replications);
    const unsigned workers = std::max(1u, std::min(cfg.replications, std::thread::hardware_concurrency()));
    std::mutex mutex;
    std::uint32_t next = 0;
    auto work = [&] {
        for (;;) {
            std::uint32_t rep = 0;
            {
                std::lock_guard lock(mutex);
                if (next == cfg.replications) return;
                rep = next++;
            }
            Series& series = out[rep];
            run_replication(cfg, rep, [&](const OverlayNetwork& net, const GraphSnapshot& snap, const MetricsSnapshot& m) {
                Sample s{m.cycle, m.alive, full_in_degree_nodes(snap), m.diameter, m.average_path_length,
                         m.clustering, m.mean_in_degree, 0};
                if (check_star) s.off_star = count_off_star(net, s.full_nodes);
                series.push_back(std::move(s));
            });
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    pool.clear();
    return out;
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

// Elevator without failures is shared by criteria 1-3.
const std::vector<Series>& elevator_baseline() {
    static const auto runs = run_series(desk_config(ProtocolKind::elevator, ScenarioName::none, 300));
    return runs;
}

double mean_after(const Series& s, std::uint32_t from, double Sample::*field) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& x : s) {
        if (x.cycle < from) continue;
        sum += x.*field;
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

Outcome hub_emergence() {
    std::ostringstream detail;
    bool pass = true;
    for (std::size_t r = 0; r < elevator_baseline().size(); ++r) {
        const Series& s = elevator_baseline()[r];
        std::vector<NodeId> reference;
        std::size_t bad = 0, checked = 0;
        for (const auto& x : s) {
            if (x.cycle < 200) continue;
            ++checked;
            if (x.full_nodes.size() != 10 || x.alive != 1000) ++bad;
            if (reference.empty()) reference = x.full_nodes;
            if (x.full_nodes != reference) ++bad;
        }
        if (bad > 0 || checked == 0) pass = false;
        detail << "rep" << r << ": " << reference.size() << " hubs, " << bad << "/" << checked << " bad snapshots; ";
    }
    return {pass, detail.str()};
}

Outcome diameter_two() {
    std::ostringstream detail;
    bool pass = true;
    double worst_apl = 0.0;
    std::uint32_t worst_diameter = 0, best_diameter = 99;
    for (const Series& s : elevator_baseline()) {
        for (const auto& x : s) {
            if (x.cycle < 200) continue;
            worst_apl = std::max(worst_apl, x.apl);
            worst_diameter = std::max(worst_diameter, x.diameter);
            best_diameter = std::min(best_diameter, x.diameter);
            if (x.diameter != 2 || !(x.apl < 2.0)) pass = false;
        }
    }
    detail << "diameter range [" << best_diameter << ", " << worst_diameter << "], max APL " << fmt(worst_apl, 6);
    return {pass, detail.str()};
}

Outcome clustering() {
    const auto proofs = run_series(desk_config(ProtocolKind::proofs, ScenarioName::none, 300));
    const auto newscast = run_series(desk_config(ProtocolKind::newscast, ScenarioName::none, 300));
    std::ostringstream detail;
    bool pass = true;
    detail << "elevator";
    for (const Series& s : elevator_baseline()) {
        const double c = mean_after(s, 200, &Sample::clustering);
        pass = pass && c >= 0.5 && c <= 0.7;
        detail << ' ' << fmt(c);
    }
    detail << "; proofs";
    for (const Series& s : proofs) {
        const double c = mean_after(s, 200, &Sample::clustering);
        pass = pass && c < 0.1;
        detail << ' ' << fmt(c);
    }
    detail << "; newscast";
    for (const Series& s : newscast) {
        const double c = mean_after(s, 200, &Sample::clustering);
        pass = pass && c < 0.1;
        detail << ' ' << fmt(c);
    }
    return {pass, detail.str()};
}

Outcome baseline_paths() {
    std::ostringstream detail;
    bool pass = true;
    struct Target {
        ProtocolKind protocol;
        double apl_low, apl_high;
        std::uint32_t diam_low, diam_high;
    };
    for (const Target& t : {Target{ProtocolKind::proofs, 2.0, 2.3, 3, 3}, Target{ProtocolKind::newscast, 2.4, 2.8, 3, 5}}) {
        const auto runs = run_series(desk_config(t.protocol, ScenarioName::none, 300));
        detail << to_string(t.protocol) << " APL";
        std::uint32_t lo = 99, hi = 0;
        for (const Series& s : runs) {
            const double apl = mean_after(s, 200, &Sample::apl);
            pass = pass && apl >= t.apl_low && apl <= t.apl_high;
            detail << ' ' << fmt(apl);
            for (const auto& x : s) {
                if (x.cycle < 200) continue;
                lo = std::min(lo, x.diameter);
                hi = std::max(hi, x.diameter);
            }
        }
        pass = pass && lo >= t.diam_low && hi <= t.diam_high;
        detail << " diameter [" << lo << ", " << hi << "]; ";
    }
    return {pass, detail.str()};
}

Outcome crash_resilience() {
    const auto runs = run_series(desk_config(ProtocolKind::elevator, ScenarioName::crash50, 550));
    std::ostringstream detail;
    bool pass = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const Sample& last = runs[r].back();
        std::uint32_t first_ok = 0;
        for (const auto& x : runs[r]) {
            if (x.cycle > 500 && x.alive == 500 && x.full_nodes.size() == 10 && x.diameter == 2) {
                first_ok = x.cycle;
                break;
            }
        }
        const bool ok = last.cycle == 550 && last.alive == 500 && last.full_nodes.size() == 10 && last.diameter == 2;
        pass = pass && ok;
        detail << "rep" << r << ": " << last.full_nodes.size() << " hubs of in-degree 499, diameter " << last.diameter;
        if (first_ok != 0) detail << " (from cycle " << first_ok << ")";
        detail << "; ";
    }
    return {pass, detail.str()};
}

Outcome hub_attack_resilience() {
    const auto runs = run_series(desk_config(ProtocolKind::elevator, ScenarioName::hub_attack, 550));
    std::ostringstream detail;
    bool pass = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<NodeId> before;
        for (const auto& x : runs[r]) {
            if (x.cycle == 500) before = x.full_nodes;
        }
        const Sample& last = runs[r].back();
        std::size_t reused = 0;
        for (NodeId id : last.full_nodes) reused += std::count(before.begin(), before.end(), id);
        const bool ok = before.size() == 10 && last.alive == 990 && last.full_nodes.size() == 10 && reused == 0;
        pass = pass && ok;
        detail << "rep" << r << ": " << last.full_nodes.size() << " hubs of in-degree 989, " << reused
               << " original ids; ";
    }
    return {pass, detail.str()};
}

Outcome churn() {
    const auto proofs = run_series(desk_config(ProtocolKind::proofs, ScenarioName::churn, 400));
    const auto elevator = run_series(desk_config(ProtocolKind::elevator, ScenarioName::churn, 400));
    std::ostringstream detail;
    bool pass = true;
    double lo = 1e9, hi = 0.0;
    for (const Series& s : proofs) {
        for (const auto& x : s) {
            if (x.cycle < 270) continue;
            lo = std::min(lo, x.mean_in);
            hi = std::max(hi, x.mean_in);
        }
    }
    pass = lo >= 8.0 && hi <= 12.0;
    detail << "proofs mean in-degree in [" << fmt(lo) << ", " << fmt(hi) << "]; elevator snapshots with 10 hubs:";
    for (const Series& s : elevator) {
        std::size_t good = 0, total = 0;
        for (const auto& x : s) {
            if (x.cycle < 270) continue;
            ++total;
            good += x.full_nodes.size() == 10;
        }
        pass = pass && good == total;
        detail << ' ' << good << '/' << total;
    }
    return {pass, detail.str()};
}

Outcome multi_star() {
    ExperimentConfig cfg = desk_config(ProtocolKind::elevator, ScenarioName::none, 200);
    cfg.params.h = 20;
    cfg.params.metric_period = 100;
    const auto runs = run_series(cfg, true);
    std::ostringstream detail;
    bool pass = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const Sample& last = runs[r].back();
        const bool ok = last.full_nodes.size() == 20 && last.off_star == 0;
        pass = pass && ok;
        detail << "rep" << r << ": " << last.full_nodes.size() << " full hubs, " << last.off_star
               << " non-hubs off the hub set; ";
    }
    return {pass, detail.str()};
}

Outcome closed_forms() {
    const double once = p_no_preferential_links(1000, 20, 1).value();
    const auto twenty = p_no_preferential_links(1000, 20, 20);
    const auto keep = p_hub_set_maintained(1000, 20, 10);
    const bool once_ok = std::abs(once - 0.025) <= 5e-4;
    const bool twenty_ok = std::abs(std::round(twenty.log10) - (-34.0)) <= 1.0;
    const bool complement_ok = std::abs(std::round(keep.complement.log10) - (-39.0)) <= 1.0;

    Rng rng = Rng::derive(1, 0, StreamPurpose::analysis);
    const auto mc_once = simulate_no_preferential_links(30, 2, 100000, rng);
    const double cf_once = p_no_preferential_links(30, 2, 1).value();
    const auto mc_broken = simulate_hub_set_broken(12, 4, 2, 1000000, rng);
    const double cf_broken = p_hub_set_maintained(12, 4, 2).complement.value();
    const bool mc_ok = std::abs(mc_once.mean - cf_once) <= 3 * mc_once.stddev &&
                       std::abs(mc_broken.mean - cf_broken) <= 3 * mc_broken.stddev;

    std::ostringstream detail;
    detail << "t=1: " << fmt(once, 6) << (once_ok ? "" : " (outside 0.025 +/- 5e-4)") << "; t=20: "
           << twenty.to_string() << (twenty_ok ? "" : " (exponent off)") << "; complement: "
           << keep.complement.to_string() << (complement_ok ? "" : " (exponent off)") << "; MC "
           << fmt(mc_once.mean, 5) << " vs " << fmt(cf_once, 5) << ", " << fmt(mc_broken.mean, 4) << " vs "
           << fmt(cf_broken, 4) << (mc_ok ? "" : " (outside 3 sigma)");
    return {once_ok && twenty_ok && complement_ok && mc_ok, detail.str()};
}

Outcome metric_oracles() {
    Rng rng(20240);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.below(39));
        const double p = 0.02 + 0.2 * rng.uniform01();
        const auto g = test::random_graph(n, p, rng);
        const std::string mismatch = test::oracle_mismatch(g, rng);
        if (!mismatch.empty()) return {false, "graph " + std::to_string(trial) + ": " + mismatch};
    }
    return {true, "50 random directed graphs (n <= 40) agree with the reference implementations"};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / ("hubsim_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(base);
    const std::vector<std::pair<std::string, int>> runs{{"a", 1}, {"b", 1}, {"c", 3}};
    for (const auto& [name, jobs] : runs) {
        const std::string cmd = std::string(HUBSIM_CLI) +
                                " run --n 300 --c 20 --cycles 60 --reps 3 --seed 5 --scenario crash50 --set crash_cycle=30"
                                " --jobs " + std::to_string(jobs) + " --out " + (base / name).string() + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
    }
    std::size_t compared = 0;
    for (const char* file : {"metrics.csv", "summary.csv", "indegree_final.csv", "outdegree_final.csv", "robustness.csv"}) {
        const std::string a = read_file(base / "a" / file);
        if (a.empty()) return {false, std::string(file) + " missing"};
        if (a != read_file(base / "b" / file)) return {false, std::string(file) + " differs between identical runs"};
        if (a != read_file(base / "c" / file)) return {false, std::string(file) + " differs between --jobs 1 and 3"};
        ++compared;
    }
    fs::remove_all(base);
    return {true, std::to_string(compared) + " CSV files byte-identical across reruns and job counts"};
}

Outcome phenix_tail() {
    ExperimentConfig cfg = desk_config(ProtocolKind::phenix, ScenarioName::phenix_growth, 600);
    cfg.params.metric_period = 600;
    cfg.robustness = false;
    std::ostringstream detail;
    bool pass = true;
    for (std::uint32_t r = 0; r < cfg.replications; ++r) {
        const auto result = run_replication(cfg, r);
        std::vector<std::uint32_t> degrees;
        for (const auto& [d, k] : result.final_degrees.in) degrees.insert(degrees.end(), k, d);
        const std::uint32_t median = degrees[degrees.size() / 2];
        const std::uint32_t max = degrees.back();

        // Counts in bins [2^b, 2^(b+1)); the tail runs from the fullest bin
        // to the bin holding the maximum.
        std::vector<std::uint64_t> bins;
        for (std::uint32_t d : degrees) {
            if (d == 0) continue;
            const auto b = static_cast<std::size_t>(std::bit_width(d) - 1);
            if (bins.size() <= b) bins.resize(b + 1, 0);
            ++bins[b];
        }
        const auto mode = static_cast<std::size_t>(std::max_element(bins.begin(), bins.end()) - bins.begin());
        bool decreasing = true;
        for (std::size_t b = mode + 1; b < bins.size(); ++b) decreasing = decreasing && bins[b] < bins[b - 1];

        const bool ok = degrees.size() == 1000 && max >= 10 * median && decreasing;
        pass = pass && ok;
        detail << "rep" << r << ": max " << max << " median " << median << " tail";
        for (std::size_t b = mode; b < bins.size(); ++b) detail << ' ' << bins[b];
        detail << (decreasing ? "" : " (not strictly decreasing)") << "; ";
    }
    return {pass, detail.str()};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "hub emergence", hub_emergence},
        {2, "diameter two", diameter_two},
        {3, "clustering", clustering},
        {4, "baseline path lengths", baseline_paths},
        {5, "crash resilience", crash_resilience},
        {6, "hub-attack resilience", hub_attack_resilience},
        {7, "churn", churn},
        {8, "multi-star degeneracy", multi_star},
        {9, "closed forms", closed_forms},
        {10, "metric oracles", metric_oracles},
        {11, "determinism", determinism},
        {12, "phenix heavy tail", phenix_tail},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    bool all_pass = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.id)) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all_pass = all_pass && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << std::endl;
    }
    return all_pass ? 0 : 1;
}
