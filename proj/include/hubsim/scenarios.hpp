#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "hubsim/overlay.hpp"

namespace hubsim {

enum class ScenarioName { none, crash50, churn, hub_attack, phenix_growth, phenix_churn };

std::string_view to_string(ScenarioName name);
ScenarioName parse_scenario(std::string_view name);

// Number of nodes a growing (Phenix) network starts from.
inline constexpr std::uint32_t kGrowthSeedSize = 20;
inline constexpr std::uint32_t kChurnReplacementDegree = 20;

struct Crash {
    double fraction = 0.5;
};
struct Churn {
    double fraction = 0.1;
    std::uint32_t replacement_degree = 20;
};
struct HubAttack {
    std::uint32_t count = 10;
};
// Adds round(max(0, N(mean, stddev))) joining nodes, never exceeding `cap` alive.
struct Grow {
    double mean = 2.0;
    double stddev = 1.0;
    std::uint32_t cap = 1000;
};
// Removes round(max(0, N(mean, stddev))) random alive nodes.
struct PhenixChurn {
    double mean = 0.0;
    double stddev = 1.0;
};

using EventKind = std::variant<Crash, Churn, HubAttack, Grow, PhenixChurn>;

struct ScenarioEvent {
    std::uint32_t cycle = 0;
    EventKind kind;
};

// Timing of the failure contexts. Defaults match a 1000-cycle run.
struct ScenarioTiming {
    std::uint32_t crash_cycle = 500;
    std::uint32_t churn_start = 250;
    std::uint32_t churn_end = 750;  // exclusive

    bool operator==(const ScenarioTiming&) const = default;
};

struct ScenarioPlan {
    ScenarioName name = ScenarioName::none;
    std::vector<ScenarioEvent> events;  // sorted by cycle
};

// Events are only scheduled for cycles < params.cycles. Growth events are
// added for every cycle when the protocol is Phenix.
ScenarioPlan make_plan(ScenarioName name, ProtocolKind protocol, const SimParams& params,
                       const ScenarioTiming& timing = {});

void apply_crash(OverlayNetwork& net, double fraction, Rng& rng);
void apply_churn_tick(OverlayNetwork& net, double fraction, std::uint32_t replacement_degree, Rng& rng);
// Returns the removed ids.
std::vector<NodeId> apply_hub_attack(OverlayNetwork& net, std::uint32_t count);
// Returns the number of nodes added.
std::uint32_t phenix_growth_tick(OverlayNetwork& net, Rng& rng, const Grow& grow = {});
// Returns the number of nodes removed.
std::uint32_t phenix_churn_tick(OverlayNetwork& net, Rng& rng, const PhenixChurn& churn = {});

// round(max(0, N(mean, stddev))).
std::uint32_t clamped_normal_count(Rng& rng, double mean, double stddev);

// Creates a node with `degree` distinct uniform random alive ids as its cache
// (runs the Phenix join procedure for Phenix networks).
NodeId join_node(OverlayNetwork& net, std::uint32_t degree, Rng& rng);

// Applies plan events whose cycle equals net.cycle(), in plan order.
class ScenarioRunner {
public:
    ScenarioRunner(ScenarioPlan plan, Rng rng) : plan_(std::move(plan)), rng_(rng) {}

    void apply_due(OverlayNetwork& net);
    const ScenarioPlan& plan() const { return plan_; }

private:
    ScenarioPlan plan_;
    Rng rng_;
    std::size_t next_ = 0;
};

}  // namespace hubsim
