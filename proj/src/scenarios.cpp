#include "hubsim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hubsim/metrics.hpp"
#include "hubsim/protocols.hpp"

namespace hubsim {

std::string_view to_string(ScenarioName name) {
    switch (name) {
        case ScenarioName::none: return "none";
        case ScenarioName::crash50: return "crash50";
        case ScenarioName::churn: return "churn";
        case ScenarioName::hub_attack: return "hub_attack";
        case ScenarioName::phenix_growth: return "phenix_growth";
        case ScenarioName::phenix_churn: return "phenix_churn";
    }
    return "unknown";
}

ScenarioName parse_scenario(std::string_view name) {
    for (auto s : {ScenarioName::none, ScenarioName::crash50, ScenarioName::churn, ScenarioName::hub_attack,
                   ScenarioName::phenix_growth, ScenarioName::phenix_churn}) {
        if (to_string(s) == name) return s;
    }
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

ScenarioPlan make_plan(ScenarioName name, ProtocolKind protocol, const SimParams& params,
                       const ScenarioTiming& timing) {
    const bool growing = protocol == ProtocolKind::phenix;
    const bool phenix_only = name == ScenarioName::phenix_growth || name == ScenarioName::phenix_churn;
    if (phenix_only && !growing) {
        throw ConfigError("scenario '" + std::string(to_string(name)) + "' requires the phenix protocol");
    }
    if (growing && name == ScenarioName::churn) {
        throw ConfigError("phenix churn is scenario 'phenix_churn'");
    }
    if (timing.churn_start > timing.churn_end) throw ConfigError("churn_start must be <= churn_end");

    ScenarioPlan plan;
    plan.name = name;
    for (std::uint32_t t = 0; t < params.cycles; ++t) {
        if (growing) {
            plan.events.push_back({t, Grow{2.0, 1.0, params.n}});
            if (name == ScenarioName::phenix_churn) plan.events.push_back({t, PhenixChurn{0.0, 1.0}});
        }
        if (name == ScenarioName::churn && t >= timing.churn_start && t < timing.churn_end) {
            plan.events.push_back({t, Churn{0.1, std::min(kChurnReplacementDegree, params.c)}});
        }
        if (t == timing.crash_cycle) {
            if (name == ScenarioName::crash50) plan.events.push_back({t, Crash{0.5}});
            if (name == ScenarioName::hub_attack) plan.events.push_back({t, HubAttack{params.h}});
        }
    }
    return plan;
}

void apply_crash(OverlayNetwork& net, double fraction, Rng& rng) {
    const std::vector<NodeId> alive(net.alive().begin(), net.alive().end());
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(alive.size())));
    for (NodeId id : sample_distinct(alive, count, rng)) net.kill(id);
}

NodeId join_node(OverlayNetwork& net, std::uint32_t degree, Rng& rng) {
    const std::vector<NodeId> pool(net.alive().begin(), net.alive().end());
    const auto links = sample_distinct(pool, degree, rng);
    const NodeId id = net.add_node();
    set_links(net, id, links);
    if (net.protocol() == ProtocolKind::phenix) phenix_join(net, id);
    return id;
}

void apply_churn_tick(OverlayNetwork& net, double fraction, std::uint32_t replacement_degree, Rng& rng) {
    const std::vector<NodeId> alive(net.alive().begin(), net.alive().end());
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(alive.size())));
    for (NodeId id : sample_distinct(alive, count, rng)) net.kill(id);

    // Replacements link to nodes that survived this tick.
    const std::vector<NodeId> survivors(net.alive().begin(), net.alive().end());
    for (std::size_t i = 0; i < count; ++i) {
        const auto links = sample_distinct(survivors, replacement_degree, rng);
        const NodeId id = net.add_node();
        set_links(net, id, links);
        if (net.protocol() == ProtocolKind::phenix) phenix_join(net, id);
    }
}

std::vector<NodeId> apply_hub_attack(OverlayNetwork& net, std::uint32_t count) {
    const GraphSnapshot snap = take_snapshot(net);
    const auto degree = in_degrees(snap);
    std::vector<std::uint32_t> order(snap.size());
    for (std::uint32_t v = 0; v < order.size(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return degree[a] > degree[b]; });
    std::vector<NodeId> removed;
    for (std::size_t i = 0; i < std::min<std::size_t>(count, order.size()); ++i) removed.push_back(snap.ids[order[i]]);
    for (NodeId id : removed) net.kill(id);
    return removed;
}

std::uint32_t clamped_normal_count(Rng& rng, double mean, double stddev) {
    const double x = rng.normal(mean, stddev);
    return x <= 0.0 ? 0u : static_cast<std::uint32_t>(std::lround(x));
}

std::uint32_t phenix_growth_tick(OverlayNetwork& net, Rng& rng, const Grow& grow) {
    std::uint32_t wanted = clamped_normal_count(rng, grow.mean, grow.stddev);
    const std::size_t room = net.alive_count() >= grow.cap ? 0 : grow.cap - net.alive_count();
    wanted = static_cast<std::uint32_t>(std::min<std::size_t>(wanted, room));
    for (std::uint32_t i = 0; i < wanted; ++i) join_node(net, net.params().c, rng);
    return wanted;
}

std::uint32_t phenix_churn_tick(OverlayNetwork& net, Rng& rng, const PhenixChurn& churn) {
    const std::uint32_t wanted = clamped_normal_count(rng, churn.mean, churn.stddev);
    const std::vector<NodeId> alive(net.alive().begin(), net.alive().end());
    const auto victims = sample_distinct(alive, wanted, rng);
    for (NodeId id : victims) net.kill(id);
    return static_cast<std::uint32_t>(victims.size());
}

void ScenarioRunner::apply_due(OverlayNetwork& net) {
    while (next_ < plan_.events.size() && plan_.events[next_].cycle < net.cycle()) ++next_;
    while (next_ < plan_.events.size() && plan_.events[next_].cycle == net.cycle()) {
        std::visit(
            [&](const auto& ev) {
                using E = std::decay_t<decltype(ev)>;
                if constexpr (std::is_same_v<E, Crash>) {
                    apply_crash(net, ev.fraction, rng_);
                } else if constexpr (std::is_same_v<E, Churn>) {
                    apply_churn_tick(net, ev.fraction, ev.replacement_degree, rng_);
                } else if constexpr (std::is_same_v<E, HubAttack>) {
                    apply_hub_attack(net, ev.count);
                } else if constexpr (std::is_same_v<E, Grow>) {
                    phenix_growth_tick(net, rng_, ev);
                } else {
                    phenix_churn_tick(net, rng_, ev);
                }
            },
            plan_.events[next_].kind);
        ++next_;
    }
}

}  // namespace hubsim
