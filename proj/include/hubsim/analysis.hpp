#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hubsim/metrics.hpp"
#include "hubsim/rng.hpp"

namespace hubsim {

// A probability carried in log space so that values far below double
// underflow keep their magnitude.
struct LogProbability {
    double log10 = 0.0;

    double value() const;
    // Scientific decomposition value = mantissa * 10^exponent, 1 <= mantissa < 10.
    double mantissa() const;
    std::int64_t exponent() const;
    // e.g. "2.152556e-02" or "9.090909e-41"; never underflows to 0.
    std::string to_string() const;
};

// ((1 - c/n)^C(c,2))^t: chance that a node has created no preferential link
// after t rounds, under the independence approximation.
LogProbability p_no_preferential_links(std::uint32_t n, std::uint32_t c, std::uint32_t t);

struct HubMaintenance {
    double probability = 1.0;
    // h ((c-h)/n)^c / (h+1); log10 is -infinity when c == h.
    LogProbability complement;
};

// 1 - h ((c-h)/n)^c / (h+1): chance that one round keeps an established set
// of h full-in-degree hubs.
HubMaintenance p_hub_set_maintained(std::uint32_t n, std::uint32_t c, std::uint32_t h);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stddev = 0.0;  // standard error of the mean
    std::uint64_t trials = 0;
};

// Single-round event behind p_no_preferential_links: each of the C(c,2)
// neighbour pairs independently shares a neighbour when one neighbour's
// c uniform links (drawn without replacement from n addresses) hit a given
// address of the other.
MonteCarloEstimate simulate_no_preferential_links(std::uint32_t n, std::uint32_t c, std::uint64_t trials, Rng& rng);

// Event behind the complement of p_hub_set_maintained: every one of the c
// neighbours has a given node among its c-h random links, and the new
// candidate wins one of the h preferred slots out of h+1 contenders.
MonteCarloEstimate simulate_hub_set_broken(std::uint32_t n, std::uint32_t c, std::uint32_t h, std::uint64_t trials,
                                           Rng& rng);

struct HubConfiguration {
    std::vector<NodeId> hub_ids;  // ascending

    bool operator==(const HubConfiguration&) const = default;
};

// The hub set iff exactly h alive nodes have in-degree alive - 1.
std::optional<HubConfiguration> detect_hub_configuration(const GraphSnapshot& snap, std::uint32_t h);

// Ids of every node whose in-degree equals alive - 1.
std::vector<NodeId> full_in_degree_nodes(const GraphSnapshot& snap);

}  // namespace hubsim
