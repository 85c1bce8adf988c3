#include "hubsim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hubsim/overlay.hpp"

namespace hubsim {

namespace {

MonteCarloEstimate bernoulli_estimate(std::uint64_t hits, std::uint64_t trials) {
    MonteCarloEstimate est;
    est.trials = trials;
    if (trials == 0) return est;
    est.mean = static_cast<double>(hits) / static_cast<double>(trials);
    est.stddev = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
    return est;
}

// True if `target` is among `k` distinct uniform draws from [0, n).
bool draws_hit(std::uint32_t n, std::uint32_t k, std::uint32_t target, std::vector<NodeId>& scratch, Rng& rng) {
    scratch.resize(n);
    std::iota(scratch.begin(), scratch.end(), NodeId{0});
    rng.shuffle_prefix(std::span<NodeId>(scratch), k);
    for (std::uint32_t i = 0; i < k; ++i) {
        if (scratch[i] == target) return true;
    }
    return false;
}

}  // namespace

double LogProbability::value() const { return std::pow(10.0, log10); }

double LogProbability::mantissa() const {
    if (std::isinf(log10)) return 0.0;
    return std::pow(10.0, log10 - static_cast<double>(exponent()));
}

std::int64_t LogProbability::exponent() const {
    if (std::isinf(log10)) return 0;
    return static_cast<std::int64_t>(std::floor(log10));
}

std::string LogProbability::to_string() const {
    if (std::isinf(log10)) return "0";
    double m = mantissa();
    std::int64_t e = exponent();
    // Rounding the mantissa to 7 significant digits can carry into 10.
    if (m >= 9.9999995) {
        m /= 10.0;
        ++e;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6fe%+03lld", m, static_cast<long long>(e));
    return buf;
}

LogProbability p_no_preferential_links(std::uint32_t n, std::uint32_t c, std::uint32_t t) {
    if (c < 2) throw ConfigError("p_no_preferential_links: need c >= 2");
    if (n <= c) throw ConfigError("p_no_preferential_links: need n > c");
    if (t < 1) throw ConfigError("p_no_preferential_links: need t >= 1");
    const double pairs = static_cast<double>(c) * (c - 1) / 2.0;
    const double per_pair = std::log1p(-static_cast<double>(c) / n) / std::log(10.0);
    return {static_cast<double>(t) * pairs * per_pair};
}

HubMaintenance p_hub_set_maintained(std::uint32_t n, std::uint32_t c, std::uint32_t h) {
    if (h < 1) throw ConfigError("p_hub_set_maintained: need h >= 1");
    if (c < h) throw ConfigError("p_hub_set_maintained: need c >= h");
    if (n <= c) throw ConfigError("p_hub_set_maintained: need n > c");
    HubMaintenance result;
    if (c == h) {
        result.complement.log10 = -std::numeric_limits<double>::infinity();
        result.probability = 1.0;
        return result;
    }
    const double base = static_cast<double>(c - h) / n;
    result.complement.log10 = std::log10(static_cast<double>(h) / (h + 1.0)) + c * std::log10(base);
    result.probability = 1.0 - result.complement.value();
    return result;
}

MonteCarloEstimate simulate_no_preferential_links(std::uint32_t n, std::uint32_t c, std::uint64_t trials, Rng& rng) {
    const std::uint32_t pairs = c * (c - 1) / 2;
    std::vector<NodeId> scratch;
    std::uint64_t none_shared = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        bool shared = false;
        for (std::uint32_t pair = 0; pair < pairs && !shared; ++pair) {
            // The other neighbour's given address is id 0 without loss of generality.
            shared = draws_hit(n, c, 0, scratch, rng);
        }
        if (!shared) ++none_shared;
    }
    return bernoulli_estimate(none_shared, trials);
}

MonteCarloEstimate simulate_hub_set_broken(std::uint32_t n, std::uint32_t c, std::uint32_t h, std::uint64_t trials,
                                           Rng& rng) {
    std::vector<NodeId> scratch;
    std::uint64_t broken = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        bool all_share = true;
        for (std::uint32_t neighbour = 0; neighbour < c && all_share; ++neighbour) {
            all_share = draws_hit(n, c - h, 0, scratch, rng);
        }
        if (all_share && rng.below(h + 1) < h) ++broken;
    }
    return bernoulli_estimate(broken, trials);
}

std::vector<NodeId> full_in_degree_nodes(const GraphSnapshot& snap) {
    std::vector<NodeId> hubs;
    if (snap.size() == 0) return hubs;
    const auto degree = in_degrees(snap);
    for (std::uint32_t v = 0; v < snap.size(); ++v) {
        if (degree[v] == snap.size() - 1) hubs.push_back(snap.ids[v]);
    }
    return hubs;
}

std::optional<HubConfiguration> detect_hub_configuration(const GraphSnapshot& snap, std::uint32_t h) {
    auto hubs = full_in_degree_nodes(snap);
    if (hubs.size() != h) return std::nullopt;
    return HubConfiguration{std::move(hubs)};
}

}  // namespace hubsim
