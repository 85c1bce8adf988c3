#include <algorithm>

#include "hubsim/protocols.hpp"

namespace hubsim {

std::vector<std::pair<NodeId, std::uint32_t>> sort_by_frequency(std::vector<std::pair<NodeId, std::uint32_t>> counts) {
    std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return counts;
}

std::vector<NodeId> elevator_handle(OverlayNetwork& net, NodeId node, ElevatorRequest request, NodeId from) {
    auto& st = net.state_as<ElevatorState>(node);
    if (request == ElevatorRequest::cache) {
        std::vector<NodeId> reply = st.cache;
        if (from != node) st.backward_peers.add(from);
        return reply;
    }
    auto& backward = st.backward_peers.items();
    const std::size_t k = std::min<std::size_t>(backward.size(), net.params().maxsize_buffer_backward);
    // Only the returned prefix needs to be a uniform random ordered sample.
    net.rng().shuffle_prefix(std::span<NodeId>(backward), k);
    return {backward.begin(), backward.begin() + static_cast<std::ptrdiff_t>(k)};
}

void elevator_round(OverlayNetwork& net, NodeId node) {
    const SimParams& params = net.params();
    auto& st = net.state_as<ElevatorState>(node);

    st.backward_peers.remove_if([&](NodeId p) { return !is_responding(net, p); });
    std::erase_if(st.cache, [&](NodeId p) { return !is_responding(net, p); });

    // Frequency map over the neighbours' caches.
    auto& counts = net.scratch_counts();
    std::vector<NodeId> touched;
    const std::vector<NodeId> neighbours = st.cache;
    for (NodeId peer : neighbours) {
        for (NodeId id : elevator_handle(net, peer, ElevatorRequest::cache, node)) {
            if (id == node) continue;
            if (counts[id]++ == 0) touched.push_back(id);
        }
    }
    std::vector<std::pair<NodeId, std::uint32_t>> frequency;
    frequency.reserve(touched.size());
    for (NodeId id : touched) {
        frequency.emplace_back(id, counts[id]);
        counts[id] = 0;
    }
    frequency = sort_by_frequency(std::move(frequency));

    const std::size_t preferred_count = std::min<std::size_t>(params.c, frequency.size());

    // Backward samples of the preferred peers, deduplicated in arrival order.
    // A preferred peer that does not answer is known dead and cannot be a hub.
    std::vector<NodeId> responding;
    std::vector<NodeId> preferred_backward;
    for (std::size_t i = 0; i < preferred_count; ++i) {
        const NodeId peer = frequency[i].first;
        if (!is_responding(net, peer)) continue;
        responding.push_back(peer);
        for (NodeId id : elevator_handle(net, peer, ElevatorRequest::backward, node)) {
            if (counts[id]++ == 0) preferred_backward.push_back(id);
        }
    }
    for (NodeId id : preferred_backward) counts[id] = 0;

    // Rebuild the cache. `counts` doubles as the placed-set marker.
    std::vector<NodeId> cache;
    cache.reserve(params.c);
    auto place = [&](NodeId id) {
        if (id == node || counts[id] != 0) return false;
        counts[id] = 1;
        cache.push_back(id);
        return true;
    };

    const std::size_t hub_count = std::min<std::size_t>(params.h, responding.size());
    for (std::size_t i = 0; i < hub_count; ++i) place(responding[i]);
    const auto hub_slots = static_cast<std::uint32_t>(cache.size());

    // Walking a lazily shuffled list is equivalent to shuffling it in full
    // and scanning from the front.
    std::size_t random_picks = 0;
    const std::size_t random_target = params.c - params.h;
    for (std::size_t i = 0; i < preferred_backward.size() && random_picks < random_target; ++i) {
        const std::size_t j = i + net.rng().below(preferred_backward.size() - i);
        std::swap(preferred_backward[i], preferred_backward[j]);
        if (place(preferred_backward[i])) ++random_picks;
    }

    // Top up uniformly from the non-preferred part of the frequency map.
    std::vector<NodeId> remaining;
    for (std::size_t i = preferred_count; i < frequency.size(); ++i) {
        if (counts[frequency[i].first] == 0) remaining.push_back(frequency[i].first);
    }
    while (cache.size() < params.c && !remaining.empty()) {
        const std::size_t pick = net.rng().below(remaining.size());
        place(remaining[pick]);
        remaining[pick] = remaining.back();
        remaining.pop_back();
    }

    for (NodeId id : cache) counts[id] = 0;
    st.cache = std::move(cache);
    st.hub_slots = hub_slots;
}

}  // namespace hubsim
