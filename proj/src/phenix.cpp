#include <algorithm>

#include "hubsim/protocols.hpp"

namespace hubsim {

std::vector<NodeId> phenix_handle_cache_request(OverlayNetwork& net, NodeId node, NodeId from) {
    (void)from;
    const std::vector<NodeId> reply = net.state_as<PhenixState>(node).cache;
    for (NodeId neighbour : reply) {
        if (is_responding(net, neighbour)) phenix_handle_ping(net, neighbour, node);
    }
    return reply;
}

void phenix_handle_ping(OverlayNetwork& net, NodeId node, NodeId from) {
    net.state_as<PhenixState>(node).gamma_list.push_back({from, net.cycle()});
}

void phenix_handle_connexion_request(OverlayNetwork& net, NodeId node, NodeId from) {
    auto& st = net.state_as<PhenixState>(node);
    ++st.c_m;
    ++st.connexion_requests;
    if (st.c_m >= net.params().gamma) {
        if (from != node) st.backward_peers.add(from);
        st.c_m -= net.params().gamma;
        ++st.backward_created;
    }
}

void phenix_round(OverlayNetwork& net, NodeId node) {
    auto& st = net.state_as<PhenixState>(node);
    const std::uint32_t now = net.cycle();
    const std::uint32_t tau = net.params().tau;
    std::erase_if(st.gamma_list, [&](const GammaEntry& e) { return now - e.inserted_cycle >= tau; });
}

void phenix_join(OverlayNetwork& net, NodeId new_node) {
    const SimParams& params = net.params();
    auto& st = net.state_as<PhenixState>(new_node);
    const std::vector<NodeId> bootstrap = st.cache;

    // First ceil(len/2) entries are kept as random links, the rest are friends.
    const std::size_t random_part = (bootstrap.size() + 1) / 2;
    std::vector<NodeId> cache(bootstrap.begin(), bootstrap.begin() + static_cast<std::ptrdiff_t>(random_part));

    auto& counts = net.scratch_counts();
    std::vector<NodeId> touched;
    for (std::size_t i = random_part; i < bootstrap.size(); ++i) {
        const NodeId friend_id = bootstrap[i];
        if (!is_responding(net, friend_id)) continue;
        for (NodeId id : phenix_handle_cache_request(net, friend_id, new_node)) {
            if (id == new_node) continue;
            if (counts[id]++ == 0) touched.push_back(id);
        }
    }
    std::vector<std::pair<NodeId, std::uint32_t>> candidates;
    for (NodeId id : touched) {
        candidates.emplace_back(id, counts[id]);
        counts[id] = 0;
    }
    candidates = sort_by_frequency(std::move(candidates));

    std::vector<NodeId> preferred;
    for (const auto& [id, freq] : candidates) {
        if (preferred.size() == params.s) break;
        if (!is_responding(net, id)) continue;
        if (std::find(cache.begin(), cache.end(), id) != cache.end()) continue;
        preferred.push_back(id);
    }
    for (NodeId peer : preferred) phenix_handle_connexion_request(net, peer, new_node);

    cache.insert(cache.end(), preferred.begin(), preferred.end());
    net.state_as<PhenixState>(new_node).cache = std::move(cache);
}

}  // namespace hubsim
