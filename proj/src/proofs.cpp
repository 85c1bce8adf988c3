#include <algorithm>
#include <numeric>

#include "hubsim/protocols.hpp"

namespace hubsim {

std::vector<std::size_t> proofs_select_slots(std::size_t cache_size, std::uint32_t l, Rng& rng) {
    std::vector<std::size_t> slots(cache_size);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    const std::size_t k = std::min<std::size_t>(l, cache_size);
    rng.shuffle_prefix(std::span<std::size_t>(slots), k);
    slots.resize(k);
    return slots;
}

void proofs_install(std::vector<NodeId>& cache, std::span<const NodeId> received,
                    std::span<const std::size_t> sent_slots, NodeId self, std::size_t capacity) {
    std::vector<NodeId> incoming;
    for (NodeId id : received) {
        if (id == self) continue;
        if (std::find(cache.begin(), cache.end(), id) != cache.end()) continue;
        if (std::find(incoming.begin(), incoming.end(), id) != incoming.end()) continue;
        incoming.push_back(id);
    }
    auto next = incoming.begin();
    while (next != incoming.end() && cache.size() < capacity) cache.push_back(*next++);
    for (std::size_t slot : sent_slots) {
        if (next == incoming.end()) break;
        cache[slot] = *next++;
    }
}

namespace {

std::vector<NodeId> respond(OverlayNetwork& net, NodeId q, std::span<const NodeId> subset,
                            std::span<const std::size_t> q_slots) {
    auto& cache = net.state_as<ProofsState>(q).cache;
    std::vector<NodeId> reply;
    reply.reserve(q_slots.size());
    for (std::size_t slot : q_slots) reply.push_back(cache[slot]);
    proofs_install(cache, subset, q_slots, q, net.params().c);
    return reply;
}

}  // namespace

bool proofs_exchange(OverlayNetwork& net, NodeId p, std::span<const std::size_t> p_slots, std::size_t partner,
                     std::span<const std::size_t> q_slots) {
    auto& cache = net.state_as<ProofsState>(p).cache;
    const NodeId q = cache[p_slots[partner]];
    if (!is_responding(net, q)) return false;

    std::vector<NodeId> subset;
    subset.reserve(p_slots.size());
    for (std::size_t i = 0; i < p_slots.size(); ++i) {
        if (i != partner) subset.push_back(cache[p_slots[i]]);
    }
    subset.push_back(p);

    const auto reply = respond(net, q, subset, q_slots);
    proofs_install(cache, reply, p_slots, p, net.params().c);
    return true;
}

void proofs_round(OverlayNetwork& net, NodeId node) {
    const auto& cache = net.state_as<ProofsState>(node).cache;
    Rng& rng = net.rng();
    const auto p_slots = proofs_select_slots(cache.size(), net.params().l, rng);
    if (p_slots.empty()) return;
    const std::size_t partner = rng.below(p_slots.size());
    const NodeId q = cache[p_slots[partner]];
    if (!is_responding(net, q)) return;
    const auto q_slots = proofs_select_slots(net.state_as<ProofsState>(q).cache.size(), net.params().l, rng);
    proofs_exchange(net, node, p_slots, partner, q_slots);
}

std::vector<NodeId> proofs_handle(OverlayNetwork& net, NodeId node, std::span<const NodeId> subset, NodeId from) {
    (void)from;
    const auto q_slots = proofs_select_slots(net.state_as<ProofsState>(node).cache.size(), net.params().l, net.rng());
    return respond(net, node, subset, q_slots);
}

}  // namespace hubsim
