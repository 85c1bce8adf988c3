#include "hubsim/overlay.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hubsim/protocols.hpp"

namespace hubsim {

namespace {

ProtocolState empty_state(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::elevator: return ElevatorState{};
        case ProtocolKind::proofs: return ProofsState{};
        case ProtocolKind::newscast: return NewscastState{};
        case ProtocolKind::phenix: return PhenixState{};
    }
    return ElevatorState{};
}

const std::vector<NodeId>* plain_cache(const ProtocolState& st) {
    if (auto* e = std::get_if<ElevatorState>(&st)) return &e->cache;
    if (auto* p = std::get_if<ProofsState>(&st)) return &p->cache;
    if (auto* x = std::get_if<PhenixState>(&st)) return &x->cache;
    return nullptr;
}

}  // namespace

OverlayNetwork::OverlayNetwork(ProtocolKind protocol, SimParams params, Rng protocol_rng)
    : protocol_(protocol), params_(params), rng_(protocol_rng) {}

NodeId OverlayNetwork::add_node() {
    const NodeId id = next_id();
    nodes_.push_back(empty_state(protocol_));
    alive_flag_.push_back(1);
    alive_.push_back(id);  // ids are monotonic, so alive_ stays sorted
    return id;
}

void OverlayNetwork::kill(NodeId id) {
    if (!is_alive(id)) return;
    alive_flag_[id] = 0;
    auto it = std::lower_bound(alive_.begin(), alive_.end(), id);
    alive_.erase(it);
}

std::vector<NodeId> OverlayNetwork::out_links(NodeId id) const {
    const ProtocolState& st = state(id);
    if (auto* n = std::get_if<NewscastState>(&st)) {
        std::vector<NodeId> out;
        out.reserve(n->cache.size());
        for (const Descriptor& d : n->cache) out.push_back(d.id);
        return out;
    }
    std::vector<NodeId> out = *plain_cache(st);
    if (auto* x = std::get_if<PhenixState>(&st)) {
        for (NodeId b : x->backward_peers.items()) {
            if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
        }
    }
    return out;
}

std::vector<std::uint32_t>& OverlayNetwork::scratch_counts() {
    if (scratch_.size() < nodes_.size()) scratch_.resize(nodes_.size(), 0);
    return scratch_;
}

std::vector<NodeId> sample_distinct(std::span<const NodeId> pool, std::size_t count, Rng& rng) {
    std::vector<NodeId> work(pool.begin(), pool.end());
    const std::size_t k = std::min(count, work.size());
    rng.shuffle_prefix(std::span<NodeId>(work), k);
    work.resize(k);
    return work;
}

void set_links(OverlayNetwork& net, NodeId id, std::span<const NodeId> links) {
    std::visit(
        [&](auto& st) {
            using S = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<S, NewscastState>) {
                st.cache.clear();
                for (NodeId l : links) st.cache.push_back({l, 0});
            } else {
                st.cache.assign(links.begin(), links.end());
            }
        },
        net.state(id));
}

OverlayNetwork init_k_out(ProtocolKind protocol, const SimParams& params, std::uint64_t replication) {
    params.validate();
    OverlayNetwork net(protocol, params, Rng::derive(params.seed, replication, StreamPurpose::protocol));
    Rng init_rng = Rng::derive(params.seed, replication, StreamPurpose::init);
    for (std::uint32_t i = 0; i < params.n; ++i) net.add_node();

    std::vector<NodeId> others;
    others.reserve(params.n);
    for (NodeId self = 0; self < params.n; ++self) {
        others.clear();
        for (NodeId j = 0; j < params.n; ++j) {
            if (j != self) others.push_back(j);
        }
        const auto links = sample_distinct(others, params.c, init_rng);
        set_links(net, self, links);
    }
    return net;
}

OverlayNetwork init_complete(ProtocolKind protocol, const SimParams& params, std::uint32_t size,
                             std::uint64_t replication) {
    OverlayNetwork net(protocol, params, Rng::derive(params.seed, replication, StreamPurpose::protocol));
    for (std::uint32_t i = 0; i < size; ++i) net.add_node();
    std::vector<NodeId> others;
    for (NodeId self = 0; self < size; ++self) {
        others.clear();
        for (NodeId j = 0; j < size; ++j) {
            if (j != self) others.push_back(j);
        }
        if (others.size() > params.c) others.resize(params.c);
        set_links(net, self, others);
    }
    return net;
}

void step_cycle(OverlayNetwork& net) {
    std::vector<NodeId> order(net.alive().begin(), net.alive().end());
    net.rng().shuffle(std::span<NodeId>(order));
    for (NodeId id : order) {
        if (!net.is_alive(id)) continue;
        switch (net.protocol()) {
            case ProtocolKind::elevator: elevator_round(net, id); break;
            case ProtocolKind::proofs: proofs_round(net, id); break;
            case ProtocolKind::newscast: newscast_round(net, id); break;
            case ProtocolKind::phenix: phenix_round(net, id); break;
        }
    }
    net.advance_cycle();
}

bool is_responding(const OverlayNetwork& net, NodeId peer) { return net.is_alive(peer); }

NodeId get_peer(const OverlayNetwork& net, NodeId node, Rng& rng) {
    if (!net.is_alive(node)) throw ServiceError("get_peer: node " + std::to_string(node) + " is not alive");
    const auto links = [&] {
        const ProtocolState& st = net.state(node);
        if (auto* n = std::get_if<NewscastState>(&st)) {
            std::vector<NodeId> ids;
            for (const Descriptor& d : n->cache) ids.push_back(d.id);
            return ids;
        }
        return *plain_cache(st);
    }();
    if (links.empty()) throw ServiceError("get_peer: no peers");
    return links[rng.below(links.size())];
}

NodeId get_hub(const OverlayNetwork& net, NodeId node, Rng& rng) {
    if (!net.is_alive(node)) throw ServiceError("get_hub: node " + std::to_string(node) + " is not alive");
    const auto* st = std::get_if<ElevatorState>(&net.state(node));
    if (st == nullptr) throw ServiceError("get_hub: node does not run Elevator");
    if (st->hub_slots == 0) throw ServiceError("get_hub: no hubs known");
    return st->cache[rng.below(st->hub_slots)];
}

}  // namespace hubsim
