#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hubsim/rng.hpp"
#include "hubsim/state.hpp"
#include "hubsim/types.hpp"

namespace hubsim {

// Network state for one simulation run: every node ever created (dead nodes
// keep their state so stale ids stay resolvable), the alive set, the cycle
// counter and the protocol random stream.
class OverlayNetwork {
public:
    OverlayNetwork(ProtocolKind protocol, SimParams params, Rng protocol_rng);

    ProtocolKind protocol() const { return protocol_; }
    const SimParams& params() const { return params_; }
    std::uint32_t cycle() const { return cycle_; }
    NodeId next_id() const { return static_cast<NodeId>(nodes_.size()); }

    // Alive ids in ascending order.
    std::span<const NodeId> alive() const { return alive_; }
    std::size_t alive_count() const { return alive_.size(); }
    bool is_alive(NodeId id) const { return id < alive_flag_.size() && alive_flag_[id] != 0; }
    bool exists(NodeId id) const { return id < nodes_.size(); }

    // Allocates the next id with an empty state of this network's protocol.
    NodeId add_node();
    void kill(NodeId id);

    ProtocolState& state(NodeId id) { return nodes_.at(id); }
    const ProtocolState& state(NodeId id) const { return nodes_.at(id); }

    template <typename S>
    S& state_as(NodeId id) { return std::get<S>(nodes_.at(id)); }
    template <typename S>
    const S& state_as(NodeId id) const { return std::get<S>(nodes_.at(id)); }

    // Outgoing links as stored in protocol state; may include dead ids.
    std::vector<NodeId> out_links(NodeId id) const;

    Rng& rng() { return rng_; }

    // Per-round scratch counters indexed by id. Callers must restore zeros.
    std::vector<std::uint32_t>& scratch_counts();

    void advance_cycle() { ++cycle_; }

private:
    ProtocolKind protocol_;
    SimParams params_;
    Rng rng_;
    std::uint32_t cycle_ = 0;
    std::vector<ProtocolState> nodes_;
    std::vector<std::uint8_t> alive_flag_;
    std::vector<NodeId> alive_;
    std::vector<std::uint32_t> scratch_;
};

// Random k-out graph with k = c: every node links to c distinct uniform
// random other nodes. Newscast ages start at 0, backward lists empty.
OverlayNetwork init_k_out(ProtocolKind protocol, const SimParams& params, std::uint64_t replication = 0);

// Complete directed graph on `size` nodes (each node links to all others).
// Used as the seed network for protocols that grow from a small core.
OverlayNetwork init_complete(ProtocolKind protocol, const SimParams& params, std::uint32_t size,
                             std::uint64_t replication = 0);

// Replaces the node's outgoing links (cache) with `links`. Newscast ages are 0.
void set_links(OverlayNetwork& net, NodeId id, std::span<const NodeId> links);

// One cycle: every alive node runs one active round, in a fresh uniform
// random order; updates are visible immediately to later nodes.
void step_cycle(OverlayNetwork& net);

bool is_responding(const OverlayNetwork& net, NodeId peer);

// Uniform draw over the node's cache. Throws ServiceError.
NodeId get_peer(const OverlayNetwork& net, NodeId node, Rng& rng);

// Uniform draw over an Elevator node's hub slots. Throws ServiceError.
NodeId get_hub(const OverlayNetwork& net, NodeId node, Rng& rng);

// `count` distinct ids drawn uniformly from `pool` (without replacement).
std::vector<NodeId> sample_distinct(std::span<const NodeId> pool, std::size_t count, Rng& rng);

}  // namespace hubsim
