#pragma once

#include <cstdint>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hubsim/types.hpp"

namespace hubsim {

// Insertion-ordered list of ids with O(1) membership tests.
class IdList {
public:
    bool contains(NodeId id) const { return index_.contains(id); }
    bool add(NodeId id);
    template <typename Pred>
    void remove_if(Pred pred);

    std::vector<NodeId>& items() { return items_; }
    const std::vector<NodeId>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

private:
    std::vector<NodeId> items_;
    std::unordered_set<NodeId> index_;
};

inline bool IdList::add(NodeId id) {
    if (!index_.insert(id).second) return false;
    items_.push_back(id);
    return true;
}

template <typename Pred>
void IdList::remove_if(Pred pred) {
    std::erase_if(items_, [&](NodeId id) {
        if (!pred(id)) return false;
        index_.erase(id);
        return true;
    });
}

struct ElevatorState {
    // Positions [0, hub_slots) were filled by preferential attachment.
    std::vector<NodeId> cache;
    std::uint32_t hub_slots = 0;
    IdList backward_peers;
};

struct ProofsState {
    std::vector<NodeId> cache;
};

struct Descriptor {
    NodeId id = 0;
    std::uint32_t age = 0;

    bool operator==(const Descriptor&) const = default;
};

struct NewscastState {
    std::vector<Descriptor> cache;
};

struct GammaEntry {
    NodeId id = 0;
    std::uint32_t inserted_cycle = 0;

    bool operator==(const GammaEntry&) const = default;
};

struct PhenixState {
    std::vector<NodeId> cache;
    IdList backward_peers;
    std::vector<GammaEntry> gamma_list;
    std::uint32_t c_m = 0;
    std::uint64_t connexion_requests = 0;
    std::uint64_t backward_created = 0;
};

using ProtocolState = std::variant<ElevatorState, ProofsState, NewscastState, PhenixState>;

}  // namespace hubsim
