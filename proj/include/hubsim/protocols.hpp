#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hubsim/overlay.hpp"

namespace hubsim {

// ---------------------------------------------------------------------------
// Elevator
// ---------------------------------------------------------------------------

enum class ElevatorRequest { cache, backward };

// Active round: prune dead peers, collect neighbours' caches into a frequency
// map, take the c most frequent ids as preferred, ask each preferred peer for
// a sample of its backward list, then rebuild the cache as the first h
// preferred ids that answered, followed by c-h shuffled backward ids, topped
// up uniformly from the rest of the frequency map.
//
// Frequency ties are broken by ascending id. The node itself never enters
// the frequency map; duplicates and self are skipped at every insertion.
void elevator_round(OverlayNetwork& net, NodeId node);

// Request handler. A cache request returns a copy of the cache and registers
// `from` as a backward peer. A backward request shuffles the backward list
// and returns at most maxsize_buffer_backward entries.
std::vector<NodeId> elevator_handle(OverlayNetwork& net, NodeId node, ElevatorRequest request, NodeId from);

// Ids sorted by descending count, then ascending id.
std::vector<std::pair<NodeId, std::uint32_t>> sort_by_frequency(std::vector<std::pair<NodeId, std::uint32_t>> counts);

// ---------------------------------------------------------------------------
// PROOFS
// ---------------------------------------------------------------------------

// Cache slots of a uniform random subset of size min(l, |cache|), in the
// order they were drawn.
std::vector<std::size_t> proofs_select_slots(std::size_t cache_size, std::uint32_t l, Rng& rng);

// Installs `received` into `cache`: self and ids already present are
// dropped, the rest fill empty slots (up to capacity) and then overwrite the
// slots in `sent_slots`, in order. Unused sent slots keep their entries.
void proofs_install(std::vector<NodeId>& cache, std::span<const NodeId> received,
                    std::span<const std::size_t> sent_slots, NodeId self, std::size_t capacity);

// Deterministic exchange core. `p_slots` is the initiator's selected subset,
// `partner` an index into it naming q, `q_slots` the responder's subset.
// Returns false (and changes nothing) if q is not responding.
bool proofs_exchange(OverlayNetwork& net, NodeId p, std::span<const std::size_t> p_slots, std::size_t partner,
                     std::span<const std::size_t> q_slots);

void proofs_round(OverlayNetwork& net, NodeId node);

// Responder side: draws its own subset, installs `subset` from `from`, and
// returns the drawn subset.
std::vector<NodeId> proofs_handle(OverlayNetwork& net, NodeId node, std::span<const NodeId> subset, NodeId from);

// ---------------------------------------------------------------------------
// Newscast
// ---------------------------------------------------------------------------

// Own fresh descriptor plus the first c/2-1 entries of the permuted cache.
std::vector<Descriptor> newscast_buffer(NewscastState& st, NodeId self, std::uint32_t c, Rng& rng);

// Appends `received`, drops self, keeps the freshest descriptor per id,
// evicts oldest entries (random among equal ages) down to c, then ages every
// entry by one.
void newscast_merge(NewscastState& st, std::span<const Descriptor> received, NodeId self, std::uint32_t c, Rng& rng);

void newscast_round(OverlayNetwork& net, NodeId node);
std::vector<Descriptor> newscast_handle(OverlayNetwork& net, NodeId node, std::span<const Descriptor> buffer,
                                        NodeId from);

// ---------------------------------------------------------------------------
// Phenix
// ---------------------------------------------------------------------------

// Join procedure for a node whose cache holds its bootstrap sample.
void phenix_join(OverlayNetwork& net, NodeId new_node);

// Per-cycle housekeeping: expire gamma-list entries older than tau cycles.
void phenix_round(OverlayNetwork& net, NodeId node);

std::vector<NodeId> phenix_handle_cache_request(OverlayNetwork& net, NodeId node, NodeId from);
void phenix_handle_ping(OverlayNetwork& net, NodeId node, NodeId from);
void phenix_handle_connexion_request(OverlayNetwork& net, NodeId node, NodeId from);

}  // namespace hubsim
