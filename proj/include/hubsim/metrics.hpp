#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hubsim/overlay.hpp"

namespace hubsim {

// Directed graph over alive nodes only. Vertices are dense local indices
// 0..size-1; `ids[v]` maps back to the NodeId (ascending). Edges to dead ids
// are dropped when the snapshot is taken.
struct GraphSnapshot {
    std::uint32_t cycle = 0;
    std::vector<NodeId> ids;
    std::vector<std::vector<std::uint32_t>> out;

    std::size_t size() const { return ids.size(); }
    std::size_t edge_count() const;
};

GraphSnapshot take_snapshot(const OverlayNetwork& net);

// Snapshot over vertices 0..n-1 from an explicit edge list. Self loops and
// repeated edges are dropped.
GraphSnapshot make_snapshot(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

using Histogram = std::map<std::uint32_t, std::uint64_t>;

struct DegreeHistograms {
    Histogram in;
    Histogram out;
};

std::vector<std::uint32_t> in_degrees(const GraphSnapshot& snap);
DegreeHistograms degree_distributions(const GraphSnapshot& snap);

// Sorted, duplicate-free neighbour lists of the undirected projection.
std::vector<std::vector<std::uint32_t>> undirected_adjacency(const GraphSnapshot& snap);

struct Clustering {
    std::vector<double> per_node;
    double mean = 0.0;
};

// C_i = 2 e_i / (k_i (k_i - 1)) on the undirected projection, 0 when k_i < 2.
Clustering clustering_coefficient(const GraphSnapshot& snap);

struct PathMetrics {
    double average_path_length = 0.0;
    std::uint32_t diameter = 0;
    std::size_t component_size = 0;
    bool degenerate = false;
};

// All-pairs shortest paths (breadth-first search from every vertex) on the
// undirected projection, restricted to the largest weakly connected
// component. The average is over ordered pairs.
PathMetrics path_metrics(const GraphSnapshot& snap);

// Components as lists of local indices.
std::vector<std::vector<std::uint32_t>> weak_components(const GraphSnapshot& snap);
std::vector<std::vector<std::uint32_t>> strong_components(const GraphSnapshot& snap);

std::size_t largest_weak_component(const GraphSnapshot& snap);
std::size_t largest_strong_component(const GraphSnapshot& snap);

enum class RemovalOrder { random, targeted };
enum class ComponentKind { weak, strong };

struct RobustnessPoint {
    std::uint32_t removed = 0;
    std::uint32_t outside = 0;

    bool operator==(const RobustnessPoint&) const = default;
};

// Removal order over local indices. Targeted: descending in-degree of the
// initial snapshot, ties by ascending index.
std::vector<std::uint32_t> removal_order(const GraphSnapshot& snap, RemovalOrder order, Rng& rng);

// Points for removed = 0..size: nodes remaining outside the largest
// (weak or strong) component after removing the first `removed` nodes.
std::vector<RobustnessPoint> robustness_sweep(const GraphSnapshot& snap, std::span<const std::uint32_t> order,
                                              ComponentKind component);
std::vector<RobustnessPoint> robustness_sweep(const GraphSnapshot& snap, RemovalOrder order, ComponentKind component,
                                              Rng& rng);

// Reference degree distributions.
std::vector<double> binomial_pmf(std::uint32_t n, double p);
// P(k) proportional to k^-exponent for k in [k_min, k_max]; index 0 is k_min.
std::vector<double> powerlaw_pmf(double exponent, std::uint32_t k_min, std::uint32_t k_max);

struct MetricsSnapshot {
    std::uint32_t cycle = 0;
    std::size_t alive = 0;
    std::size_t edges = 0;
    Histogram in_degree;
    Histogram out_degree;
    double clustering = 0.0;
    double average_path_length = 0.0;
    std::uint32_t diameter = 0;
    std::size_t largest_weak = 0;
    std::size_t largest_strong = 0;
    double mean_in_degree = 0.0;
    std::uint32_t max_in_degree = 0;
    // Nodes whose in-degree is alive - 1.
    std::size_t full_in_degree_nodes = 0;
};

MetricsSnapshot compute_metrics(const GraphSnapshot& snap);

}  // namespace hubsim
