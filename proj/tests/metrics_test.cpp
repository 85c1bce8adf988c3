#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "hubsim/metrics.hpp"
#include "hubsim/overlay.hpp"
#include "hubsim/rng.hpp"
#include "graph_oracles.hpp"

namespace hubsim {
namespace {

using test::random_graph;
using Edges = test::Edges;

TEST(Snapshot, DropsDeadEndpoints) {
    SimParams p = SimParams::with_cache(6, 2);
    OverlayNetwork net(ProtocolKind::proofs, p, Rng(1));
    for (int i = 0; i < 4; ++i) net.add_node();
    set_links(net, 0, std::vector<NodeId>{1, 2});
    set_links(net, 1, std::vector<NodeId>{2, 3});
    set_links(net, 2, std::vector<NodeId>{0});
    set_links(net, 3, std::vector<NodeId>{0});
    net.kill(2);
    const auto snap = take_snapshot(net);
    EXPECT_EQ(snap.ids, (std::vector<NodeId>{0, 1, 3}));
    EXPECT_EQ(snap.edge_count(), 3u);
}

TEST(Degrees, HistogramsConserveMass) {
    Rng rng(3);
    const auto g = random_graph(30, 0.1, rng);
    const auto h = degree_distributions(g);
    std::uint64_t in_mass = 0, out_mass = 0, in_sum = 0, out_sum = 0;
    for (auto [d, k] : h.in) {
        in_mass += k;
        in_sum += d * k;
    }
    for (auto [d, k] : h.out) {
        out_mass += k;
        out_sum += d * k;
    }
    EXPECT_EQ(in_mass, 30u);
    EXPECT_EQ(out_mass, 30u);
    EXPECT_EQ(in_sum, g.edge_count());
    EXPECT_EQ(out_sum, g.edge_count());
}

TEST(Clustering, SmallGraphs) {
    EXPECT_DOUBLE_EQ(clustering_coefficient(make_snapshot(3, {{0, 1}, {1, 2}, {2, 0}})).mean, 1.0);
    EXPECT_DOUBLE_EQ(clustering_coefficient(make_snapshot(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}})).mean, 0.0);
    Edges k5;
    for (std::uint32_t u = 0; u < 5; ++u) {
        for (std::uint32_t v = u + 1; v < 5; ++v) k5.emplace_back(u, v);
    }
    EXPECT_DOUBLE_EQ(clustering_coefficient(make_snapshot(5, k5)).mean, 1.0);
}

TEST(PathMetrics, ThreeNodePath) {
    const auto r = path_metrics(make_snapshot(3, {{0, 1}, {2, 1}}));
    EXPECT_DOUBLE_EQ(r.average_path_length, 8.0 / 6.0);
    EXPECT_EQ(r.diameter, 2u);
    EXPECT_EQ(r.component_size, 3u);
}

TEST(PathMetrics, RestrictedToLargestComponent) {
    const auto r = path_metrics(make_snapshot(5, {{0, 1}, {1, 2}, {3, 4}}));
    EXPECT_EQ(r.component_size, 3u);
    EXPECT_EQ(r.diameter, 2u);
    EXPECT_TRUE(path_metrics(make_snapshot(3, {})).degenerate);
}

TEST(MetricOracles, RandomGraphsMatchReferences) {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.below(39));
        const double p = 0.02 + 0.2 * rng.uniform01();
        const auto g = random_graph(n, p, rng);
        EXPECT_EQ(test::oracle_mismatch(g, rng), "") << "trial " << trial << ", n = " << n;
    }
}

TEST(Robustness, CompleteGraphStaysConnected) {
    Edges k5;
    for (std::uint32_t u = 0; u < 5; ++u) {
        for (std::uint32_t v = 0; v < 5; ++v) {
            if (u != v) k5.emplace_back(u, v);
        }
    }
    const auto g = make_snapshot(5, k5);
    Rng rng(1);
    for (auto kind : {ComponentKind::weak, ComponentKind::strong}) {
        for (const auto& point : robustness_sweep(g, RemovalOrder::random, kind, rng)) EXPECT_EQ(point.outside, 0u);
    }
}

TEST(Robustness, StarFallsApartAfterCentre) {
    Edges star;
    for (std::uint32_t leaf = 1; leaf <= 9; ++leaf) star.emplace_back(leaf, 0);
    const auto g = make_snapshot(10, star);
    Rng rng(1);
    const auto series = robustness_sweep(g, RemovalOrder::targeted, ComponentKind::weak, rng);
    EXPECT_EQ(series[0].outside, 0u);
    // Nine isolated leaves remain; one of them counts as the largest component.
    EXPECT_EQ(series[1].outside, 8u);
}

TEST(Robustness, TargetedOrderIsByInDegree) {
    const auto g = make_snapshot(4, {{0, 3}, {1, 3}, {2, 3}, {0, 1}, {2, 1}, {3, 2}});
    Rng rng(1);
    EXPECT_EQ(removal_order(g, RemovalOrder::targeted, rng), (std::vector<std::uint32_t>{3, 1, 2, 0}));
}

TEST(Components, WeakAndStrong) {
    // 0 -> 1 -> 2 -> 0 is a cycle; 3 hangs off it; 4 is isolated.
    const auto g = make_snapshot(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    EXPECT_EQ(largest_weak_component(g), 4u);
    EXPECT_EQ(largest_strong_component(g), 3u);
    EXPECT_EQ(weak_components(g).size(), 2u);
    EXPECT_EQ(strong_components(g).size(), 3u);
}

TEST(ReferenceDistributions, Binomial) {
    const auto zero = binomial_pmf(1000, 0.0);
    EXPECT_DOUBLE_EQ(zero[0], 1.0);
    const auto pmf = binomial_pmf(1000, 20.0 / 1000.0);
    ASSERT_EQ(pmf.size(), 1000u);
    double mass = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        mass += pmf[k];
        mean += static_cast<double>(k) * pmf[k];
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_NEAR(mean, 999.0 * 0.02, 1e-9);
}

TEST(ReferenceDistributions, PowerLaw) {
    const auto pmf = powerlaw_pmf(2.0, 1, 100);
    EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(pmf[0] / pmf[1], 4.0, 1e-12);
}

TEST(ComputeMetrics, FullInDegreeCount) {
    // Everyone links to 0 and 1, which also link to each other.
    Edges edges{{0, 1}, {1, 0}};
    for (std::uint32_t v = 2; v < 6; ++v) {
        edges.emplace_back(v, 0);
        edges.emplace_back(v, 1);
    }
    const auto m = compute_metrics(make_snapshot(6, edges));
    EXPECT_EQ(m.full_in_degree_nodes, 2u);
    EXPECT_EQ(m.max_in_degree, 5u);
    EXPECT_EQ(m.diameter, 2u);
    EXPECT_EQ(m.largest_weak, 6u);
    EXPECT_EQ(m.largest_strong, 2u);
}

}  // namespace
}  // namespace hubsim
