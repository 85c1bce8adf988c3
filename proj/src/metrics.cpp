#include "hubsim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hubsim {

namespace {

// Row-major adjacency bitsets over n vertices.
class BitMatrix {
public:
    explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

    void set(std::size_t row, std::size_t col) { bits_[row * words_ + col / 64] |= std::uint64_t{1} << (col % 64); }
    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }
    std::size_t words() const { return words_; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return size_[a];
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return size_[a];
    }

    std::uint32_t size_of(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

// Iterative Tarjan restricted to vertices with present[v] set.
std::vector<std::vector<std::uint32_t>> tarjan(const std::vector<std::vector<std::uint32_t>>& out,
                                               const std::vector<std::uint8_t>& present) {
    const std::size_t n = out.size();
    constexpr std::uint32_t unvisited = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (vertex, next edge)
    std::vector<std::vector<std::uint32_t>> components;
    std::uint32_t counter = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (!present[root] || index[root] != unvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < out[v].size()) {
                const std::uint32_t w = out[v][edge++];
                if (!present[w]) continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::uint32_t finished = v;
            call.pop_back();
            if (!call.empty()) {
                const std::uint32_t parent = call.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
            if (low[finished] == index[finished]) {
                std::vector<std::uint32_t> component;
                std::uint32_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component.push_back(w);
                } while (w != finished);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
        }
    }
    return components;
}

std::size_t largest_size(const std::vector<std::vector<std::uint32_t>>& components) {
    std::size_t best = 0;
    for (const auto& c : components) best = std::max(best, c.size());
    return best;
}

}  // namespace

std::size_t GraphSnapshot::edge_count() const {
    std::size_t total = 0;
    for (const auto& o : out) total += o.size();
    return total;
}

GraphSnapshot take_snapshot(const OverlayNetwork& net) {
    GraphSnapshot snap;
    snap.cycle = net.cycle();
    snap.ids.assign(net.alive().begin(), net.alive().end());
    snap.out.resize(snap.ids.size());
    std::vector<std::uint32_t> local(net.next_id(), UINT32_MAX);
    for (std::uint32_t v = 0; v < snap.ids.size(); ++v) local[snap.ids[v]] = v;
    for (std::uint32_t v = 0; v < snap.ids.size(); ++v) {
        for (NodeId target : net.out_links(snap.ids[v])) {
            if (target >= local.size() || target == snap.ids[v]) continue;
            const std::uint32_t w = local[target];
            if (w == UINT32_MAX) continue;
            snap.out[v].push_back(w);
        }
        std::sort(snap.out[v].begin(), snap.out[v].end());
        snap.out[v].erase(std::unique(snap.out[v].begin(), snap.out[v].end()), snap.out[v].end());
    }
    return snap;
}

GraphSnapshot make_snapshot(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    GraphSnapshot snap;
    snap.ids.resize(n);
    std::iota(snap.ids.begin(), snap.ids.end(), NodeId{0});
    snap.out.resize(n);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) throw std::out_of_range("make_snapshot: edge endpoint out of range");
        if (a != b) snap.out[a].push_back(b);
    }
    for (auto& o : snap.out) {
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    return snap;
}

std::vector<std::uint32_t> in_degrees(const GraphSnapshot& snap) {
    std::vector<std::uint32_t> deg(snap.size(), 0);
    for (const auto& o : snap.out) {
        for (std::uint32_t w : o) ++deg[w];
    }
    return deg;
}

DegreeHistograms degree_distributions(const GraphSnapshot& snap) {
    DegreeHistograms h;
    for (std::uint32_t d : in_degrees(snap)) ++h.in[d];
    for (const auto& o : snap.out) ++h.out[static_cast<std::uint32_t>(o.size())];
    return h;
}

std::vector<std::vector<std::uint32_t>> undirected_adjacency(const GraphSnapshot& snap) {
    std::vector<std::vector<std::uint32_t>> adj(snap.size());
    for (std::uint32_t v = 0; v < snap.size(); ++v) {
        for (std::uint32_t w : snap.out[v]) {
            adj[v].push_back(w);
            adj[w].push_back(v);
        }
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return adj;
}

Clustering clustering_coefficient(const GraphSnapshot& snap) {
    const std::size_t n = snap.size();
    const auto adj = undirected_adjacency(snap);
    BitMatrix rows(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (std::uint32_t w : adj[v]) rows.set(v, w);
    }
    Clustering result;
    result.per_node.assign(n, 0.0);
    double total = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::size_t k = adj[v].size();
        if (k < 2) continue;
        std::uint64_t twice_triangles = 0;
        const std::uint64_t* rv = rows.row(v);
        for (std::uint32_t w : adj[v]) {
            const std::uint64_t* rw = rows.row(w);
            for (std::size_t i = 0; i < rows.words(); ++i) twice_triangles += std::popcount(rv[i] & rw[i]);
        }
        // twice_triangles counts every neighbour-neighbour edge twice, i.e. 2 e_i.
        const double ci = static_cast<double>(twice_triangles) / (static_cast<double>(k) * static_cast<double>(k - 1));
        result.per_node[v] = ci;
        total += ci;
    }
    result.mean = n == 0 ? 0.0 : total / static_cast<double>(n);
    return result;
}

std::vector<std::vector<std::uint32_t>> weak_components(const GraphSnapshot& snap) {
    const std::size_t n = snap.size();
    UnionFind uf(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (std::uint32_t w : snap.out[v]) uf.unite(v, w);
    }
    std::vector<std::vector<std::uint32_t>> by_root(n);
    for (std::uint32_t v = 0; v < n; ++v) by_root[uf.find(v)].push_back(v);
    std::vector<std::vector<std::uint32_t>> components;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!by_root[v].empty()) components.push_back(std::move(by_root[v]));
    }
    std::sort(components.begin(), components.end());
    return components;
}

std::vector<std::vector<std::uint32_t>> strong_components(const GraphSnapshot& snap) {
    auto components = tarjan(snap.out, std::vector<std::uint8_t>(snap.size(), 1));
    std::sort(components.begin(), components.end());
    return components;
}

std::size_t largest_weak_component(const GraphSnapshot& snap) { return largest_size(weak_components(snap)); }
std::size_t largest_strong_component(const GraphSnapshot& snap) { return largest_size(strong_components(snap)); }

PathMetrics path_metrics(const GraphSnapshot& snap) {
    PathMetrics result;
    if (snap.size() < 2) {
        result.degenerate = true;
        result.component_size = snap.size();
        return result;
    }
    const auto components = weak_components(snap);
    const std::vector<std::uint32_t>* largest = &components.front();
    for (const auto& c : components) {
        if (c.size() > largest->size()) largest = &c;
    }
    const std::size_t m = largest->size();
    result.component_size = m;
    if (m < 2) {
        result.degenerate = true;
        return result;
    }

    // Bit-parallel BFS inside the component.
    std::vector<std::uint32_t> local(snap.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < m; ++i) local[(*largest)[i]] = i;
    const auto adj = undirected_adjacency(snap);
    BitMatrix rows(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t w : adj[(*largest)[i]]) rows.set(i, local[w]);
    }
    const std::size_t words = rows.words();
    std::vector<std::uint64_t> visited(words), frontier(words), next(words);
    std::uint64_t distance_sum = 0;
    std::uint32_t diameter = 0;
    for (std::uint32_t source = 0; source < m; ++source) {
        std::fill(visited.begin(), visited.end(), 0);
        std::fill(frontier.begin(), frontier.end(), 0);
        visited[source / 64] |= std::uint64_t{1} << (source % 64);
        frontier[source / 64] |= std::uint64_t{1} << (source % 64);
        std::uint32_t depth = 0;
        std::size_t reached = 1;
        while (reached < m) {
            std::fill(next.begin(), next.end(), 0);
            for (std::size_t wi = 0; wi < words; ++wi) {
                std::uint64_t bits = frontier[wi];
                while (bits != 0) {
                    const std::size_t v = wi * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    const std::uint64_t* rv = rows.row(v);
                    for (std::size_t i = 0; i < words; ++i) next[i] |= rv[i];
                }
            }
            std::size_t found = 0;
            for (std::size_t i = 0; i < words; ++i) {
                next[i] &= ~visited[i];
                visited[i] |= next[i];
                found += static_cast<std::size_t>(std::popcount(next[i]));
            }
            ++depth;
            if (found == 0) break;
            distance_sum += static_cast<std::uint64_t>(found) * depth;
            reached += found;
            std::swap(frontier, next);
        }
        diameter = std::max(diameter, depth);
    }
    result.average_path_length = static_cast<double>(distance_sum) / (static_cast<double>(m) * static_cast<double>(m - 1));
    result.diameter = diameter;
    return result;
}

std::vector<std::uint32_t> removal_order(const GraphSnapshot& snap, RemovalOrder order, Rng& rng) {
    std::vector<std::uint32_t> seq(snap.size());
    std::iota(seq.begin(), seq.end(), 0u);
    if (order == RemovalOrder::random) {
        rng.shuffle(std::span<std::uint32_t>(seq));
    } else {
        const auto deg = in_degrees(snap);
        std::stable_sort(seq.begin(), seq.end(), [&](std::uint32_t a, std::uint32_t b) { return deg[a] > deg[b]; });
    }
    return seq;
}

std::vector<RobustnessPoint> robustness_sweep(const GraphSnapshot& snap, std::span<const std::uint32_t> order,
                                              ComponentKind component) {
    const std::size_t n = snap.size();
    if (order.size() != n) throw std::invalid_argument("robustness_sweep: order must cover every vertex");
    std::vector<RobustnessPoint> series(n + 1);
    for (std::size_t i = 0; i <= n; ++i) series[i].removed = static_cast<std::uint32_t>(i);

    if (component == ComponentKind::weak) {
        // Re-insert vertices in reverse removal order.
        const auto adj = undirected_adjacency(snap);
        UnionFind uf(n);
        std::vector<std::uint8_t> present(n, 0);
        std::uint32_t largest = 0;
        for (std::size_t i = n; i-- > 0;) {
            const std::uint32_t v = order[i];
            present[v] = 1;
            largest = std::max(largest, 1u);
            for (std::uint32_t w : adj[v]) {
                if (present[w]) largest = std::max(largest, uf.unite(v, w));
            }
            const auto remaining = static_cast<std::uint32_t>(n - i);
            series[i].outside = remaining - largest;
        }
        return series;
    }

    std::vector<std::uint8_t> present(n, 1);
    for (std::size_t i = 0; i <= n; ++i) {
        if (i > 0) present[order[i - 1]] = 0;
        const auto remaining = static_cast<std::uint32_t>(n - i);
        const auto largest = static_cast<std::uint32_t>(largest_size(tarjan(snap.out, present)));
        series[i].outside = remaining - largest;
    }
    return series;
}

std::vector<RobustnessPoint> robustness_sweep(const GraphSnapshot& snap, RemovalOrder order, ComponentKind component,
                                              Rng& rng) {
    const auto seq = removal_order(snap, order, rng);
    return robustness_sweep(snap, seq, component);
}

std::vector<double> binomial_pmf(std::uint32_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p must lie in [0, 1]");
    if (n == 0) throw std::invalid_argument("binomial_pmf: n must be >= 1");
    const std::uint32_t trials = n - 1;
    std::vector<double> pmf(trials + 1, 0.0);
    if (p == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf[trials] = 1.0;
        return pmf;
    }
    const double lp = std::log(p), lq = std::log1p(-p);
    for (std::uint32_t k = 0; k <= trials; ++k) {
        const double log_choose = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0);
        pmf[k] = std::exp(log_choose + k * lp + (trials - k) * lq);
    }
    return pmf;
}

std::vector<double> powerlaw_pmf(double exponent, std::uint32_t k_min, std::uint32_t k_max) {
    if (!(exponent > 1.0)) throw std::invalid_argument("powerlaw_pmf: exponent must be > 1");
    if (k_min == 0 || k_max < k_min) throw std::invalid_argument("powerlaw_pmf: need 1 <= k_min <= k_max");
    std::vector<double> pmf;
    pmf.reserve(k_max - k_min + 1);
    for (std::uint32_t k = k_min; k <= k_max; ++k) pmf.push_back(std::pow(static_cast<double>(k), -exponent));
    // Sum smallest terms first.
    double norm = 0.0;
    for (auto it = pmf.rbegin(); it != pmf.rend(); ++it) norm += *it;
    for (double& v : pmf) v /= norm;
    return pmf;
}

MetricsSnapshot compute_metrics(const GraphSnapshot& snap) {
    MetricsSnapshot m;
    m.cycle = snap.cycle;
    m.alive = snap.size();
    m.edges = snap.edge_count();
    const auto hist = degree_distributions(snap);
    m.in_degree = hist.in;
    m.out_degree = hist.out;
    m.clustering = clustering_coefficient(snap).mean;
    const PathMetrics paths = path_metrics(snap);
    m.average_path_length = paths.average_path_length;
    m.diameter = paths.diameter;
    m.largest_weak = largest_weak_component(snap);
    m.largest_strong = largest_strong_component(snap);
    m.mean_in_degree = m.alive == 0 ? 0.0 : static_cast<double>(m.edges) / static_cast<double>(m.alive);
    if (!hist.in.empty()) m.max_in_degree = hist.in.rbegin()->first;
    if (m.alive > 0) {
        const auto full = hist.in.find(static_cast<std::uint32_t>(m.alive - 1));
        if (full != hist.in.end()) m.full_in_degree_nodes = full->second;
    }
    return m;
}

}  // namespace hubsim
