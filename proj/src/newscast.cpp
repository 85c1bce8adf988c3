#include <algorithm>

#include "hubsim/protocols.hpp"

namespace hubsim {

std::vector<Descriptor> newscast_buffer(NewscastState& st, NodeId self, std::uint32_t c, Rng& rng) {
    rng.shuffle(std::span<Descriptor>(st.cache));
    std::vector<Descriptor> buffer{{self, 0}};
    const std::size_t head = c / 2 >= 1 ? c / 2 - 1 : 0;
    for (std::size_t i = 0; i < std::min(head, st.cache.size()); ++i) buffer.push_back(st.cache[i]);
    return buffer;
}

void newscast_merge(NewscastState& st, std::span<const Descriptor> received, NodeId self, std::uint32_t c, Rng& rng) {
    auto& cache = st.cache;
    cache.insert(cache.end(), received.begin(), received.end());
    std::erase_if(cache, [&](const Descriptor& d) { return d.id == self; });

    // Freshest descriptor wins per id.
    std::stable_sort(cache.begin(), cache.end(), [](const Descriptor& a, const Descriptor& b) {
        if (a.id != b.id) return a.id < b.id;
        return a.age < b.age;
    });
    cache.erase(std::unique(cache.begin(), cache.end(),
                            [](const Descriptor& a, const Descriptor& b) { return a.id == b.id; }),
                cache.end());

    if (cache.size() > c) {
        rng.shuffle(std::span<Descriptor>(cache));
        std::stable_sort(cache.begin(), cache.end(),
                         [](const Descriptor& a, const Descriptor& b) { return a.age < b.age; });
        cache.resize(c);
    }
    for (Descriptor& d : cache) ++d.age;
}

void newscast_round(OverlayNetwork& net, NodeId node) {
    auto& st = net.state_as<NewscastState>(node);
    if (st.cache.empty()) return;
    Rng& rng = net.rng();
    const NodeId q = st.cache[rng.below(st.cache.size())].id;
    if (!is_responding(net, q)) return;
    const auto buffer = newscast_buffer(st, node, net.params().c, rng);
    const auto reply = newscast_handle(net, q, buffer, node);
    newscast_merge(st, reply, node, net.params().c, rng);
}

std::vector<Descriptor> newscast_handle(OverlayNetwork& net, NodeId node, std::span<const Descriptor> buffer,
                                        NodeId from) {
    (void)from;
    auto& st = net.state_as<NewscastState>(node);
    auto reply = newscast_buffer(st, node, net.params().c, net.rng());
    newscast_merge(st, buffer, node, net.params().c, net.rng());
    return reply;
}

}  // namespace hubsim
