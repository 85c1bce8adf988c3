#include "hubsim/types.hpp"

#include <algorithm>

namespace hubsim {

std::string_view to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::elevator: return "elevator";
        case ProtocolKind::proofs: return "proofs";
        case ProtocolKind::newscast: return "newscast";
        case ProtocolKind::phenix: return "phenix";
    }
    return "unknown";
}

ProtocolKind parse_protocol(std::string_view name) {
    if (name == "elevator") return ProtocolKind::elevator;
    if (name == "proofs") return ProtocolKind::proofs;
    if (name == "newscast") return ProtocolKind::newscast;
    if (name == "phenix") return ProtocolKind::phenix;
    throw ConfigError("unknown protocol '" + std::string(name) + "'");
}

SimParams SimParams::with_cache(std::uint32_t n, std::uint32_t c) {
    SimParams p;
    p.n = n;
    p.c = c;
    p.h = std::max(1u, c / 2);
    p.l = p.h;
    p.s = p.h;
    return p;
}

void SimParams::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid parameters: " + what); };
    if (c == 0) fail("c must be > 0");
    if (h == 0 || h > c) fail("h must satisfy 0 < h <= c");
    if (c >= n) fail("c must be < n");
    if (l == 0 || l > c) fail("l must satisfy 0 < l <= c");
    if (s == 0 || s > c) fail("s must satisfy 0 < s <= c");
    if (metric_period == 0) fail("metric_period must be >= 1");
    if (gamma == 0) fail("gamma must be >= 1");
}

}  // namespace hubsim
