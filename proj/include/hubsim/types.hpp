#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hubsim {

// Opaque peer address. Allocated monotonically and never reused within a run.
using NodeId = std::uint32_t;

enum class ProtocolKind { elevator, proofs, newscast, phenix };

std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view name);

// Invalid parameters or configuration. The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A service call whose precondition does not hold (dead node, empty cache, ...).
class ServiceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimParams {
    std::uint32_t n = 1000;
    std::uint32_t c = 20;
    std::uint32_t h = 10;
    std::uint32_t l = 10;  // PROOFS shuffle length
    std::uint32_t s = 10;  // Phenix preferential connections
    std::uint32_t gamma = 20;
    std::uint32_t tau = 10;
    std::uint32_t maxsize_buffer_backward = 100;
    std::uint32_t cycles = 1000;
    std::uint64_t seed = 1;
    std::uint32_t metric_period = 10;

    // Params with h, l and s at their c-derived defaults (c/2).
    static SimParams with_cache(std::uint32_t n, std::uint32_t c);

    // Throws ConfigError naming the first violated constraint.
    void validate() const;

    bool operator==(const SimParams&) const = default;
};

}  // namespace hubsim
