#pragma once

#include <cstdint>
#include <array>
#include <bit>
#include <span>
#include <utility>

namespace hubsim {

// Purpose tags for substream derivation. Adding a new purpose never shifts
// the streams of the existing ones.
enum class StreamPurpose : std::uint64_t {
    init = 1,
    protocol = 2,
    scenario = 3,
    metrics = 4,
    analysis = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic pseudorandom stream (xoshiro256**, state expanded from the
// seed with splitmix64). Bounded integers, floats, normals and shuffles are
// implemented here so results never depend on a standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Substream for (master seed, replication, purpose).
    static Rng derive(std::uint64_t master, std::uint64_t replication, StreamPurpose purpose);

    std::uint64_t next() {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double normal(double mean, double stddev);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    // Moves a uniform random k-subset (in uniform random order) to the front.
    template <typename T>
    void shuffle_prefix(std::span<T> items, std::size_t k) {
        const std::size_t n = items.size();
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + below(n - i);
            std::swap(items[i], items[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> state_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hubsim
