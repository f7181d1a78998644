#pragma once

#include <array>
#include <cstdint>

namespace novelty {

// splitmix64 step (Steele, Lea, Flood). Used as a finalizer for seed
// derivation and as the stream that expands a 64-bit seed into generator
// state. Fixed algorithm so seeds reproduce bit-identically across
// platforms and reimplementations.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Order-sensitive sub-stream derivation: derive_seed(derive_seed(m, i), j)
// gives every (i, j) cell its own stream, independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(base ^ splitmix64(index ^ 0xA5A5A5A5A5A5A5A5ULL));
}

/// xoshiro256++ (Blackman & Vigna). Seeded through a splitmix64 stream per
/// the authors' recommendation; state is never all-zero for any seed.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = splitmix64(sm);
            sm += 0x9E3779B97F4A7C15ULL;
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + uniform01() * (hi - lo); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace novelty
