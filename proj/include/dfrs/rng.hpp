#pragma once

#include <cstdint>

namespace dfrs {

/// splitmix64 (Vigna's public-domain generator). Chosen because its algorithm
/// is fully specified by the constants below, so identically seeded runs
/// reproduce bit-for-bit on every platform, and because sub-streams can be
/// derived from a seed without sharing state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, n). Plain modulo: the moduli used here are tiny
    /// compared to 2^64, so the bias is far below anything observable.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Deterministic sub-seed for an indexed independent stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(seed ^ (0x9e3779b97f4a7c15ull * (index + 1))).next();
    }

private:
    std::uint64_t state_;
};

} // namespace dfrs
