#pragma once

#include <cstdint>

namespace flmpc {

/// SplitMix64. The generator behind every seeded choice in the project
/// (client selection, derived mask pads, test data). Fully specified in
/// docs/formats.md so transcripts replay byte-identically anywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish value in [0, bound). Modulo bias is accepted; anything
    /// needing exact uniformity enumerates instead of sampling.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

/// Folds a sequence of labels into a single sub-seed. Used to give each
/// (round, pair) its own pad stream under one experiment seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c) {
    SplitMix64 g(seed);
    std::uint64_t x = g.next();
    x ^= a;
    x = SplitMix64(x).next();
    x ^= b;
    x = SplitMix64(x).next();
    x ^= c;
    return SplitMix64(x).next();
}

} // namespace flmpc
