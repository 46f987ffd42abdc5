#pragma once

// Reproducible substream seeding. Every simulated object (replicate, SNP,
// bootstrap draw) gets its own generator derived from (seed, hi, lo), so
// results are independent of how work is partitioned across threads.

#include <cstdint>
#include <random>

#include "rscan/genetics.hpp"
#include "rscan/stats.hpp"

namespace rscan {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hashes (seed, hi, lo) into a single 64-bit substream seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t hi,
                              std::uint64_t lo = 0) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state ^= hi + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(state);
    state ^= lo + 0xbf58476d1ce4e5b9ULL;
    h ^= splitmix64(state);
    return h;
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t hi,
                                 std::uint64_t lo = 0) {
    return std::mt19937_64(mix_seed(seed, hi, lo));
}

/// One multinomial draw over three cells via conditional binomials.
template <typename Rng>
std::array<std::int64_t, 3> multinomial3(Rng& rng, std::int64_t n,
                                         const GenotypeDist& probs) {
    std::array<std::int64_t, 3> out{0, 0, 0};
    if (n <= 0) return out;

    std::binomial_distribution<std::int64_t> b0(n, std::clamp(probs[0], 0.0, 1.0));
    out[0] = b0(rng);

    const std::int64_t rest = n - out[0];
    const double rem = 1.0 - probs[0];
    if (rest > 0) {
        const double p1 = rem > 0.0 ? std::clamp(probs[1] / rem, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> b1(rest, p1);
        out[1] = b1(rng);
    }
    out[2] = n - out[0] - out[1];
    return out;
}

/// Case and control tables drawn from their genotype distributions.
template <typename Rng>
GenotypeCounts sample_counts(Rng& rng, std::int64_t cases, std::int64_t controls,
                             const GenotypeDist& case_dist,
                             const GenotypeDist& control_dist) {
    const auto rc = multinomial3(rng, cases, case_dist);
    const auto sc = multinomial3(rng, controls, control_dist);
    return {rc[0], rc[1], rc[2], sc[0], sc[1], sc[2]};
}

}  // namespace rscan
