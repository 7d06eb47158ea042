#pragma once

#include <cstdint>
#include <random>

namespace rulls {

// Counter-based seed derivation. Every randomized stage receives its own
// engine seeded from (master seed, stream tag, counter), so adding iterations
// never perturbs the draws of earlier ones.
inline std::uint64_t mix_bits(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter = 0) {
    std::uint64_t h = mix_bits(master);
    h = mix_bits(h ^ mix_bits(stream));
    return mix_bits(h ^ mix_bits(counter));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// Stream tags for the pipeline stages that consume randomness.
namespace streams {
inline constexpr std::uint64_t kLandmarks = 1;
inline constexpr std::uint64_t kProjection = 2;
inline constexpr std::uint64_t kSubsample = 3;
inline constexpr std::uint64_t kColumnNoise = 4;
inline constexpr std::uint64_t kRowNoise = 5;
inline constexpr std::uint64_t kSplit = 6;
inline constexpr std::uint64_t kIteration = 7;
}  // namespace streams

}  // namespace rulls
