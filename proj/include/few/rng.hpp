#pragma once

#include <cstdint>
#include <random>

namespace few {

// Single RNG type for the whole library. Every stochastic routine takes an
// Rng& (or a seed it expands into one); nothing reads global entropy.
using Rng = std::mt19937_64;

// splitmix64 step, used to derive child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministically combines a seed with stream identifiers (dataset index,
// split index, ...) so independent trials get independent, reproducible streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed ^ 0x2545F4914F6CDD1Dull);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

}  // namespace few
