#pragma once

#include <cstdint>
#include <random>

namespace uavmec {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent seeds for named streams so the
// environment, the agent and evaluation rollouts never share draws.
inline std::uint64_t mix_seed(std::uint64_t state) {
    std::uint64_t z = (state + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix_seed(mix_seed(base) ^ mix_seed(stream * 0x2545f4914f6cdd1dULL + 1));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform_in(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace uavmec
