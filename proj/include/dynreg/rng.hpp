#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dynreg {

// All randomness flows through mt19937_64 plus hand-rolled transforms, so a
// given seed produces identical streams regardless of the standard library.
using Rng = std::mt19937_64;

// splitmix64 scramble; derives independent sub-stream seeds from a master seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller without the cached spare, one value per call.
inline double normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double rademacher(Rng& rng) {
    return (rng() >> 63) ? 1.0 : -1.0;
}

}  // namespace dynreg
