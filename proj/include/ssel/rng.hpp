#pragma once

#include <cstdint>
#include <random>

namespace ssel {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based sub-stream: the same (master, domain, i, j) always gives the
/// same engine state, independent of the order streams are created in.
inline Rng make_stream(std::uint64_t master, std::uint64_t domain, std::uint64_t i = 0, std::uint64_t j = 0) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ domain);
    s = splitmix64(s ^ i);
    s = splitmix64(s ^ j);
    return Rng(s);
}

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double normal(Rng& rng, double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng); }

}  // namespace ssel
