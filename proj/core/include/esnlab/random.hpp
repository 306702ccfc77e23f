#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace esnlab {

using Rng = std::mt19937_64;

/// Fixed child-stream indices under one root seed. New consumers get new
/// indices; existing indices never change.
enum class Stream : std::uint64_t {
    reservoir = 1,
    input = 2,
    feedback = 3,
    noise = 4,
    initial_state = 5,
    prediction_noise = 6,
};

/// Deterministically mixes a parent seed with a child index (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    std::uint64_t z = parent ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// derive_seed applied along a path of indices.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) {
    for (std::uint64_t i : path) parent = derive_seed(parent, i);
    return parent;
}

inline Rng stream_rng(std::uint64_t root_seed, Stream s) {
    return Rng(derive_seed(root_seed, static_cast<std::uint64_t>(s)));
}

/// Uniform draw on [-1, 1).
inline double uniform_pm1(Rng& rng) { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); }

}  // namespace esnlab
