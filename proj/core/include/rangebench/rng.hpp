#pragma once

#include <cstdint>
#include <random>

#include "rangebench/geom.hpp"

namespace rangebench {

/// splitmix64 step. Used both as a stand-alone hash (stateless per-node mesh
/// jitter) and to derive independent stream seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

/// Map 64 random bits to a double in [0, 1). Explicit so generated values do
/// not depend on the standard library's distribution implementation.
inline double to_unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform_unit(std::mt19937_64& rng) { return to_unit_double(rng()); }

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

inline Point3 uniform_point_in(std::mt19937_64& rng, const Aabb& b) {
    return {uniform_in(rng, b.min.x, b.max.x), uniform_in(rng, b.min.y, b.max.y),
            uniform_in(rng, b.min.z, b.max.z)};
}

}  // namespace rangebench
