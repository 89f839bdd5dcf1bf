#pragma once

#include <cstdint>
#include <random>

namespace cmtag {

// std::uniform_real_distribution draws differently across standard libraries;
// these keep seeded results identical everywhere.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

}  // namespace cmtag
