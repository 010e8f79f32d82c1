#pragma once

#include <cstdint>
#include <random>

namespace tgtm {

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// Hand-rolled so that seeded streams are identical across standard library
/// implementations (std::uniform_real_distribution is not portable).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace tgtm
