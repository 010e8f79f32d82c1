#pragma once

#include <array>
#include <cstdint>

#include "tgtm/image.hpp"

namespace tgtm {

inline constexpr int kHistogramBins = 256;

using BinCounts = std::array<uint64_t, kHistogramBins>;
using NormalizedHistogram = std::array<double, kHistogramBins>;

/// The network input: normalized linear and logarithmic luminance histograms.
struct HistogramPair {
    NormalizedHistogram linear{};
    NormalizedHistogram log{};
};

/// Luminance with weights [0.25, 0.50, 0.25] on R, G, B, rounded half up.
/// Bit depth is preserved.
LumaImage rgb_to_luminance(const HdrImage& img);

/// Shifts samples left or right to the target bit depth. Identity when the
/// depths already match.
LumaImage bitwidth_convert(const LumaImage& img, int target_bits);

/// Uniform binning over code values: bin(v) = v >> (bit_depth - 8).
/// Requires bit_depth >= 8.
BinCounts linear_histogram(const LumaImage& img);

/// Octave binning: bin(v) = min(255, floor(256 * log2(v + 1) / bit_depth)).
BinCounts log_histogram(const LumaImage& img);

int linear_bin(uint32_t value, int bit_depth);
int log_bin(uint32_t value, int bit_depth);

/// Divides by the total count so bins sum to 1. Throws on an all-zero input.
NormalizedHistogram normalize(const BinCounts& counts);

} // namespace tgtm
