#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tgtm {

/// Largest sample value representable at a given bit depth.
inline constexpr uint32_t max_code_value(int bit_depth) {
    return bit_depth >= 32 ? 0xffffffffu : ((1u << bit_depth) - 1u);
}

/// Linear RGB raster with explicit bit depth, row-major, pixel-interleaved.
/// Samples are unsigned code values in [0, 2^bit_depth - 1].
struct HdrImage {
    int width = 0;
    int height = 0;
    int bit_depth = 0; // bits per sample, 8..26 in the processing pipeline
    std::vector<uint32_t> samples; // width * height * 3

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    uint32_t max_value() const { return max_code_value(bit_depth); }
};

/// Single-channel luminance raster, same conventions as HdrImage.
struct LumaImage {
    int width = 0;
    int height = 0;
    int bit_depth = 0; // 8..32
    std::vector<uint32_t> samples; // width * height

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    uint32_t max_value() const { return max_code_value(bit_depth); }
};

/// Display-referred 8-bit sRGB raster, row-major, pixel-interleaved RGB.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> samples; // width * height * 3

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
};

/// Throws std::invalid_argument when dimensions, sample count, or sample
/// range are inconsistent.
void validate(const HdrImage& img);
void validate(const LumaImage& img);
void validate(const Image8& img);

} // namespace tgtm
