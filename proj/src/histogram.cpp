#include "tgtm/histogram.hpp"

#include <cmath>
#include <stdexcept>

namespace tgtm {

namespace {

void check_depth(int bit_depth, int min_depth) {
    if (bit_depth < min_depth || bit_depth > 32)
        throw std::invalid_argument("histogram: unsupported bit depth");
}

} // namespace

void validate(const HdrImage& img) {
    if (img.width < 0 || img.height < 0)
        throw std::invalid_argument("image: negative dimensions");
    if (img.bit_depth < 1 || img.bit_depth > 32)
        throw std::invalid_argument("image: bit depth out of range");
    if (img.samples.size() != img.pixel_count() * 3)
        throw std::invalid_argument("image: sample count does not match dimensions");
    uint32_t max = img.max_value();
    for (uint32_t v : img.samples)
        if (v > max)
            throw std::invalid_argument("image: sample exceeds bit depth");
}

void validate(const LumaImage& img) {
    if (img.width < 0 || img.height < 0)
        throw std::invalid_argument("image: negative dimensions");
    if (img.bit_depth < 1 || img.bit_depth > 32)
        throw std::invalid_argument("image: bit depth out of range");
    if (img.samples.size() != img.pixel_count())
        throw std::invalid_argument("image: sample count does not match dimensions");
    uint32_t max = img.max_value();
    for (uint32_t v : img.samples)
        if (v > max)
            throw std::invalid_argument("image: sample exceeds bit depth");
}

void validate(const Image8& img) {
    if (img.width < 0 || img.height < 0)
        throw std::invalid_argument("image: negative dimensions");
    if (img.samples.size() != img.pixel_count() * 3)
        throw std::invalid_argument("image: sample count does not match dimensions");
}

LumaImage rgb_to_luminance(const HdrImage& img) {
    if (img.samples.size() != img.pixel_count() * 3)
        throw std::invalid_argument("rgb_to_luminance: expected a 3-channel image");
    LumaImage out;
    out.width = img.width;
    out.height = img.height;
    out.bit_depth = img.bit_depth;
    out.samples.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        uint64_t r = img.samples[3 * i];
        uint64_t g = img.samples[3 * i + 1];
        uint64_t b = img.samples[3 * i + 2];
        // 0.25*R + 0.50*G + 0.25*B rounded half up.
        out.samples[i] = static_cast<uint32_t>((r + 2 * g + b + 2) >> 2);
    }
    return out;
}

LumaImage bitwidth_convert(const LumaImage& img, int target_bits) {
    check_depth(target_bits, 1);
    if (target_bits == img.bit_depth)
        return img;
    LumaImage out;
    out.width = img.width;
    out.height = img.height;
    out.bit_depth = target_bits;
    out.samples.resize(img.samples.size());
    if (target_bits > img.bit_depth) {
        int shift = target_bits - img.bit_depth;
        for (std::size_t i = 0; i < img.samples.size(); ++i)
            out.samples[i] = static_cast<uint32_t>(static_cast<uint64_t>(img.samples[i]) << shift);
    } else {
        int shift = img.bit_depth - target_bits;
        for (std::size_t i = 0; i < img.samples.size(); ++i)
            out.samples[i] = img.samples[i] >> shift;
    }
    return out;
}

int linear_bin(uint32_t value, int bit_depth) {
    return static_cast<int>(value >> (bit_depth - 8));
}

int log_bin(uint32_t value, int bit_depth) {
    double b = std::floor(kHistogramBins * std::log2(static_cast<double>(value) + 1.0) / bit_depth);
    return b >= kHistogramBins ? kHistogramBins - 1 : static_cast<int>(b);
}

BinCounts linear_histogram(const LumaImage& img) {
    check_depth(img.bit_depth, 8);
    BinCounts counts{};
    for (uint32_t v : img.samples)
        ++counts[static_cast<std::size_t>(linear_bin(v, img.bit_depth))];
    return counts;
}

BinCounts log_histogram(const LumaImage& img) {
    check_depth(img.bit_depth, 1);
    BinCounts counts{};
    for (uint32_t v : img.samples)
        ++counts[static_cast<std::size_t>(log_bin(v, img.bit_depth))];
    return counts;
}

NormalizedHistogram normalize(const BinCounts& counts) {
    uint64_t total = 0;
    for (uint64_t c : counts)
        total += c;
    if (total == 0)
        throw std::invalid_argument("normalize: histogram is empty");
    NormalizedHistogram out{};
    double inv = 1.0 / static_cast<double>(total);
    for (int i = 0; i < kHistogramBins; ++i)
        out[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) * inv;
    return out;
}

} // namespace tgtm
