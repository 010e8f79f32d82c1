#pragma once

#include <filesystem>
#include <variant>

#include "tgtm/image.hpp"

namespace tgtm {

/// TGTM-RAW container: magic "TGTMRAW1", then width, height, bit_depth and
/// channel_count as 32-bit little-endian unsigned integers, then one 32-bit
/// little-endian word per sample, row-major and pixel-interleaved.
/// bit_depth must be 1..26 and channel_count 1 or 3.
inline constexpr char kRawMagic[8] = {'T', 'G', 'T', 'M', 'R', 'A', 'W', '1'};

using RawImage = std::variant<HdrImage, LumaImage>;

/// Reads and fully validates a TGTM-RAW file. Throws DataError on bad magic,
/// length mismatch, or the first out-of-range sample.
RawImage read_raw(const std::filesystem::path& path);

void write_raw(const HdrImage& img, const std::filesystem::path& path);
void write_raw(const LumaImage& img, const std::filesystem::path& path);

/// 8-bit RGB PNG interchange. Grayscale files are promoted to RGB by channel
/// replication; 16-bit, palette, and alpha files are rejected.
Image8 read_png8(const std::filesystem::path& path);
void write_png8(const Image8& img, const std::filesystem::path& path);

} // namespace tgtm
