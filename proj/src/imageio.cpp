#include "tgtm/imageio.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "tgtm/errors.hpp"
#include "tgtm/histogram.hpp"

namespace tgtm {

namespace {

uint32_t read_u32le(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

void put_u32le(std::vector<unsigned char>& out, uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw DataError("short write to " + path.string());
}

void write_raw_bytes(const std::filesystem::path& path, uint32_t width, uint32_t height,
                     uint32_t bit_depth, uint32_t channels, const std::vector<uint32_t>& samples) {
    std::vector<unsigned char> bytes;
    bytes.reserve(24 + samples.size() * 4);
    bytes.insert(bytes.end(), kRawMagic, kRawMagic + 8);
    put_u32le(bytes, width);
    put_u32le(bytes, height);
    put_u32le(bytes, bit_depth);
    put_u32le(bytes, channels);
    for (uint32_t v : samples)
        put_u32le(bytes, v);
    write_file(path, bytes);
}

} // namespace

RawImage read_raw(const std::filesystem::path& path) {
    std::vector<unsigned char> bytes = read_file(path);
    if (bytes.size() < 24 || std::memcmp(bytes.data(), kRawMagic, 8) != 0)
        throw DataError(path.string() + ": not a TGTM-RAW file");
    uint32_t width = read_u32le(bytes.data() + 8);
    uint32_t height = read_u32le(bytes.data() + 12);
    uint32_t bit_depth = read_u32le(bytes.data() + 16);
    uint32_t channels = read_u32le(bytes.data() + 20);
    if (bit_depth < 1 || bit_depth > 26)
        throw DataError(path.string() + ": bit depth must be 1..26");
    if (channels != 1 && channels != 3)
        throw DataError(path.string() + ": channel count must be 1 or 3");
    uint64_t count = static_cast<uint64_t>(width) * height * channels;
    if (bytes.size() != 24 + count * 4)
        throw DataError(path.string() + ": payload length does not match header");

    std::vector<uint32_t> samples(count);
    uint32_t max = max_code_value(static_cast<int>(bit_depth));
    for (uint64_t i = 0; i < count; ++i) {
        uint32_t v = read_u32le(bytes.data() + 24 + i * 4);
        if (v > max)
            throw DataError(path.string() + ": sample " + std::to_string(i) +
                            " exceeds bit depth " + std::to_string(bit_depth));
        samples[i] = v;
    }
    if (channels == 3) {
        HdrImage img;
        img.width = static_cast<int>(width);
        img.height = static_cast<int>(height);
        img.bit_depth = static_cast<int>(bit_depth);
        img.samples = std::move(samples);
        return img;
    }
    LumaImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.bit_depth = static_cast<int>(bit_depth);
    img.samples = std::move(samples);
    return img;
}

void write_raw(const HdrImage& img, const std::filesystem::path& path) {
    validate(img);
    if (img.bit_depth > 26)
        throw std::invalid_argument("write_raw: bit depth must be 1..26");
    write_raw_bytes(path, static_cast<uint32_t>(img.width), static_cast<uint32_t>(img.height),
                    static_cast<uint32_t>(img.bit_depth), 3, img.samples);
}

void write_raw(const LumaImage& img, const std::filesystem::path& path) {
    validate(img);
    if (img.bit_depth > 26)
        throw std::invalid_argument("write_raw: bit depth must be 1..26");
    write_raw_bytes(path, static_cast<uint32_t>(img.width), static_cast<uint32_t>(img.height),
                    static_cast<uint32_t>(img.bit_depth), 1, img.samples);
}

Image8 read_png8(const std::filesystem::path& path) {
    std::vector<unsigned char> bytes = read_file(path);

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
        throw DataError(path.string() + ": " + png.message);

    if (png.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&png);
        throw DataError(path.string() + ": 16-bit PNG is not supported");
    }
    if (png.format & (PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_COLORMAP)) {
        png_image_free(&png);
        throw DataError(path.string() + ": unsupported color type (need 8-bit gray or RGB)");
    }

    png.format = PNG_FORMAT_RGB; // grayscale promotes to RGB by replication
    Image8 img;
    img.width = static_cast<int>(png.width);
    img.height = static_cast<int>(png.height);
    img.samples.resize(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, img.samples.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw DataError(path.string() + ": " + msg);
    }
    return img;
}

void write_png8(const Image8& img, const std::filesystem::path& path) {
    validate(img);
    if (img.width == 0 || img.height == 0)
        throw std::invalid_argument("write_png8: empty image");

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, img.samples.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw DataError(path.string() + ": " + msg);
    }
}

} // namespace tgtm
