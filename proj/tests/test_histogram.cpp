#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tgtm/histogram.hpp"
#include "tgtm/random.hpp"

using namespace tgtm;

namespace {

HdrImage single_pixel_rgb(uint32_t r, uint32_t g, uint32_t b, int depth) {
    HdrImage img;
    img.width = 1;
    img.height = 1;
    img.bit_depth = depth;
    img.samples = {r, g, b};
    return img;
}

LumaImage single_pixel_luma(uint32_t v, int depth) {
    LumaImage img;
    img.width = 1;
    img.height = 1;
    img.bit_depth = depth;
    img.samples = {v};
    return img;
}

LumaImage random_luma(std::mt19937_64& rng, int depth, int width = 16, int height = 16) {
    LumaImage img;
    img.width = width;
    img.height = height;
    img.bit_depth = depth;
    img.samples.resize(img.pixel_count());
    uint64_t max = max_code_value(depth);
    for (uint32_t& v : img.samples)
        v = static_cast<uint32_t>(rng() % (max + 1));
    return img;
}

} // namespace

TEST_CASE("rgb_to_luminance weighted sum with rounding") {
    CHECK(rgb_to_luminance(single_pixel_rgb(100, 200, 100, 26)).samples[0] == 150);
    // weights sum to one
    for (uint32_t v : {0u, 1u, 255u, 67108863u})
        CHECK(rgb_to_luminance(single_pixel_rgb(v, v, v, 26)).samples[0] == v);
    // full scale does not overflow
    uint32_t m = 67108863u;
    CHECK(rgb_to_luminance(single_pixel_rgb(m, m, m, 26)).samples[0] == m);
    // round half up: 0.25 -> 0, 0.5 -> 1
    CHECK(rgb_to_luminance(single_pixel_rgb(1, 0, 0, 26)).samples[0] == 0);
    CHECK(rgb_to_luminance(single_pixel_rgb(1, 0, 1, 26)).samples[0] == 1);
}

TEST_CASE("luminance lies between the channel extremes") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        uint32_t r = static_cast<uint32_t>(rng() % 67108864);
        uint32_t g = static_cast<uint32_t>(rng() % 67108864);
        uint32_t b = static_cast<uint32_t>(rng() % 67108864);
        uint32_t y = rgb_to_luminance(single_pixel_rgb(r, g, b, 26)).samples[0];
        CHECK(y >= std::min({r, g, b}));
        CHECK(y <= std::max({r, g, b}));
    }
}

TEST_CASE("bitwidth_convert shifts and identity") {
    LumaImage img = single_pixel_luma(255, 8);
    CHECK(bitwidth_convert(img, 8).samples[0] == 255);
    CHECK(bitwidth_convert(img, 26).samples[0] == 255u << 18);
    LumaImage full26 = single_pixel_luma(67108863u, 26);
    CHECK(bitwidth_convert(full26, 12).samples[0] == 4095);
    CHECK(bitwidth_convert(full26, 26).samples == full26.samples);
}

TEST_CASE("linear_histogram bin boundaries at 26 bits") {
    // first bin covers 0 .. 2^18-1
    BinCounts h = linear_histogram(single_pixel_luma((1u << 18) - 1, 26));
    CHECK(h[0] == 1);
    h = linear_histogram(single_pixel_luma(1u << 18, 26));
    CHECK(h[1] == 1);
    h = linear_histogram(single_pixel_luma(67108863u, 26));
    CHECK(h[255] == 1);
}

TEST_CASE("log_histogram binning formula") {
    CHECK(log_bin(0, 26) == 0);
    CHECK(log_bin(67108863u, 26) == 255);
    CHECK(log_bin(30, 26) == 48); // floor(256*log2(31)/26)
    BinCounts h = log_histogram(single_pixel_luma(30, 26));
    CHECK(h[48] == 1);
}

TEST_CASE("bin mappings are monotone in the sample value") {
    std::mt19937_64 rng(7);
    for (int depth : {8, 12, 26}) {
        uint64_t max = max_code_value(depth);
        for (int i = 0; i < 2000; ++i) {
            uint32_t v = static_cast<uint32_t>(rng() % max);
            uint32_t w = v + 1;
            CHECK(linear_bin(v, depth) <= linear_bin(w, depth));
            CHECK(log_bin(v, depth) <= log_bin(w, depth));
        }
    }
}

TEST_CASE("histogram counts are conserved") {
    std::mt19937_64 rng(11);
    for (int depth : {8, 16, 26}) {
        LumaImage img = random_luma(rng, depth);
        uint64_t total = 0;
        for (uint64_t c : linear_histogram(img))
            total += c;
        CHECK(total == img.pixel_count());
        total = 0;
        for (uint64_t c : log_histogram(img))
            total += c;
        CHECK(total == img.pixel_count());
    }
}

TEST_CASE("normalize sums to one and rejects empties") {
    BinCounts counts{};
    counts[3] = 7;
    NormalizedHistogram n = normalize(counts);
    CHECK(n[3] == 1.0);
    counts[9] = 7;
    counts[200] = 14;
    n = normalize(counts);
    double sum = 0.0;
    for (double v : n)
        sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    BinCounts zero{};
    CHECK_THROWS_AS(normalize(zero), std::invalid_argument);
    BinCounts uniformc{};
    for (auto& c : uniformc)
        c = 3;
    n = normalize(uniformc);
    for (double v : n)
        CHECK(v == doctest::Approx(1.0 / 256.0));
}

TEST_CASE("normalized histograms are invariant to pixel replication") {
    std::mt19937_64 rng(13);
    LumaImage img = random_luma(rng, 26, 12, 9);
    LumaImage doubled;
    doubled.width = img.width * 2;
    doubled.height = img.height * 2;
    doubled.bit_depth = img.bit_depth;
    doubled.samples.resize(doubled.pixel_count());
    for (int y = 0; y < doubled.height; ++y)
        for (int x = 0; x < doubled.width; ++x)
            doubled.samples[static_cast<std::size_t>(y) * doubled.width + x] =
                img.samples[static_cast<std::size_t>(y / 2) * img.width + x / 2];

    CHECK(normalize(linear_histogram(img)) == normalize(linear_histogram(doubled)));
    CHECK(normalize(log_histogram(img)) == normalize(log_histogram(doubled)));
}

TEST_CASE("luminance requires three channels") {
    HdrImage bad;
    bad.width = 2;
    bad.height = 1;
    bad.bit_depth = 8;
    bad.samples = {1, 2, 3}; // not 2*3 samples
    CHECK_THROWS_AS(rgb_to_luminance(bad), std::invalid_argument);
}
