#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "tgtm/histogram.hpp"
#include "tgtm/image.hpp"
#include "tgtm/tone_curve.hpp"

namespace tgtm {

/// Bit depth used throughout data simulation; the inference log-histogram
/// path converts to this depth as well.
inline constexpr int kSimulationBits = 26;

/// One training sample: the histograms of a degraded image and the curve
/// parameters that undo the degradation.
struct TrainSample {
    HistogramPair hist;
    ToneCurveParams gt;
};

/// Decodes an 8-bit sRGB image to 26-bit linear RGB.
HdrImage srgb_to_linear26(const Image8& img);

/// Draws curve parameters: sigmoid bounds and gain1 uniform over their
/// ranges, gain2 log-uniform so dark and bright scenes are equally likely.
ToneCurveParams sample_random_params(std::mt19937_64& rng);

/// Normalized linear + log histograms of an image, following the inference
/// layout: linear at native depth, log after conversion to kSimulationBits.
HistogramPair image_histograms(const HdrImage& img);

/// Applies the inverted tone curve of `p` per channel to the linearized
/// image, producing the unmapped 26-bit input the curve would correct.
HdrImage simulate_degraded(const Image8& img, const ToneCurveParams& p);

/// Full simulation of one sample: degrade, then extract histograms.
TrainSample simulate_sample(const Image8& img, const ToneCurveParams& p);

struct BuildDatasetOptions {
    int curves_per_image = 6;
    uint64_t seed = 0;
    std::optional<std::filesystem::path> emit_hdr_dir; // degraded TGTM-RAW dumps
};

struct DatasetSummary {
    std::size_t images_used = 0;
    std::size_t images_skipped = 0;
    std::size_t samples_written = 0;
};

/// Simulates curves_per_image samples per readable image and writes them as
/// a text dataset: per line 256 linear bins, 256 log bins, then the four
/// parameters, all with 9 significant digits. '#' lines are comments.
/// Unreadable or all-black images are skipped and counted.
DatasetSummary build_dataset(const std::vector<std::filesystem::path>& image_paths,
                             const std::filesystem::path& out_file,
                             const BuildDatasetOptions& options,
                             std::ostream* warnings = nullptr);

/// Parses a dataset file back into samples. Throws DataError naming the
/// offending line on malformed input.
std::vector<TrainSample> load_dataset(const std::filesystem::path& path);

void write_sample(std::ostream& out, const TrainSample& sample);

} // namespace tgtm
