#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tgtm/image.hpp"
#include "tgtm/tinynn.hpp"

namespace tgtm {

/// Fixed per-pixel operation costs of the inference pipeline.
inline constexpr int kGrayscaleFlopsPerPixel = 5;  // 3 mul + 2 add
inline constexpr int kLinearHistFlopsPerPixel = 2; // shift + increment
inline constexpr int kLogHistFlopsPerPixel = 10;   // convert, log2, scale, bin
inline constexpr int kApplyCurveFlopsPerPixel = 12; // 6 compares + lerp
inline constexpr int kTotalFlopsPerPixel =
    kGrayscaleFlopsPerPixel + kLinearHistFlopsPerPixel + kLogHistFlopsPerPixel +
    kApplyCurveFlopsPerPixel;

/// Structural cost of building the 49-knot curve once per image: 23 ops per
/// knot for the blended evaluation, plus the monotone repair and rescale.
int curve_creation_flops();

struct PsnrResult {
    double db = 0.0;
    bool infinite = false; // identical images
};

PsnrResult psnr(const Image8& a, const Image8& b);
PsnrResult psnr(const HdrImage& a, const HdrImage& b);

struct EvalOptions {
    uint64_t seed = 0;
    /// Compare the ground-truth tone mapping against the original source
    /// instead of against the prediction (round-trip fidelity; draws only
    /// strictly increasing curves).
    bool oracle_gt = false;
    /// Compute PSNR on the 12-bit linear outputs instead of 8-bit sRGB.
    bool on_12bit = false;
};

struct EvalReport {
    std::vector<double> per_image_db; // finite values only, input order
    std::size_t exact_matches = 0;    // infinite-PSNR pairs, excluded above
    std::size_t images_evaluated = 0;
    double mean_db = 0.0;
    double stddev_db = 0.0; // population standard deviation
};

/// Per image: simulate a degraded input with a random ground-truth curve,
/// run inference, tone map with both parameter sets, record the PSNR.
EvalReport evaluate(const std::vector<Image8>& corpus, const ModelWeights& w,
                    const EvalOptions& options);

struct FlopsReport {
    int grayscale_per_pixel = kGrayscaleFlopsPerPixel;
    int linear_hist_per_pixel = kLinearHistFlopsPerPixel;
    int log_hist_per_pixel = kLogHistFlopsPerPixel;
    int apply_curve_per_pixel = kApplyCurveFlopsPerPixel;
    int total_per_pixel = kTotalFlopsPerPixel;
    int network_flops = 0;
    int network_params = 0;
    int curve_creation = 0;
};

FlopsReport flops_report(const ModelWeights& w);

void write_report_text(const EvalReport& report, std::ostream& out);
void write_report_kv(const EvalReport& report, std::ostream& out);
void write_flops_text(const FlopsReport& report, std::ostream& out);
void write_flops_kv(const FlopsReport& report, std::ostream& out);

} // namespace tgtm
