#include "tgtm/evalbench.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "tgtm/pipeline.hpp"
#include "tgtm/random.hpp"
#include "tgtm/simulate.hpp"

namespace tgtm {

namespace {

PsnrResult psnr_impl(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b, double peak) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += d * d;
    }
    double mse = sum / static_cast<double>(a.size());
    if (mse == 0.0)
        return {0.0, true};
    return {10.0 * std::log10(peak * peak / mse), false};
}

bool strictly_increasing(const PwlCurve& c) {
    for (int k = 1; k < kCurveKnots; ++k)
        if (!(c.y[k] > c.y[k - 1]))
            return false;
    return true;
}

void append_g9(std::ostream& out, const char* key, double v, const char* sep) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%s%.9g\n", key, sep, v);
    out << buf;
}

} // namespace

int curve_creation_flops() {
    // Per knot: sigmoid weight 7 ops, each gain curve 6, blend 4.
    constexpr int kPerKnot = 7 + 6 + 6 + 4;
    return kCurveKnots * kPerKnot + (kCurveKnots - 1) /* monotone repair */ +
           kCurveKnots /* rescale */;
}

PsnrResult psnr(const Image8& a, const Image8& b) {
    if (a.width != b.width || a.height != b.height || a.samples.size() != b.samples.size())
        throw std::invalid_argument("psnr: image shapes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        double d = static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
        sum += d * d;
    }
    double mse = sum / static_cast<double>(a.samples.size());
    if (mse == 0.0)
        return {0.0, true};
    return {10.0 * std::log10(255.0 * 255.0 / mse), false};
}

PsnrResult psnr(const HdrImage& a, const HdrImage& b) {
    if (a.width != b.width || a.height != b.height || a.bit_depth != b.bit_depth ||
        a.samples.size() != b.samples.size())
        throw std::invalid_argument("psnr: image shapes differ");
    return psnr_impl(a.samples, b.samples, static_cast<double>(a.max_value()));
}

EvalReport evaluate(const std::vector<Image8>& corpus, const ModelWeights& w,
                    const EvalOptions& options) {
    if (corpus.empty())
        throw std::invalid_argument("evaluate: empty corpus");
    if (options.oracle_gt && options.on_12bit)
        throw std::invalid_argument("evaluate: oracle mode compares 8-bit outputs");

    constexpr double kMax26 = static_cast<double>((1u << kSimulationBits) - 1u);
    const double max12 = static_cast<double>(max_code_value(kOutputBits));

    std::mt19937_64 rng(options.seed);
    EvalReport report;
    for (const Image8& img : corpus) {
        ToneCurveParams gt = sample_random_params(rng);
        if (options.oracle_gt) {
            // Round-trip fidelity is only defined where the curve loses no
            // information, so draw until it has no flattened segment.
            for (int attempt = 0; attempt < 1000; ++attempt) {
                if (strictly_increasing(sample_curve(gt, kMax26, kMax26)))
                    break;
                gt = sample_random_params(rng);
            }
        }
        HdrImage degraded = simulate_degraded(img, gt);
        HdrImage gt_12 = apply_tonemap(degraded, sample_curve(gt, kMax26, max12));

        PsnrResult r;
        if (options.oracle_gt) {
            r = psnr(encode_srgb8(gt_12), img);
        } else {
            ToneCurveParams pred = predict_params(degraded, w);
            HdrImage pred_12 = apply_tonemap(degraded, sample_curve(pred, kMax26, max12));
            r = options.on_12bit ? psnr(pred_12, gt_12)
                                 : psnr(encode_srgb8(pred_12), encode_srgb8(gt_12));
        }
        ++report.images_evaluated;
        if (r.infinite)
            ++report.exact_matches;
        else
            report.per_image_db.push_back(r.db);
    }

    if (!report.per_image_db.empty()) {
        double sum = 0.0;
        for (double v : report.per_image_db)
            sum += v;
        report.mean_db = sum / static_cast<double>(report.per_image_db.size());
        double var = 0.0;
        for (double v : report.per_image_db)
            var += (v - report.mean_db) * (v - report.mean_db);
        report.stddev_db = std::sqrt(var / static_cast<double>(report.per_image_db.size()));
    }
    return report;
}

FlopsReport flops_report(const ModelWeights& w) {
    w.arch.validate();
    FlopsReport r;
    r.network_flops = w.forward_flops();
    r.network_params = w.param_count();
    r.curve_creation = curve_creation_flops();
    return r;
}

void write_report_text(const EvalReport& report, std::ostream& out) {
    out << "images evaluated: " << report.images_evaluated << "\n";
    out << "exact matches (infinite PSNR, excluded from stats): " << report.exact_matches << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean PSNR: %.2f dB\n", report.mean_db);
    out << buf;
    std::snprintf(buf, sizeof(buf), "std dev:   %.2f dB\n", report.stddev_db);
    out << buf;
}

void write_report_kv(const EvalReport& report, std::ostream& out) {
    out << "images_evaluated=" << report.images_evaluated << "\n";
    out << "exact_matches=" << report.exact_matches << "\n";
    append_g9(out, "mean_psnr_db", report.mean_db, "=");
    append_g9(out, "stddev_psnr_db", report.stddev_db, "=");
    for (std::size_t i = 0; i < report.per_image_db.size(); ++i) {
        char key[32];
        std::snprintf(key, sizeof(key), "psnr_db_%zu", i);
        append_g9(out, key, report.per_image_db[i], "=");
    }
}

void write_flops_text(const FlopsReport& r, std::ostream& out) {
    out << "per-pixel FLOPs:\n";
    out << "  grayscale:        " << r.grayscale_per_pixel << "\n";
    out << "  linear histogram: " << r.linear_hist_per_pixel << "\n";
    out << "  log histogram:    " << r.log_hist_per_pixel << "\n";
    out << "  apply curve:      " << r.apply_curve_per_pixel << "\n";
    out << "  total:            " << r.total_per_pixel << "\n";
    out << "per-image FLOPs:\n";
    out << "  network:          " << r.network_flops << " (budget " << kMaxForwardFlops << ")\n";
    out << "  curve creation:   " << r.curve_creation << " (budget 3000)\n";
    out << "parameters:         " << r.network_params << " (budget " << kMaxParams << ")\n";
}

void write_flops_kv(const FlopsReport& r, std::ostream& out) {
    out << "grayscale_flops_per_pixel=" << r.grayscale_per_pixel << "\n";
    out << "linear_hist_flops_per_pixel=" << r.linear_hist_per_pixel << "\n";
    out << "log_hist_flops_per_pixel=" << r.log_hist_per_pixel << "\n";
    out << "apply_curve_flops_per_pixel=" << r.apply_curve_per_pixel << "\n";
    out << "total_flops_per_pixel=" << r.total_per_pixel << "\n";
    out << "network_flops=" << r.network_flops << "\n";
    out << "network_params=" << r.network_params << "\n";
    out << "curve_creation_flops=" << r.curve_creation << "\n";
}

} // namespace tgtm
