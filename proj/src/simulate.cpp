#include "tgtm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tgtm/errors.hpp"
#include "tgtm/imageio.hpp"
#include "tgtm/random.hpp"
#include "tgtm/srgb.hpp"

namespace tgtm {

namespace {

constexpr double kMax26 = static_cast<double>((1u << kSimulationBits) - 1u);

uint32_t quantize(double v, double max_value) {
    double r = std::floor(v + 0.5);
    if (r < 0.0)
        r = 0.0;
    if (r > max_value)
        r = max_value;
    return static_cast<uint32_t>(r);
}

void append_g9(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

bool all_black(const Image8& img) {
    return std::all_of(img.samples.begin(), img.samples.end(),
                       [](uint8_t v) { return v == 0; });
}

} // namespace

HdrImage srgb_to_linear26(const Image8& img) {
    validate(img);
    // 256-entry decode table; inputs are 8-bit so every code is covered.
    std::array<uint32_t, 256> lut{};
    for (int c = 0; c < 256; ++c)
        lut[static_cast<std::size_t>(c)] =
            quantize(srgb_eotf(c / 255.0) * kMax26, kMax26);
    HdrImage out;
    out.width = img.width;
    out.height = img.height;
    out.bit_depth = kSimulationBits;
    out.samples.resize(img.samples.size());
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        out.samples[i] = lut[img.samples[i]];
    return out;
}

ToneCurveParams sample_random_params(std::mt19937_64& rng) {
    using namespace param_range;
    ToneCurveParams p;
    p.sigmoid_start = uniform(rng, kSigmoidStartMin, kSigmoidStartMax);
    p.sigmoid_end = uniform(rng, kSigmoidEndMin, kSigmoidEndMax);
    p.gain1 = uniform(rng, kGain1Min, kGain1Max);
    p.gain2 = std::exp(uniform(rng, std::log(kGain2Min), std::log(kGain2Max)));
    return p;
}

HistogramPair image_histograms(const HdrImage& img) {
    LumaImage luma = rgb_to_luminance(img);
    HistogramPair pair;
    pair.linear = normalize(linear_histogram(luma));
    pair.log = normalize(log_histogram(bitwidth_convert(luma, kSimulationBits)));
    return pair;
}

HdrImage simulate_degraded(const Image8& img, const ToneCurveParams& p) {
    HdrImage linear = srgb_to_linear26(img);
    PwlCurve curve = sample_curve(p, kMax26, kMax26);
    PwlCurve inverse = invert_curve(curve);
    for (uint32_t& v : linear.samples)
        v = quantize(eval_pwl(inverse, static_cast<double>(v)), kMax26);
    return linear;
}

TrainSample simulate_sample(const Image8& img, const ToneCurveParams& p) {
    TrainSample sample;
    sample.hist = image_histograms(simulate_degraded(img, p));
    sample.gt = p;
    return sample;
}

void write_sample(std::ostream& out, const TrainSample& sample) {
    std::string line;
    line.reserve(516 * 13);
    for (double v : sample.hist.linear) {
        append_g9(line, v);
        line += ' ';
    }
    for (double v : sample.hist.log) {
        append_g9(line, v);
        line += ' ';
    }
    append_g9(line, sample.gt.sigmoid_start);
    line += ' ';
    append_g9(line, sample.gt.sigmoid_end);
    line += ' ';
    append_g9(line, sample.gt.gain1);
    line += ' ';
    append_g9(line, sample.gt.gain2);
    line += '\n';
    out << line;
}

DatasetSummary build_dataset(const std::vector<std::filesystem::path>& image_paths,
                             const std::filesystem::path& out_file,
                             const BuildDatasetOptions& options,
                             std::ostream* warnings) {
    if (image_paths.empty())
        throw DataError("build_dataset: no input images");
    if (options.curves_per_image < 1)
        throw std::invalid_argument("build_dataset: curves_per_image must be >= 1");

    std::ofstream out(out_file, std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + out_file.string() + " for writing");
    out << "# tgtm dataset v1\n";
    out << "# columns: 256 linear bins, 256 log bins, s_s s_e g1 g2\n";

    std::mt19937_64 rng(options.seed);
    DatasetSummary summary;
    std::size_t emitted_index = 0;
    for (const auto& path : image_paths) {
        Image8 img;
        try {
            img = read_png8(path);
        } catch (const DataError& e) {
            if (warnings)
                *warnings << "warning: skipping " << path.string() << ": " << e.what() << "\n";
            ++summary.images_skipped;
            continue;
        }
        if (all_black(img)) {
            if (warnings)
                *warnings << "warning: skipping " << path.string() << ": image is all black\n";
            ++summary.images_skipped;
            continue;
        }
        for (int c = 0; c < options.curves_per_image; ++c) {
            ToneCurveParams p = sample_random_params(rng);
            HdrImage degraded = simulate_degraded(img, p);
            TrainSample sample;
            sample.hist = image_histograms(degraded);
            sample.gt = p;
            write_sample(out, sample);
            if (options.emit_hdr_dir) {
                char name[32];
                std::snprintf(name, sizeof(name), "degraded_%06zu.raw", emitted_index);
                write_raw(degraded, *options.emit_hdr_dir / name);
            }
            ++emitted_index;
            ++summary.samples_written;
        }
        ++summary.images_used;
    }
    out << "# images_used=" << summary.images_used << " skipped=" << summary.images_skipped
        << " samples=" << summary.samples_written << "\n";
    if (!out)
        throw DataError("short write to " + out_file.string());
    if (summary.samples_written == 0)
        throw DataError("build_dataset: every input image was skipped");
    return summary;
}

std::vector<TrainSample> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::vector<TrainSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::array<double, 516> v{};
        std::size_t n = 0;
        double x;
        while (fields >> x) {
            if (n < v.size())
                v[n] = x;
            ++n;
        }
        if (n != v.size())
            throw DataError(path.string() + ": line " + std::to_string(line_no) +
                            ": expected 516 values, got " + std::to_string(n));
        TrainSample s;
        double linear_sum = 0.0, log_sum = 0.0;
        for (int i = 0; i < kHistogramBins; ++i) {
            s.hist.linear[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
            s.hist.log[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i) + 256];
            linear_sum += s.hist.linear[static_cast<std::size_t>(i)];
            log_sum += s.hist.log[static_cast<std::size_t>(i)];
        }
        if (std::abs(linear_sum - 1.0) > 1e-5 || std::abs(log_sum - 1.0) > 1e-5)
            throw DataError(path.string() + ": line " + std::to_string(line_no) +
                            ": histogram does not sum to 1");
        s.gt.sigmoid_start = v[512];
        s.gt.sigmoid_end = v[513];
        s.gt.gain1 = v[514];
        s.gt.gain2 = v[515];
        if (!params_in_range(s.gt))
            throw DataError(path.string() + ": line " + std::to_string(line_no) +
                            ": parameters outside their valid ranges");
        // Remove the 9-digit rounding drift so downstream maths sees exact
        // unit mass.
        for (double& b : s.hist.linear)
            b /= linear_sum;
        for (double& b : s.hist.log)
            b /= log_sum;
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace tgtm
