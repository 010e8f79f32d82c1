#include "tgtm/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "tgtm/simulate.hpp"
#include "tgtm/srgb.hpp"

namespace tgtm {

ToneCurveParams predict_params(const HdrImage& img, const ModelWeights& w) {
    return raw_to_params(forward(w, image_histograms(img)));
}

HdrImage apply_tonemap(const HdrImage& img, const PwlCurve& curve) {
    validate(img);
    double max_in = static_cast<double>(img.max_value());
    double max_out = static_cast<double>(max_code_value(kOutputBits));
    if (curve.max_in != max_in || curve.max_out != max_out)
        throw std::invalid_argument("apply_tonemap: curve range does not match image");
    HdrImage out;
    out.width = img.width;
    out.height = img.height;
    out.bit_depth = kOutputBits;
    out.samples.resize(img.samples.size());
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        double y = eval_pwl(curve, static_cast<double>(img.samples[i]));
        double q = std::floor(y + 0.5);
        out.samples[i] = static_cast<uint32_t>(q < 0.0 ? 0.0 : (q > max_out ? max_out : q));
    }
    return out;
}

Image8 encode_srgb8(const HdrImage& img) {
    validate(img);
    if (img.bit_depth != kOutputBits)
        throw std::invalid_argument("encode_srgb8: expected a 12-bit image");
    std::array<uint8_t, 4096> lut{};
    for (int v = 0; v < 4096; ++v) {
        double e = srgb_oetf(v / 4095.0) * 255.0;
        lut[static_cast<std::size_t>(v)] = static_cast<uint8_t>(std::floor(e + 0.5));
    }
    Image8 out;
    out.width = img.width;
    out.height = img.height;
    out.samples.resize(img.samples.size());
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        out.samples[i] = lut[img.samples[i]];
    return out;
}

Image8 tonemap(const HdrImage& img, const ModelWeights& w) {
    ToneCurveParams p = predict_params(img, w);
    PwlCurve curve = sample_curve(p, static_cast<double>(img.max_value()),
                                  static_cast<double>(max_code_value(kOutputBits)));
    return encode_srgb8(apply_tonemap(img, curve));
}

} // namespace tgtm
