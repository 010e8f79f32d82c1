#pragma once

#include "tgtm/image.hpp"
#include "tgtm/tinynn.hpp"
#include "tgtm/tone_curve.hpp"

namespace tgtm {

/// Output bit depth of tone mapping.
inline constexpr int kOutputBits = 12;

/// Histograms -> network -> parameter squashing. The linear histogram is
/// taken at the image's native depth, the log histogram after conversion to
/// the simulation depth, so results are bit-width independent.
ToneCurveParams predict_params(const HdrImage& img, const ModelWeights& w);

/// Applies the same curve to every channel and quantizes to 12 bits. The
/// curve's input range must match the image depth and its output range must
/// be 12-bit.
HdrImage apply_tonemap(const HdrImage& img, const PwlCurve& curve);

/// 12-bit linear to 8-bit sRGB display encoding.
Image8 encode_srgb8(const HdrImage& img);

/// Full inference: predict parameters, build the 49-knot curve, tone map,
/// encode. Pure function of the image and weights.
Image8 tonemap(const HdrImage& img, const ModelWeights& w);

} // namespace tgtm
