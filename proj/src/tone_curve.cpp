#include "tgtm/tone_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tgtm {

namespace {

void check_curve_domain(double x, double max_value) {
    if (!(max_value > 0.0))
        throw std::domain_error("tone curve: max value must be positive");
    if (!(x >= 0.0) || !(x <= max_value))
        throw std::domain_error("tone curve: input outside [0, max]");
}

double logistic(double t) {
    if (t >= 0.0)
        return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

// Trapezoidal quadrature nodes for the normalized gain curve, on [0, 1].
// Quadratic spacing concentrates samples where high gains put all the
// curvature; uniform spacing misses the knee for gains above ~100.
constexpr int kIntegralSamples = 64;

const std::array<double, kIntegralSamples>& integral_nodes() {
    static const std::array<double, kIntegralSamples> nodes = [] {
        std::array<double, kIntegralSamples> t{};
        for (int k = 0; k < kIntegralSamples; ++k) {
            double u = static_cast<double>(k) / (kIntegralSamples - 1);
            t[k] = u * u;
        }
        t[kIntegralSamples - 1] = 1.0;
        return t;
    }();
    return nodes;
}

} // namespace

bool params_in_range(const ToneCurveParams& p) {
    using namespace param_range;
    return p.sigmoid_start >= kSigmoidStartMin && p.sigmoid_start <= kSigmoidStartMax &&
           p.sigmoid_end >= kSigmoidEndMin && p.sigmoid_end <= kSigmoidEndMax &&
           p.gain1 >= kGain1Min && p.gain1 <= kGain1Max &&
           p.gain2 >= kGain2Min && p.gain2 <= kGain2Max;
}

double reinhard_gain(double x, double gain, double max_value) {
    check_curve_domain(x, max_value);
    if (!(gain >= 0.0))
        throw std::domain_error("tone curve: gain must be non-negative");
    return x * max_value * (1.0 + gain) / (gain * x + max_value);
}

double sigmoid_weight(double x, double s_start, double s_end, double max_value) {
    check_curve_domain(x, max_value);
    if (!(s_start < s_end))
        throw std::domain_error("tone curve: sigmoid start must be below end");
    return logistic(s_start + (s_end - s_start) * (x / max_value));
}

double blended_curve(double x, const ToneCurveParams& p, double max_value) {
    double s = sigmoid_weight(x, p.sigmoid_start, p.sigmoid_end, max_value);
    double c1 = reinhard_gain(x, p.gain1, max_value);
    double c2 = reinhard_gain(x, p.gain2, max_value);
    return s * c1 + (1.0 - s) * c2;
}

std::array<double, kCurveKnots> curve_knot_positions(double max_in) {
    if (!(max_in >= 48.0))
        throw std::invalid_argument("curve_knot_positions: max_in must be at least 48");
    std::array<double, kCurveKnots> x{};
    x[0] = 0.0;
    for (int k = 1; k < kCurveKnots - 1; ++k) {
        double v = std::round(std::pow(max_in + 1.0, k / 48.0)) - 1.0;
        x[k] = std::max(v, x[k - 1] + 1.0);
    }
    x[kCurveKnots - 1] = max_in;
    if (!(x[kCurveKnots - 2] < max_in))
        throw std::invalid_argument("curve_knot_positions: max_in too small for 49 knots");
    return x;
}

std::vector<double> monotone_fix(std::vector<double> samples) {
    if (samples.empty())
        throw std::invalid_argument("monotone_fix: empty input");
    for (std::size_t i = 1; i < samples.size(); ++i)
        samples[i] = std::max(samples[i - 1], samples[i]);
    return samples;
}

PwlCurve sample_curve(const ToneCurveParams& p, double max_in, double max_out) {
    if (!(max_in > 0.0) || !(max_out > 0.0))
        throw std::invalid_argument("sample_curve: max values must be positive");
    PwlCurve c;
    c.max_in = max_in;
    c.max_out = max_out;
    c.x = curve_knot_positions(max_in);
    std::vector<double> ordinates(kCurveKnots);
    for (int k = 0; k < kCurveKnots; ++k)
        ordinates[static_cast<std::size_t>(k)] = blended_curve(c.x[k], p, max_in);
    ordinates = monotone_fix(std::move(ordinates));
    double scale = max_out / max_in;
    for (int k = 0; k < kCurveKnots; ++k)
        c.y[k] = ordinates[static_cast<std::size_t>(k)] * scale;
    c.y[0] = 0.0;
    c.y[kCurveKnots - 1] = max_out;
    return c;
}

PwlCurve invert_curve(const PwlCurve& c) {
    // Keep one point per distinct ordinate; the first occurrence is the left
    // edge of a flat run, which realizes the smallest-preimage rule.
    std::vector<std::pair<double, double>> pts; // (y, x) of the source curve
    pts.reserve(kCurveKnots);
    pts.emplace_back(c.y[0], c.x[0]);
    for (int k = 1; k < kCurveKnots; ++k) {
        if (c.y[k] > pts.back().first)
            pts.emplace_back(c.y[k], c.x[k]);
    }
    if (pts.size() < 2)
        throw std::invalid_argument("invert_curve: curve has no increasing segment");
    // Re-knot up to 49 points by bisecting the widest segment; inserted
    // points are collinear, so the interpolated function is unchanged.
    while (pts.size() < static_cast<std::size_t>(kCurveKnots)) {
        std::size_t widest = 0;
        double extent = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double e = pts[i + 1].first - pts[i].first;
            if (e > extent) {
                extent = e;
                widest = i;
            }
        }
        pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(widest) + 1,
                   {(pts[widest].first + pts[widest + 1].first) / 2.0,
                    (pts[widest].second + pts[widest + 1].second) / 2.0});
    }
    PwlCurve inv;
    inv.max_in = c.max_out;
    inv.max_out = c.max_in;
    for (int k = 0; k < kCurveKnots; ++k) {
        inv.x[k] = pts[static_cast<std::size_t>(k)].first;
        inv.y[k] = pts[static_cast<std::size_t>(k)].second;
    }
    return inv;
}

double eval_pwl(const PwlCurve& c, double x, int* comparisons) {
    if (!(x >= 0.0) || !(x <= c.max_in))
        throw std::domain_error("eval_pwl: input outside [0, max_in]");
    int count = 0;
    // Bracket x: largest knot index lo with c.x[lo] <= x, lo in [0, 47].
    int lo = 0;
    int hi = kCurveKnots - 1;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        ++count;
        if (c.x[mid] <= x)
            lo = mid;
        else
            hi = mid;
    }
    if (comparisons)
        *comparisons = count;
    double x0 = c.x[lo], x1 = c.x[lo + 1];
    double y0 = c.y[lo], y1 = c.y[lo + 1];
    return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

double gain_curve_integral(double gain, double max_value) {
    if (!(gain >= 0.0))
        throw std::domain_error("gain_curve_integral: gain must be non-negative");
    if (!(max_value > 0.0))
        throw std::domain_error("gain_curve_integral: max value must be positive");
    const auto& t = integral_nodes();
    double sum = 0.0;
    double prev_t = t[0];
    double prev_f = t[0] * (1.0 + gain) / (gain * t[0] + 1.0);
    for (int k = 1; k < kIntegralSamples; ++k) {
        double f = t[k] * (1.0 + gain) / (gain * t[k] + 1.0);
        sum += (t[k] - prev_t) * (prev_f + f) * 0.5;
        prev_t = t[k];
        prev_f = f;
    }
    return sum;
}

double gain_curve_integral_dgain(double gain, double max_value) {
    if (!(gain >= 0.0))
        throw std::domain_error("gain_curve_integral: gain must be non-negative");
    if (!(max_value > 0.0))
        throw std::domain_error("gain_curve_integral: max value must be positive");
    const auto& t = integral_nodes();
    auto df = [gain](double u) {
        double d = gain * u + 1.0;
        return u * (1.0 - u) / (d * d);
    };
    double sum = 0.0;
    for (int k = 1; k < kIntegralSamples; ++k)
        sum += (t[k] - t[k - 1]) * (df(t[k - 1]) + df(t[k])) * 0.5;
    return sum;
}

} // namespace tgtm
