#pragma once

#include <array>
#include <vector>

namespace tgtm {

/// Parameter ranges of the tone-curve family. Gains live on very different
/// scales, which is why gain2 is sampled and normalized in the log domain.
namespace param_range {
inline constexpr double kSigmoidStartMin = -20.0;
inline constexpr double kSigmoidStartMax = 2.0;
inline constexpr double kSigmoidEndMin = 2.0;
inline constexpr double kSigmoidEndMax = 20.0;
inline constexpr double kGain1Min = 0.0;
inline constexpr double kGain1Max = 3.0;
inline constexpr double kGain2Min = 3.0;
inline constexpr double kGain2Max = 20000.0;
} // namespace param_range

/// The four scalars that fully determine a tone curve.
struct ToneCurveParams {
    double sigmoid_start = 0.0; // s_s
    double sigmoid_end = 0.0;   // s_e
    double gain1 = 0.0;         // gain of the highlight curve c1
    double gain2 = 0.0;         // gain of the shadow curve c2
};

bool params_in_range(const ToneCurveParams& p);

inline constexpr int kCurveKnots = 49;

/// Monotone piecewise-linear lookup curve on non-equidistant knots.
/// Invariants: x strictly increasing, x[0] = 0, x[last] = max_in;
/// y non-decreasing, y[0] = 0, y[last] = max_out.
struct PwlCurve {
    std::array<double, kCurveKnots> x{};
    std::array<double, kCurveKnots> y{};
    double max_in = 0.0;
    double max_out = 0.0;
};

/// White-preserving Reinhard gain curve: x*m*(1+g) / (g*x + m).
/// Maps [0, m] onto [0, m] with 0 -> 0 and m -> m for every gain.
double reinhard_gain(double x, double gain, double max_value);

/// Logistic blend weight; the argument ramps linearly from s_start at x = 0
/// to s_end at x = max_value.
double sigmoid_weight(double x, double s_start, double s_end, double max_value);

/// Sigmoid-weighted blend of the two gain curves. The weight multiplies the
/// low-gain curve c1, so shadows are governed by the high-gain c2.
double blended_curve(double x, const ToneCurveParams& p, double max_value);

/// Log-spaced knot abscissas: x_k = round((max_in + 1)^(k/48)) - 1, bumped
/// where rounding collides so the sequence stays strictly increasing.
/// Requires max_in >= 48.
std::array<double, kCurveKnots> curve_knot_positions(double max_in);

/// Running maximum; replaces any descending run with a horizontal segment.
std::vector<double> monotone_fix(std::vector<double> samples);

/// Evaluates the blended curve at the 49 knots, repairs monotonicity, and
/// rescales ordinates from [0, max_in] to [0, max_out].
PwlCurve sample_curve(const ToneCurveParams& p, double max_in, double max_out);

/// Pseudo-inverse with the axes swapped. Flat segments resolve to their
/// smallest preimage; strictly increasing curves invert exactly.
PwlCurve invert_curve(const PwlCurve& c);

/// Linear interpolation between the bracketing knots, exact at knots.
/// `comparisons`, when non-null, receives the number of knot comparisons
/// spent in the bracketing search.
double eval_pwl(const PwlCurve& c, double x, int* comparisons = nullptr);

/// Normalized integral (1/m^2) * Int_0^m c(x) dx of the Reinhard gain curve,
/// by trapezoidal quadrature over 64 fixed samples. 0.5 at g = 0, tends to 1
/// as g grows. Independent of max_value after normalization.
double gain_curve_integral(double gain, double max_value);

/// Derivative of gain_curve_integral with respect to the gain, differentiated
/// through the same quadrature so it matches the implemented integral exactly.
double gain_curve_integral_dgain(double gain, double max_value);

} // namespace tgtm
