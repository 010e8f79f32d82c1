#include <doctest.h>

#include <cmath>
#include <random>

#include "tgtm/random.hpp"
#include "tgtm/simulate.hpp"
#include "tgtm/tone_curve.hpp"

using namespace tgtm;

namespace {

// Independent scalar evaluation of the blended curve, kept free of the
// library's arrangement so it can serve as an oracle.
long double blended_oracle(long double x, const ToneCurveParams& p, long double m) {
    long double t = p.sigmoid_start + (p.sigmoid_end - p.sigmoid_start) * x / m;
    long double s = 1.0L / (1.0L + std::exp(-t));
    long double c1 = x * m * (1.0L + (long double)p.gain1) / ((long double)p.gain1 * x + m);
    long double c2 = x * m * (1.0L + (long double)p.gain2) / ((long double)p.gain2 * x + m);
    return s * c1 + (1.0L - s) * c2;
}

// Closed form of the normalized gain-curve integral, the quadrature oracle.
double integral_closed_form(double g) {
    if (g == 0.0)
        return 0.5;
    return (1.0 + g) / g * (1.0 - std::log1p(g) / g);
}

} // namespace

TEST_CASE("reinhard_gain endpoints and identity") {
    CHECK(reinhard_gain(0.0, 5.0, 4095.0) == 0.0);
    CHECK(reinhard_gain(4095.0, 5.0, 4095.0) == doctest::Approx(4095.0).epsilon(1e-12));
    // mid-scale at unit gain lands at two thirds
    for (double m : {255.0, 4095.0, 67108863.0})
        CHECK(reinhard_gain(m / 2.0, 1.0, m) == doctest::Approx(2.0 / 3.0 * m).epsilon(1e-12));
    // zero gain reduces to identity
    for (double x : {0.0, 17.0, 1000.0, 4095.0})
        CHECK(reinhard_gain(x, 0.0, 4095.0) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("reinhard_gain domain errors") {
    CHECK_THROWS_AS(reinhard_gain(-1.0, 1.0, 4095.0), std::domain_error);
    CHECK_THROWS_AS(reinhard_gain(4096.0, 1.0, 4095.0), std::domain_error);
    CHECK_THROWS_AS(reinhard_gain(1.0, -0.5, 4095.0), std::domain_error);
    CHECK_THROWS_AS(reinhard_gain(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("reinhard_gain strictly increasing in gain for interior x") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        double m = 67108863.0;
        double x = uniform(rng, 1.0, m - 1.0);
        double g1 = uniform(rng, 0.0, 100.0);
        double g2 = g1 + uniform(rng, 0.01, 100.0);
        CHECK(reinhard_gain(x, g2, m) > reinhard_gain(x, g1, m));
    }
}

TEST_CASE("sigmoid_weight fixed points and oracle value") {
    CHECK(sigmoid_weight(0.0, 0.0, 10.0, 4095.0) == doctest::Approx(0.5));
    for (double a : {1.0, 5.0, 20.0})
        CHECK(sigmoid_weight(2047.5, -a, a, 4095.0) == doctest::Approx(0.5).epsilon(1e-12));
    // logistic(-20), frozen from a high-precision evaluation
    CHECK(sigmoid_weight(0.0, -20.0, 20.0, 4095.0) ==
          doctest::Approx(2.0611536181902037e-9).epsilon(1e-12));
    CHECK_THROWS_AS(sigmoid_weight(-1.0, -5.0, 5.0, 4095.0), std::domain_error);
    CHECK_THROWS_AS(sigmoid_weight(1.0, 5.0, 5.0, 4095.0), std::domain_error);
}

TEST_CASE("sigmoid_weight is monotone in x") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        ToneCurveParams p = sample_random_params(rng);
        double m = 67108863.0;
        double prev = sigmoid_weight(0.0, p.sigmoid_start, p.sigmoid_end, m);
        for (int k = 1; k <= 16; ++k) {
            double w = sigmoid_weight(m * k / 16.0, p.sigmoid_start, p.sigmoid_end, m);
            CHECK(w >= prev);
            prev = w;
        }
    }
}

TEST_CASE("blended_curve endpoints and equal-gain midpoint") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        ToneCurveParams p = sample_random_params(rng);
        double m = 67108863.0;
        CHECK(std::abs(blended_curve(0.0, p, m)) <= 1e-9 * m);
        CHECK(std::abs(blended_curve(m, p, m) - m) <= 1e-9 * m);
    }
    ToneCurveParams equal{-5.0, 5.0, 1.0, 1.0};
    CHECK(blended_curve(2047.5, equal, 4095.0) == doctest::Approx(2.0 / 3.0 * 4095.0).epsilon(1e-12));
}

TEST_CASE("monotone_fix running maximum") {
    CHECK(monotone_fix({0, 5, 9}) == std::vector<double>{0, 5, 9});
    CHECK(monotone_fix({0, 5, 3, 4, 6}) == std::vector<double>{0, 5, 5, 5, 6});
    CHECK(monotone_fix({7, 1, 1}) == std::vector<double>{7, 7, 7});
    CHECK_THROWS_AS(monotone_fix({}), std::invalid_argument);
}

TEST_CASE("monotone_fix is idempotent and non-decreasing") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + rng() % 60);
        for (double& x : v)
            x = uniform(rng, -100.0, 100.0);
        auto once = monotone_fix(v);
        for (std::size_t i = 1; i < once.size(); ++i)
            CHECK(once[i] >= once[i - 1]);
        CHECK(monotone_fix(once) == once);
    }
}

TEST_CASE("curve knot positions are strictly increasing and span the range") {
    for (double m : {255.0, 4095.0, 67108863.0, 48.0}) {
        auto x = curve_knot_positions(m);
        CHECK(x[0] == 0.0);
        CHECK(x[48] == m);
        for (int k = 1; k < 49; ++k) {
            CHECK(x[k] > x[k - 1]);
            CHECK(x[k] == std::round(x[k])); // integral code values
        }
    }
    CHECK_THROWS_AS(curve_knot_positions(47.0), std::invalid_argument);
}

TEST_CASE("knot positions follow the log formula at 26 bits") {
    auto x = curve_knot_positions(67108863.0);
    for (int k = 2; k < 48; ++k) {
        double expected = std::round(std::pow(2.0, 26.0 * k / 48.0)) - 1.0;
        if (expected > x[k - 1]) // away from the rounding collisions near 0
            CHECK(x[k] == expected);
    }
}

TEST_CASE("sample_curve of zero gains is the rescaled identity") {
    ToneCurveParams p{-5.0, 5.0, 0.0, 0.0};
    PwlCurve c = sample_curve(p, 67108863.0, 4095.0);
    for (int k = 0; k < kCurveKnots; ++k)
        CHECK(c.y[k] == doctest::Approx(c.x[k] * 4095.0 / 67108863.0).epsilon(1e-12));
}

TEST_CASE("sample_curve endpoints pinned for random parameters") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 300; ++i) {
        ToneCurveParams p = sample_random_params(rng);
        PwlCurve c = sample_curve(p, 67108863.0, 4095.0);
        CHECK(c.y[0] == 0.0);
        CHECK(c.y[48] == 4095.0);
        for (int k = 1; k < kCurveKnots; ++k) {
            CHECK(c.x[k] > c.x[k - 1]);
            CHECK(c.y[k] >= c.y[k - 1]);
            CHECK(c.y[k] <= 4095.0);
        }
    }
}

TEST_CASE("sample_curve ordinates match a scalar oracle at the knots") {
    ToneCurveParams p{-20.0, 2.0, 0.0, 100.0};
    double m = 67108863.0;
    PwlCurve c = sample_curve(p, m, m);
    long double running = 0.0L;
    for (int k = 0; k < kCurveKnots; ++k) {
        running = std::max(running, blended_oracle((long double)c.x[k], p, (long double)m));
        double expected = static_cast<double>(running);
        if (k == 0)
            expected = 0.0;
        if (k == kCurveKnots - 1)
            expected = m;
        CHECK(c.y[k] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("eval_pwl interpolates exactly at and between knots") {
    ToneCurveParams p{-9.0, 11.0, 1.5, 250.0};
    PwlCurve c = sample_curve(p, 67108863.0, 4095.0);
    for (int k = 0; k < kCurveKnots; ++k)
        CHECK(eval_pwl(c, c.x[k]) == doctest::Approx(c.y[k]).epsilon(1e-14));
    for (int k = 0; k + 1 < kCurveKnots; ++k) {
        double mid = (c.x[k] + c.x[k + 1]) / 2.0;
        CHECK(eval_pwl(c, mid) == doctest::Approx((c.y[k] + c.y[k + 1]) / 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(eval_pwl(c, -1.0), std::domain_error);
    CHECK_THROWS_AS(eval_pwl(c, c.max_in + 1.0), std::domain_error);
}

TEST_CASE("eval_pwl stays within the measured approximation error of the analytic curve") {
    ToneCurveParams p{-12.0, 8.0, 0.7, 40.0};
    double m = 67108863.0;
    PwlCurve c = sample_curve(p, m, m);
    // Measure the true PWL approximation error on a dense grid, then check
    // eval_pwl never exceeds it (it should equal the interpolant exactly).
    double worst = 0.0;
    for (int i = 0; i <= 4096; ++i) {
        double x = m * i / 4096.0;
        double analytic = static_cast<double>(blended_oracle((long double)x, p, (long double)m));
        worst = std::max(worst, std::abs(analytic - eval_pwl(c, x)));
    }
    for (int i = 0; i <= 4096; ++i) {
        double x = m * (i + 0.37) / 4097.0;
        double analytic = static_cast<double>(blended_oracle((long double)x, p, (long double)m));
        CHECK(std::abs(analytic - eval_pwl(c, x)) <= worst * (1.0 + 1e-9) + 1e-6 * m);
    }
}

TEST_CASE("eval_pwl bracketing spends at most ceil(log2(49)) comparisons") {
    ToneCurveParams p{-9.0, 11.0, 1.5, 250.0};
    PwlCurve c = sample_curve(p, 67108863.0, 4095.0);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 2000; ++i) {
        int comparisons = 0;
        eval_pwl(c, uniform(rng, 0.0, c.max_in), &comparisons);
        CHECK(comparisons <= 6);
    }
}

TEST_CASE("invert_curve maps the identity to itself") {
    ToneCurveParams p{-5.0, 5.0, 0.0, 0.0};
    PwlCurve c = sample_curve(p, 67108863.0, 67108863.0);
    PwlCurve inv = invert_curve(c);
    CHECK(inv.max_in == c.max_out);
    CHECK(inv.max_out == c.max_in);
    for (int i = 0; i <= 256; ++i) {
        double x = 67108863.0 * i / 256.0;
        CHECK(eval_pwl(inv, x) == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("invert_curve round trip on strictly increasing curves") {
    std::mt19937_64 rng(29);
    int tested = 0;
    while (tested < 100) {
        ToneCurveParams p = sample_random_params(rng);
        double m = 67108863.0;
        PwlCurve c = sample_curve(p, m, m);
        bool strict = true;
        for (int k = 1; k < kCurveKnots; ++k)
            if (!(c.y[k] > c.y[k - 1]))
                strict = false;
        if (!strict)
            continue;
        ++tested;
        PwlCurve inv = invert_curve(c);
        for (int i = 0; i <= 500; ++i) {
            double x = m * i / 500.0;
            double back = eval_pwl(inv, eval_pwl(c, x));
            CHECK(std::abs(back - x) <= m / 48.0);
            // local bound: within the spacing of the bracketing knots
            int k = 0;
            while (k + 2 < kCurveKnots && c.x[k + 1] <= x)
                ++k;
            CHECK(std::abs(back - x) <= (c.x[k + 1] - c.x[k]) + 1e-6);
        }
    }
}

TEST_CASE("invert_curve flat runs resolve to the left edge") {
    // Hand-built curve with an exactly flat run in the middle.
    PwlCurve c;
    c.max_in = 4800.0;
    c.max_out = 4800.0;
    for (int k = 0; k < kCurveKnots; ++k) {
        c.x[k] = 100.0 * k;
        double y = 100.0 * k;
        if (k >= 10 && k <= 20)
            y = 1000.0; // flat at knots 10..20
        else if (k > 20)
            y = 100.0 * k - 1000.0;
        c.y[k] = y;
    }
    c.y[48] = 4800.0;
    c.x[48] = 4800.0;
    // keep monotone consistent after the endpoint pin
    auto fixed = monotone_fix(std::vector<double>(c.y.begin(), c.y.end()));
    std::copy(fixed.begin(), fixed.end(), c.y.begin());

    PwlCurve inv = invert_curve(c);
    CHECK(eval_pwl(inv, 1000.0) == doctest::Approx(1000.0).epsilon(1e-12)); // x of knot 10
}

TEST_CASE("gain_curve_integral against the closed form") {
    CHECK(gain_curve_integral(0.0, 67108863.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gain_curve_integral(1.0, 4095.0) == doctest::Approx(0.6137).epsilon(2e-3));
    for (double g : {0.1, 1.0, 10.0, 100.0, 1000.0, 20000.0})
        CHECK(std::abs(gain_curve_integral(g, 67108863.0) - integral_closed_form(g)) < 1e-3);
    // saturates toward 1 from below
    double near = gain_curve_integral(20000.0, 67108863.0);
    CHECK(near < 1.0);
    CHECK(near > 0.995);
    // normalization removes the max-value dependence
    CHECK(gain_curve_integral(7.0, 255.0) == doctest::Approx(gain_curve_integral(7.0, 4095.0)));
}

TEST_CASE("gain_curve_integral derivative matches finite differences of the quadrature") {
    for (double g : {0.5, 3.0, 55.0, 700.0, 9000.0}) {
        double h = g * 1e-6;
        double numeric =
            (gain_curve_integral(g + h, 1.0) - gain_curve_integral(g - h, 1.0)) / (2.0 * h);
        double analytic = gain_curve_integral_dgain(g, 1.0);
        CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
    }
}
