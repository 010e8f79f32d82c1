#pragma once

#include <cmath>

namespace tgtm {

/// sRGB transfer functions on normalized [0, 1] values.
inline double srgb_eotf(double encoded) {
    if (encoded <= 0.04045)
        return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

inline double srgb_oetf(double linear) {
    if (linear <= 0.0031308)
        return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

} // namespace tgtm
