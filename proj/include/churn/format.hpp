#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace churn {

// Round-trippable double rendering for model files and manifests.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Fixed-point rendering with decimal half-up rounding. A small guard
// absorbs binary representation error so that e.g. (0.97+0.22)/2 still
// renders as 0.60 at two decimals.
inline std::string format_fixed(double v, int digits) {
    double scale = std::pow(10.0, digits);
    double rounded = std::floor(std::abs(v) * scale + 0.5 + 1e-6) / scale * (v < 0 ? -1.0 : 1.0);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, rounded);
    return buf;
}

}  // namespace churn
