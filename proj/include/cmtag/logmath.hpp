#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace cmtag {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(std::span<const double> values) {
    double m = kLogZero;
    for (double v : values) m = std::max(m, v);
    if (m == kLogZero) return kLogZero;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - m);
    return m + std::log(acc);
}

inline double log_sum_exp3(double a, double b, double c) {
    const double values[3] = {a, b, c};
    return log_sum_exp(values);
}

}  // namespace cmtag
