#pragma once

#include "aries/core/error.hpp"

#include <algorithm>
#include <cstdint>
#include <span>

namespace aries::props {

/// Differences within this fraction of the range count as ties, so rounding
/// noise in a*x+b cannot flip signs.
inline constexpr double kTieTolerance = 1e-12;

/// Mann-Kendall tau = S / (L(L-1)/2), S = sum over i<j of sign(x_j - x_i).
inline double mann_kendall(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) {
        throw Error(ErrorCode::TooShort, "Mann-Kendall needs at least 3 observations");
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double eps = kTieTolerance * (*hi - *lo);
    std::int64_t s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xi = x[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = x[j] - xi;
            s += (d > eps) - (d < -eps);
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(s) / pairs;
}

} // namespace aries::props
