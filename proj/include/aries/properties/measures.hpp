#pragma once

#include "aries/core/series.hpp"
#include "aries/core/stats.hpp"
#include "aries/properties/mstl.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace aries::props {

/// max(0, 1 - var(R) / var(R + sum S_i)), population variances. Zero when
/// there are no seasonal components or R + sum S_i is constant.
inline double season_strength(const Decomposition& d) {
    if (d.seasonals.empty()) {
        return 0.0;
    }
    const std::size_t n = d.residual.size();
    std::vector<double> detrended(d.residual);
    for (const auto& s : d.seasonals) {
        for (std::size_t t = 0; t < n; ++t) {
            detrended[t] += s[t];
        }
    }
    const double denom = stats::variance(detrended);
    if (!(denom > 0.0)) {
        return 0.0;
    }
    return std::clamp(1.0 - stats::variance(d.residual) / denom, 0.0, 1.0);
}

/// Coefficient of variation of the min-max normalised series. Normalising
/// first makes the value independent of amplitude and offset (a full-period
/// sine gives 1/sqrt(2)).
inline double volatility_cv(std::span<const double> x) {
    if (x.size() < 2) {
        throw Error(ErrorCode::TooShort, "volatility needs at least 2 observations");
    }
    if (is_constant(x)) {
        return 0.0;
    }
    const std::vector<double> z = minmax_normalize(x);
    const double m = stats::mean(z);
    return m > 0.0 ? stats::stddev(z) / m : 0.0;
}

/// Share of points with one-sided z-score above 1.645.
inline double anomaly_rate(std::span<const double> x) {
    if (x.size() < 2) {
        throw Error(ErrorCode::TooShort, "anomaly rate needs at least 2 observations");
    }
    if (is_constant(x)) {
        return 0.0;
    }
    const double m = stats::mean(x);
    const double sd = stats::stddev(x);
    const auto count = std::count_if(x.begin(), x.end(), [&](double v) { return (v - m) / sd > 1.645; });
    return static_cast<double>(count) / static_cast<double>(x.size());
}

} // namespace aries::props
