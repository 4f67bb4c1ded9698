#pragma once

#include "aries/core/error.hpp"
#include "aries/core/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace aries::props {

struct HurstEstimate {
    double exponent = 0.5;
    /// Constant input; exponent fixed at 0.5.
    bool degenerate = false;
};

namespace detail {

/// Anis-Lloyd expected R/S of n iid normals, with Peters' (n-1/2)/n factor.
inline double expected_rescaled_range(std::size_t n) {
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        sum += std::sqrt((nd - static_cast<double>(i)) / static_cast<double>(i));
    }
    const double gamma_ratio = n <= 340 ? std::exp(std::lgamma((nd - 1.0) / 2.0) - std::lgamma(nd / 2.0)) /
                                              std::sqrt(std::numbers::pi)
                                        : 1.0 / std::sqrt(nd * std::numbers::pi / 2.0);
    return (nd - 0.5) / nd * gamma_ratio * sum;
}

inline double rescaled_range(std::span<const double> w) {
    const double n = static_cast<double>(w.size());
    double m = 0.0;
    for (double v : w) {
        m += v;
    }
    m /= n;
    double cum = 0.0, hi = 0.0, lo = 0.0, ss = 0.0;
    bool first = true;
    for (double v : w) {
        cum += v - m;
        ss += (v - m) * (v - m);
        if (first) {
            hi = lo = cum;
            first = false;
        } else {
            hi = std::max(hi, cum);
            lo = std::min(lo, cum);
        }
    }
    const double s = std::sqrt(ss / n);
    return s > 0.0 ? (hi - lo) / s : 0.0;
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace detail

/// Rescaled-range Hurst exponent over non-overlapping dyadic windows
/// 8, 16, ..., <= L/2. The log-log slope of mean R/S is corrected by the
/// slope of its iid expectation (Anis-Lloyd/Peters) so white noise sits at
/// 0.5 instead of the small-sample bias near 0.56. Clamped to [0,1].
inline HurstEstimate hurst(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 64) {
        throw Error(ErrorCode::TooShort, "Hurst estimate needs at least 64 observations");
    }
    HurstEstimate out;
    if (is_constant(x)) {
        out.degenerate = true;
        return out;
    }
    std::vector<double> log_size, log_rs, log_expected;
    for (std::size_t size = 8; size <= n / 2; size *= 2) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t start = 0; start + size <= n; start += size) {
            const double rs = detail::rescaled_range(x.subspan(start, size));
            if (rs > 0.0) {
                total += rs;
                ++count;
            }
        }
        if (count == 0) {
            continue;
        }
        log_size.push_back(std::log(static_cast<double>(size)));
        log_rs.push_back(std::log(total / static_cast<double>(count)));
        log_expected.push_back(std::log(detail::expected_rescaled_range(size)));
    }
    if (log_size.size() < 2) {
        out.degenerate = true;
        return out;
    }
    const double h = 0.5 + detail::slope(log_size, log_rs) - detail::slope(log_size, log_expected);
    out.exponent = std::clamp(h, 0.0, 1.0);
    return out;
}

} // namespace aries::props
