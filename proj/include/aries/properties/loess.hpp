#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace aries::props::loess {

/// Local-linear tricube estimate at position `xs` using the points with
/// indices [left, right] (0-based). `span` is the nominal neighbourhood size;
/// when it exceeds the series length the bandwidth grows by (span-n)/2 as in
/// the reference STL smoother. Returns nullopt when every weight vanishes.
inline std::optional<double> estimate(std::span<const double> y, double xs, std::size_t left, std::size_t right,
                                      std::size_t span) {
    const std::size_t n = y.size();
    const double range = static_cast<double>(n) - 1.0;
    double h = std::max(xs - static_cast<double>(left), static_cast<double>(right) - xs);
    if (span > n) {
        h += static_cast<double>((span - n) / 2);
    }
    const double h9 = 0.999 * h;
    const double h1 = 0.001 * h;

    thread_local std::vector<double> w;
    w.assign(right - left + 1, 0.0);
    double total = 0.0;
    for (std::size_t j = left; j <= right; ++j) {
        const double r = std::abs(static_cast<double>(j) - xs);
        double wj = 0.0;
        if (r <= h9) {
            if (r <= h1) {
                wj = 1.0;
            } else {
                const double q = r / h;
                const double t = 1.0 - q * q * q;
                wj = t * t * t;
            }
        }
        w[j - left] = wj;
        total += wj;
    }
    if (total <= 0.0) {
        return std::nullopt;
    }
    for (double& wj : w) {
        wj /= total;
    }
    if (h > 0.0) {
        double a = 0.0;
        for (std::size_t j = left; j <= right; ++j) {
            a += w[j - left] * static_cast<double>(j);
        }
        double b = xs - a;
        double c = 0.0;
        for (std::size_t j = left; j <= right; ++j) {
            const double d = static_cast<double>(j) - a;
            c += w[j - left] * d * d;
        }
        if (std::sqrt(c) > 0.001 * range) {
            b /= c;
            for (std::size_t j = left; j <= right; ++j) {
                w[j - left] *= b * (static_cast<double>(j) - a) + 1.0;
            }
        }
    }
    double ys = 0.0;
    for (std::size_t j = left; j <= right; ++j) {
        ys += w[j - left] * y[j];
    }
    return ys;
}

/// LOESS smooth evaluated at every index, neighbourhood of `span` points.
inline std::vector<double> smooth(std::span<const double> y, std::size_t span) {
    const std::size_t n = y.size();
    std::vector<double> out(y.begin(), y.end());
    if (n < 2) {
        return out;
    }
    if (span >= n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (auto v = estimate(y, static_cast<double>(i), 0, n - 1, span)) {
                out[i] = *v;
            }
        }
        return out;
    }
    const std::size_t half = (span + 1) / 2;
    std::size_t left = 0;
    std::size_t right = span - 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 > half && right != n - 1) {
            ++left;
            ++right;
        }
        if (auto v = estimate(y, static_cast<double>(i), left, right, span)) {
            out[i] = *v;
        }
    }
    return out;
}

inline std::size_t next_odd(double x) {
    auto v = static_cast<std::size_t>(std::ceil(x));
    if (v % 2 == 0) {
        ++v;
    }
    return std::max<std::size_t>(v, 3);
}

} // namespace aries::props::loess
