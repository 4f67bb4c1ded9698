#pragma once

#include "aries/core/error.hpp"
#include "aries/core/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace aries::props {

struct Autocorrelation {
    std::vector<double> values;
    /// Zero-variance input: every lag beyond 0 is reported as 0.
    bool constant_input = false;

    double operator[](std::size_t lag) const { return values[lag]; }
    std::size_t size() const noexcept { return values.size(); }
};

/// Biased sample ACF of the mean-centred series (lag-k sum divided by the
/// lag-0 sum, i.e. both normalised by L).
inline Autocorrelation acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) {
        throw Error(ErrorCode::InvalidArgument, "max_lag must be smaller than the series length");
    }
    Autocorrelation out;
    out.values.assign(max_lag + 1, 0.0);
    out.values[0] = 1.0;
    if (is_constant(x)) {
        out.constant_input = true;
        return out;
    }
    double m = 0.0;
    for (double v : x) {
        m += v;
    }
    m /= static_cast<double>(n);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = x[i] - m;
    }
    double c0 = 0.0;
    for (double v : c) {
        c0 += v * v;
    }
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) {
            s += c[i] * c[i + k];
        }
        out.values[k] = s / c0;
    }
    return out;
}

} // namespace aries::props
