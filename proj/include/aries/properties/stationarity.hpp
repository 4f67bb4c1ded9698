#pragma once

#include "aries/properties/acf.hpp"
#include "aries/properties/unit_root.hpp"

#include <cmath>
#include <span>

namespace aries::props {

/// ACF decay rule: at least 95% of the lags in [ceil(L/10), L/2] sit inside
/// the +-1.96/sqrt(L) white-noise band.
inline bool acf_convergent(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < kMinUnitRootLength) {
        throw Error(ErrorCode::TooShort, "ACF convergence needs at least 32 observations");
    }
    const std::size_t hi = n / 2;
    const std::size_t lo = (n + 9) / 10;
    const Autocorrelation r = acf(x, hi);
    const double band = 1.96 / std::sqrt(static_cast<double>(n));
    std::size_t inside = 0;
    std::size_t total = 0;
    for (std::size_t k = lo; k <= hi; ++k, ++total) {
        if (std::abs(r[k]) < band) {
            ++inside;
        }
    }
    return total > 0 && static_cast<double>(inside) >= 0.95 * static_cast<double>(total);
}

struct StationarityResult {
    bool is_stationary = false;
    AdfResult adf;
    KpssResult kpss;
    bool acf_convergent = false;
};

/// Strict-sense stationarity as a conjunction: ADF rejects a unit root,
/// KPSS does not reject level stationarity, and the ACF decays.
inline StationarityResult stationarity(std::span<const double> x) {
    if (x.size() < kMinUnitRootLength) {
        throw Error(ErrorCode::TooShort, "stationarity needs at least 32 observations");
    }
    StationarityResult out;
    out.adf = adf_test(x);
    out.kpss = kpss_test(x);
    out.acf_convergent = acf_convergent(x);
    out.is_stationary = out.adf.reject_unit_root_5pct && !out.kpss.reject_stationarity_5pct && out.acf_convergent;
    return out;
}

inline bool is_stationary(std::span<const double> x) { return stationarity(x).is_stationary; }

} // namespace aries::props
