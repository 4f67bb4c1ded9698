#pragma once

#include "aries/core/error.hpp"
#include "aries/core/series.hpp"
#include "aries/core/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>

namespace aries::props {

inline constexpr std::size_t kMinUnitRootLength = 32;

struct AdfResult {
    double statistic = 0.0;
    double critical_value_5pct = 0.0;
    bool reject_unit_root_5pct = false;
    std::size_t lags = 0;
    std::size_t nobs = 0;
    /// Collinear design (constant or perfectly deterministic input); the
    /// unit root is then not rejected.
    bool singular = false;
};

/// MacKinnon (2010) response surface, constant-only case, 5% level.
inline double adf_critical_value_5pct(std::size_t nobs) {
    const double t = static_cast<double>(nobs);
    return -2.86154 - 2.8903 / t - 4.234 / (t * t) - 40.040 / (t * t * t);
}

/// Augmented Dickey-Fuller with constant, no trend. Lag order follows the
/// Schwert rule floor(12 (L/100)^0.25), shrunk until the regression keeps at
/// least 10 residual degrees of freedom.
inline AdfResult adf_test(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < kMinUnitRootLength) {
        throw Error(ErrorCode::TooShort, "ADF needs at least 32 observations");
    }
    AdfResult out;
    std::size_t p = static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    // nobs = n-1-p, regressors = p+2, need nobs - (p+2) >= 10
    while (p > 0 && (n - 1 - p) < p + 2 + 10) {
        --p;
    }
    out.lags = p;
    const std::size_t nobs = n - 1 - p;
    out.nobs = nobs;
    out.critical_value_5pct = adf_critical_value_5pct(nobs);
    if (is_constant(y)) {
        out.singular = true;
        return out;
    }

    std::vector<double> dy(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        dy[t - 1] = y[t] - y[t - 1];
    }
    const auto k = static_cast<Eigen::Index>(p + 2);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(nobs), k);
    Eigen::VectorXd target(static_cast<Eigen::Index>(nobs));
    for (std::size_t r = 0; r < nobs; ++r) {
        const std::size_t t = r + p; // index into dy
        const auto row = static_cast<Eigen::Index>(r);
        target(row) = dy[t];
        X(row, 0) = 1.0;
        X(row, 1) = y[t];
        for (std::size_t j = 1; j <= p; ++j) {
            X(row, static_cast<Eigen::Index>(j + 1)) = dy[t - j];
        }
    }
    try {
        const stats::OlsFit fit = stats::ols(X, target);
        const double se = fit.std_errors(1);
        if (!(se > 0.0) || !std::isfinite(se)) {
            out.singular = true;
            return out;
        }
        out.statistic = fit.coefficients(1) / se;
        out.reject_unit_root_5pct = out.statistic < out.critical_value_5pct;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularRegression) {
            throw;
        }
        out.singular = true;
    }
    return out;
}

inline AdfResult adf_test(const TimeSeries& s) { return adf_test(s.values()); }

struct KpssResult {
    double statistic = 0.0;
    bool reject_stationarity_5pct = false;
    std::size_t bandwidth = 0;
    bool constant_input = false;
};

inline constexpr double kKpssCritical5pct = 0.463;

/// KPSS level-stationarity test; long-run variance from a Bartlett kernel
/// with bandwidth floor(4 (L/100)^0.25).
inline KpssResult kpss_test(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < kMinUnitRootLength) {
        throw Error(ErrorCode::TooShort, "KPSS needs at least 32 observations");
    }
    KpssResult out;
    out.bandwidth = static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (is_constant(y)) {
        out.constant_input = true;
        return out;
    }
    const double m = stats::mean(y);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = y[i] - m;
    }
    double partial = 0.0;
    double eta = 0.0;
    for (double v : e) {
        partial += v;
        eta += partial * partial;
    }
    const double nd = static_cast<double>(n);
    eta /= nd * nd;

    double lrv = 0.0;
    for (double v : e) {
        lrv += v * v;
    }
    lrv /= nd;
    for (std::size_t s = 1; s <= out.bandwidth && s < n; ++s) {
        double g = 0.0;
        for (std::size_t t = s; t < n; ++t) {
            g += e[t] * e[t - s];
        }
        const double w = 1.0 - static_cast<double>(s) / static_cast<double>(out.bandwidth + 1);
        lrv += 2.0 * w * g / nd;
    }
    if (!(lrv > 0.0)) {
        out.constant_input = true;
        return out;
    }
    out.statistic = eta / lrv;
    out.reject_stationarity_5pct = out.statistic > kKpssCritical5pct;
    return out;
}

inline KpssResult kpss_test(const TimeSeries& s) { return kpss_test(s.values()); }

} // namespace aries::props
