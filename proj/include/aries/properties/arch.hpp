#pragma once

#include "aries/core/error.hpp"
#include "aries/core/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <span>

namespace aries::props {

struct ArchLmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool is_heteroscedastic = false;
    std::size_t lags = 0;
    /// Degenerate regression (e.g. constant residuals); reported homoscedastic.
    bool singular = false;
};

/// Default ARCH-LM lag order: min(12, floor(L/20)), at least 1.
inline std::size_t default_arch_lags(std::size_t length) {
    return std::clamp<std::size_t>(length / 20, 1, 12);
}

/// Engle's LM test: regress e_t^2 on a constant and q lagged squares;
/// LM = n R^2 ~ chi2(q). Heteroscedastic when the p-value is <= 0.05.
inline ArchLmResult arch_lm_test(std::span<const double> residual, std::size_t lags) {
    const std::size_t n = residual.size();
    if (lags == 0) {
        throw Error(ErrorCode::InvalidArgument, "ARCH-LM needs at least one lag");
    }
    if (n < lags + 10) {
        throw Error(ErrorCode::TooShort, "ARCH-LM needs at least lags + 10 observations");
    }
    ArchLmResult out;
    out.lags = lags;
    const std::size_t nobs = n - lags;
    const auto k = static_cast<Eigen::Index>(lags + 1);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(nobs), k);
    Eigen::VectorXd y(static_cast<Eigen::Index>(nobs));
    for (std::size_t r = 0; r < nobs; ++r) {
        const std::size_t t = r + lags;
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = residual[t] * residual[t];
        X(row, 0) = 1.0;
        for (std::size_t j = 1; j <= lags; ++j) {
            X(row, static_cast<Eigen::Index>(j)) = residual[t - j] * residual[t - j];
        }
    }
    if ((y.array() == y(0)).all()) {
        out.singular = true;
        return out;
    }
    try {
        const stats::OlsFit fit = stats::ols(X, y);
        out.statistic = static_cast<double>(nobs) * fit.r_squared;
        out.p_value = stats::chi_square_sf(out.statistic, static_cast<double>(lags));
        out.is_heteroscedastic = out.p_value <= 0.05;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularRegression) {
            throw;
        }
        out.singular = true;
    }
    return out;
}

} // namespace aries::props
