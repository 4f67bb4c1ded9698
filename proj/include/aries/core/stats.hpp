#pragma once

#include "aries/core/error.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace aries::stats {

inline double mean(std::span<const double> x) {
    if (x.empty()) {
        return 0.0;
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Population variance (divides by n).
inline double variance(std::span<const double> x) {
    if (x.empty()) {
        return 0.0;
    }
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    return ss / static_cast<double>(x.size());
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

inline double median(std::vector<double> x) {
    if (x.empty()) {
        return 0.0;
    }
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return (saa > 0 && sbb > 0) ? sab / std::sqrt(saa * sbb) : 0.0;
}

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double x, double dof) {
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

struct OlsFit {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd std_errors;
    Eigen::VectorXd residuals;
    double ssr = 0.0;
    double r_squared = 0.0;
    Eigen::Index dof = 0;
};

/// Ordinary least squares via column-pivoted QR. Throws SingularRegression
/// when the design is rank deficient (relative pivot threshold 1e-10) or
/// leaves no residual degrees of freedom.
inline OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::Index n = X.rows();
    const Eigen::Index k = X.cols();
    if (n <= k) {
        throw Error(ErrorCode::SingularRegression, "regression has no residual degrees of freedom");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        throw Error(ErrorCode::SingularRegression, "design matrix is rank deficient");
    }
    OlsFit fit;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - X * fit.coefficients;
    fit.ssr = fit.residuals.squaredNorm();
    fit.dof = n - k;
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    fit.r_squared = sst > 0.0 ? 1.0 - fit.ssr / sst : 0.0;

    // cov(beta) = sigma^2 (X'X)^-1 = sigma^2 P R^-1 R^-T P'
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd diag_perm = r_inv.rowwise().squaredNorm();
    const double sigma2 = fit.ssr / static_cast<double>(fit.dof);
    fit.std_errors.resize(k);
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = 0; j < k; ++j) {
        fit.std_errors(perm(j)) = std::sqrt(sigma2 * diag_perm(j));
    }
    return fit;
}

} // namespace aries::stats
