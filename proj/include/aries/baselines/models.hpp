#pragma once

#include "aries/core/error.hpp"
#include "aries/core/stats.hpp"
#include "aries/properties/seasonality.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aries::baselines {

/// Last f values of the history, in order.
inline std::vector<double> predict_hi(std::span<const double> history, std::size_t f) {
    if (history.size() < f) {
        throw Error(ErrorCode::HistoryTooShort, "HI needs history >= horizon (" + std::to_string(history.size()) +
                                                    " < " + std::to_string(f) + ")");
    }
    return {history.end() - static_cast<std::ptrdiff_t>(f), history.end()};
}

inline std::vector<double> predict_naive_mean(std::span<const double> history, std::size_t f) {
    if (history.empty()) {
        throw Error(ErrorCode::HistoryTooShort, "naive mean needs a non-empty history");
    }
    return std::vector<double>(f, stats::mean(history));
}

/// forecast[t] = history[h - period + (t mod period)]
inline std::vector<double> predict_seasonal_naive(std::span<const double> history, std::size_t f,
                                                  std::size_t period) {
    if (period == 0) {
        throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
    }
    if (history.size() < period) {
        throw Error(ErrorCode::HistoryTooShort, "seasonal naive needs history >= period");
    }
    const std::size_t h = history.size();
    std::vector<double> out(f);
    for (std::size_t t = 0; t < f; ++t) {
        out[t] = history[h - period + (t % period)];
    }
    return out;
}

/// Intercept followed by lag coefficients phi_1..phi_p.
struct ArCoefficients {
    double intercept = 0.0;
    std::vector<double> phi;
};

inline std::size_t ar_min_history(std::size_t p) { return 3 * p + 10; }

/// Least squares of x_t on [1, x_{t-1}, ..., x_{t-p}]. Throws
/// SingularRegression on a rank-deficient design, HistoryTooShort below 3p+10.
inline ArCoefficients fit_ar(std::span<const double> x, std::size_t p) {
    if (p == 0) {
        throw Error(ErrorCode::InvalidArgument, "AR order must be >= 1");
    }
    if (x.size() < ar_min_history(p)) {
        throw Error(ErrorCode::HistoryTooShort, "AR(" + std::to_string(p) + ") needs at least " +
                                                    std::to_string(ar_min_history(p)) + " observations");
    }
    const auto rows = static_cast<Eigen::Index>(x.size() - p);
    Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(p + 1));
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + p;
        y[r] = x[t];
        X(r, 0) = 1.0;
        for (std::size_t k = 1; k <= p; ++k) {
            X(r, static_cast<Eigen::Index>(k)) = x[t - k];
        }
    }
    const stats::OlsFit fit = stats::ols(X, y);
    ArCoefficients c;
    c.intercept = fit.coefficients[0];
    c.phi.assign(fit.coefficients.data() + 1, fit.coefficients.data() + fit.coefficients.size());
    return c;
}

/// Recursive multi-step forecast feeding predictions back as lags.
inline std::vector<double> forecast_ar(const ArCoefficients& c, std::span<const double> history, std::size_t f) {
    const std::size_t p = c.phi.size();
    if (history.size() < p) {
        throw Error(ErrorCode::HistoryTooShort, "AR forecast needs at least p history values");
    }
    std::vector<double> buf(history.end() - static_cast<std::ptrdiff_t>(p), history.end());
    std::vector<double> out(f);
    for (std::size_t t = 0; t < f; ++t) {
        double v = c.intercept;
        for (std::size_t k = 1; k <= p; ++k) {
            v += c.phi[k - 1] * buf[buf.size() - k];
        }
        out[t] = v;
        buf.push_back(v);
    }
    return out;
}

struct Forecast {
    std::vector<double> values;
    bool fallback = false;
};

/// Fits on the history itself. Falls back to the naive mean (flagged) when
/// the regression is singular.
inline Forecast predict_ar(std::span<const double> history, std::size_t f, std::size_t p = 8) {
    try {
        return {forecast_ar(fit_ar(history, p), history, f), false};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularRegression) {
            throw;
        }
        return {predict_naive_mean(history, f), true};
    }
}

/// Direct multi-output ridge map from the last w values to the next f.
/// The intercept is left unpenalized by centering inputs and targets.
struct LinearWindowFit {
    std::size_t window = 0;
    std::size_t horizon = 0;
    Eigen::VectorXd x_mean;
    Eigen::VectorXd y_mean;
    Eigen::MatrixXd weights;  // window x horizon
};

inline constexpr std::size_t kMinLinearWindows = 10;

inline LinearWindowFit fit_linear_window(std::span<const double> x, std::size_t w, std::size_t f, double lambda) {
    if (w == 0 || f == 0) {
        throw Error(ErrorCode::InvalidArgument, "window and horizon must be positive");
    }
    if (!(lambda >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "ridge penalty must be non-negative");
    }
    if (x.size() < w + f + kMinLinearWindows - 1) {
        throw Error(ErrorCode::InsufficientWindows, "linear window needs at least " +
                                                        std::to_string(kMinLinearWindows) + " training windows");
    }
    const auto n = static_cast<Eigen::Index>(x.size() - w - f + 1);
    const auto W = static_cast<Eigen::Index>(w);
    const auto F = static_cast<Eigen::Index>(f);
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXd X(n, W);
    Eigen::MatrixXd Y(n, F);
    for (Eigen::Index i = 0; i < n; ++i) {
        X.row(i) = v.segment(i, W).transpose();
        Y.row(i) = v.segment(i + W, F).transpose();
    }
    LinearWindowFit fit;
    fit.window = w;
    fit.horizon = f;
    fit.x_mean = X.colwise().mean().transpose();
    fit.y_mean = Y.colwise().mean().transpose();
    X.rowwise() -= fit.x_mean.transpose();
    Y.rowwise() -= fit.y_mean.transpose();
    Eigen::MatrixXd gram = X.transpose() * X;
    gram.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularRegression, "ridge system could not be factorized");
    }
    fit.weights = ldlt.solve(X.transpose() * Y);
    if (!fit.weights.allFinite()) {
        throw Error(ErrorCode::SingularRegression, "ridge solution is not finite");
    }
    return fit;
}

inline std::vector<double> forecast_linear_window(const LinearWindowFit& fit, std::span<const double> history) {
    if (history.size() < fit.window) {
        throw Error(ErrorCode::HistoryTooShort, "linear window needs history >= window");
    }
    const Eigen::Map<const Eigen::VectorXd> last(history.data() + history.size() - fit.window,
                                                 static_cast<Eigen::Index>(fit.window));
    const Eigen::VectorXd y = fit.y_mean + fit.weights.transpose() * (last - fit.x_mean);
    return {y.data(), y.data() + y.size()};
}

/// Trains on every window inside the history. Falls back to HI (flagged)
/// when fewer than 10 windows fit.
inline Forecast predict_linear_window(std::span<const double> history, std::size_t f, std::size_t w,
                                      double lambda = 1e-3) {
    try {
        return {forecast_linear_window(fit_linear_window(history, w, f, lambda), history), false};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientWindows && e.code() != ErrorCode::SingularRegression) {
            throw;
        }
        return {predict_hi(history, f), true};
    }
}

enum class ModelKind { Hi, NaiveMean, SeasonalNaive, Ar, LinearWindow };

inline std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Hi: return "HI";
        case ModelKind::NaiveMean: return "NaiveMean";
        case ModelKind::SeasonalNaive: return "SeasonalNaive";
        case ModelKind::Ar: return "AR";
        case ModelKind::LinearWindow: return "LinearWindow";
    }
    return "?";
}

/// CLI keys: hi, naive, snaive, ar, linear.
inline ModelKind parse_model_key(const std::string& key) {
    if (key == "hi") return ModelKind::Hi;
    if (key == "naive") return ModelKind::NaiveMean;
    if (key == "snaive") return ModelKind::SeasonalNaive;
    if (key == "ar") return ModelKind::Ar;
    if (key == "linear") return ModelKind::LinearWindow;
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + key + "' (expected hi, naive, snaive, ar, linear)");
}

struct ModelOptions {
    std::size_t ar_order = 8;
    /// 0 means "use the history length".
    std::size_t linear_window = 0;
    double ridge = 1e-3;
    props::SeasonDetectionConfig seasons;
};

/// fit() sees the training segment only; predict() sees one history window.
class ForecastModel {
public:
    virtual ~ForecastModel() = default;
    virtual std::string name() const = 0;
    virtual void fit(std::span<const double> train, std::size_t history_len, std::size_t horizon) = 0;
    virtual std::vector<double> predict(std::span<const double> history, std::size_t f) const = 0;
    /// True when fit() could not train and predict() uses the fallback rule.
    virtual bool fallback() const { return false; }
};

class HiModel final : public ForecastModel {
public:
    std::string name() const override { return model_name(ModelKind::Hi); }
    void fit(std::span<const double>, std::size_t, std::size_t) override {}
    std::vector<double> predict(std::span<const double> history, std::size_t f) const override {
        return predict_hi(history, f);
    }
};

class NaiveMeanModel final : public ForecastModel {
public:
    std::string name() const override { return model_name(ModelKind::NaiveMean); }
    void fit(std::span<const double>, std::size_t, std::size_t) override {}
    std::vector<double> predict(std::span<const double> history, std::size_t f) const override {
        return predict_naive_mean(history, f);
    }
};

/// Period = first season accepted on the training segment that fits in the
/// history; 1 (repeat the last value) when none does.
class SeasonalNaiveModel final : public ForecastModel {
public:
    explicit SeasonalNaiveModel(props::SeasonDetectionConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return model_name(ModelKind::SeasonalNaive); }
    void fit(std::span<const double> train, std::size_t history_len, std::size_t) override {
        period_ = 1;
        if (train.size() < 8) {
            return;
        }
        for (std::size_t p : props::detect_seasons_ranked(train, cfg_)) {
            if (p <= history_len) {
                period_ = p;
                return;
            }
        }
    }
    std::vector<double> predict(std::span<const double> history, std::size_t f) const override {
        return predict_seasonal_naive(history, f, period_);
    }
    std::size_t period() const { return period_; }

private:
    props::SeasonDetectionConfig cfg_;
    std::size_t period_ = 1;
};

class ArModel final : public ForecastModel {
public:
    explicit ArModel(std::size_t order = 8) : order_(order) {}
    std::string name() const override { return model_name(ModelKind::Ar); }
    void fit(std::span<const double> train, std::size_t, std::size_t) override {
        coef_.reset();
        try {
            coef_ = fit_ar(train, order_);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularRegression && e.code() != ErrorCode::HistoryTooShort) {
                throw;
            }
        }
    }
    std::vector<double> predict(std::span<const double> history, std::size_t f) const override {
        return coef_ ? forecast_ar(*coef_, history, f) : predict_naive_mean(history, f);
    }
    bool fallback() const override { return !coef_; }
    const std::optional<ArCoefficients>& coefficients() const { return coef_; }

private:
    std::size_t order_;
    std::optional<ArCoefficients> coef_;
};

class LinearWindowModel final : public ForecastModel {
public:
    LinearWindowModel(std::size_t window, double ridge) : window_(window), ridge_(ridge) {}
    std::string name() const override { return model_name(ModelKind::LinearWindow); }
    void fit(std::span<const double> train, std::size_t history_len, std::size_t horizon) override {
        fit_.reset();
        const std::size_t w = window_ == 0 ? history_len : window_;
        try {
            fit_ = fit_linear_window(train, w, horizon, ridge_);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientWindows && e.code() != ErrorCode::SingularRegression) {
                throw;
            }
        }
    }
    std::vector<double> predict(std::span<const double> history, std::size_t f) const override {
        if (fit_ && fit_->horizon == f && history.size() >= fit_->window) {
            return forecast_linear_window(*fit_, history);
        }
        return predict_hi(history, f);
    }
    bool fallback() const override { return !fit_; }

private:
    std::size_t window_;
    double ridge_;
    std::optional<LinearWindowFit> fit_;
};

inline std::unique_ptr<ForecastModel> make_model(ModelKind k, const ModelOptions& o = {}) {
    switch (k) {
        case ModelKind::Hi: return std::make_unique<HiModel>();
        case ModelKind::NaiveMean: return std::make_unique<NaiveMeanModel>();
        case ModelKind::SeasonalNaive: return std::make_unique<SeasonalNaiveModel>(o.seasons);
        case ModelKind::Ar: return std::make_unique<ArModel>(o.ar_order);
        case ModelKind::LinearWindow: return std::make_unique<LinearWindowModel>(o.linear_window, o.ridge);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model kind");
}

} // namespace aries::baselines
