#pragma once

#include "aries/core/error.hpp"
#include "aries/properties/loess.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace aries::props {

struct StlConfig {
    std::size_t seasonal_span = 7;
    std::size_t inner_iterations = 2;
};

struct MstlConfig {
    StlConfig stl;
    /// The i-th period (0-based, ascending) uses seasonal span
    /// stl.seasonal_span + (i + 1) * seasonal_span_step, i.e. 11, 15, 19, ...
    std::size_t seasonal_span_step = 4;
    /// Sweeps over all components; a single period needs only one.
    std::size_t outer_iterations = 2;
};

/// x = trend + sum(seasonals) + residual, elementwise.
struct Decomposition {
    std::vector<std::size_t> periods;
    std::vector<std::vector<double>> seasonals;
    std::vector<double> trend;
    std::vector<double> residual;
};

namespace detail {

inline std::vector<double> moving_average(std::span<const double> x, std::size_t len) {
    std::vector<double> out(x.size() - len + 1);
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        s += x[i];
    }
    out[0] = s / static_cast<double>(len);
    for (std::size_t i = 1; i < out.size(); ++i) {
        s += x[i + len - 1] - x[i - 1];
        out[i] = s / static_cast<double>(len);
    }
    return out;
}

/// Smooths each cycle-subseries and extends it by one point on both ends;
/// result has length n + 2*period.
inline std::vector<double> cycle_subseries(std::span<const double> y, std::size_t period, std::size_t span) {
    const std::size_t n = y.size();
    std::vector<double> out(n + 2 * period, 0.0);
    std::vector<double> sub;
    for (std::size_t j = 0; j < period; ++j) {
        sub.clear();
        for (std::size_t i = j; i < n; i += period) {
            sub.push_back(y[i]);
        }
        const std::size_t k = sub.size();
        const std::vector<double> sm = loess::smooth(sub, span);
        const std::size_t right_end = std::min(span, k) - 1;
        const double first =
            loess::estimate(sub, -1.0, 0, right_end, span).value_or(sm.front());
        const std::size_t left_begin = k > span ? k - span : 0;
        const double last =
            loess::estimate(sub, static_cast<double>(k), left_begin, k - 1, span).value_or(sm.back());
        out[j] = first;
        for (std::size_t m = 0; m < k; ++m) {
            out[(m + 1) * period + j] = sm[m];
        }
        out[(k + 1) * period + j] = last;
    }
    return out;
}

struct StlPass {
    std::vector<double> seasonal;
    std::vector<double> trend;
};

inline StlPass stl(std::span<const double> y, std::size_t period, const StlConfig& cfg) {
    const std::size_t n = y.size();
    const std::size_t ns = std::max<std::size_t>(3, cfg.seasonal_span | 1u);
    const std::size_t nt =
        loess::next_odd(1.5 * static_cast<double>(period) / (1.0 - 1.5 / static_cast<double>(ns)));
    const std::size_t nl = loess::next_odd(static_cast<double>(period));

    StlPass out;
    out.trend.assign(n, 0.0);
    out.seasonal.assign(n, 0.0);
    std::vector<double> work(n);
    for (std::size_t it = 0; it < std::max<std::size_t>(1, cfg.inner_iterations); ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            work[i] = y[i] - out.trend[i];
        }
        const std::vector<double> cycle = cycle_subseries(work, period, ns);
        std::vector<double> low = moving_average(cycle, period);
        low = moving_average(low, period);
        low = moving_average(low, 3);
        low = loess::smooth(low, nl);
        for (std::size_t i = 0; i < n; ++i) {
            out.seasonal[i] = cycle[period + i] - low[i];
            work[i] = y[i] - out.seasonal[i];
        }
        out.trend = loess::smooth(work, nt);
    }
    return out;
}

} // namespace detail

/// Multi-seasonal STL: one seasonal component per period (ascending), each
/// re-estimated on the series with the other components removed, for
/// `outer_iterations` sweeps. With no periods the trend is a single LOESS
/// pass spanning the whole series.
inline Decomposition mstl_decompose(std::span<const double> x, std::span<const std::size_t> periods,
                                    const MstlConfig& cfg = {}) {
    const std::size_t n = x.size();
    if (n < 4) {
        throw Error(ErrorCode::TooShort, "decomposition needs at least 4 observations");
    }
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (periods[i] < 2 || 2 * periods[i] > n) {
            throw Error(ErrorCode::PeriodTooLarge, "period " + std::to_string(periods[i]) +
                                                       " outside [2, L/2] for length " + std::to_string(n));
        }
        if (i > 0 && periods[i] < periods[i - 1]) {
            throw Error(ErrorCode::InvalidArgument, "periods must be ascending");
        }
    }
    Decomposition d;
    d.periods.assign(periods.begin(), periods.end());
    d.seasonals.assign(periods.size(), std::vector<double>(n, 0.0));

    if (periods.empty()) {
        d.trend = loess::smooth(x, n | 1u);
    } else {
        std::vector<double> deseason(x.begin(), x.end());
        const std::size_t sweeps = periods.size() == 1 ? 1 : std::max<std::size_t>(1, cfg.outer_iterations);
        for (std::size_t outer = 0; outer < sweeps; ++outer) {
            for (std::size_t i = 0; i < periods.size(); ++i) {
                for (std::size_t t = 0; t < n; ++t) {
                    deseason[t] += d.seasonals[i][t];
                }
                StlConfig stl_cfg = cfg.stl;
                stl_cfg.seasonal_span += (i + 1) * cfg.seasonal_span_step;
                detail::StlPass pass = detail::stl(deseason, periods[i], stl_cfg);
                d.seasonals[i] = std::move(pass.seasonal);
                d.trend = std::move(pass.trend);
                for (std::size_t t = 0; t < n; ++t) {
                    deseason[t] -= d.seasonals[i][t];
                }
            }
        }
    }
    d.residual.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double v = x[t] - d.trend[t];
        for (const auto& s : d.seasonals) {
            v -= s[t];
        }
        d.residual[t] = v;
    }
    return d;
}

} // namespace aries::props
