#pragma once

#include "aries/properties/acf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace aries::props {

struct SeasonDetectionConfig {
    std::size_t max_candidates = 10;
    double sampling_freq = 1.0;
    double min_acf = 0.1;
};

/// Multi-season detection, returning periods in the order they were
/// accepted (strongest ACF first). Steps: first-difference, ACF up to L//2,
/// walk lags by descending ACF (skipping the top one, lag 0), examine at
/// most `max_candidates`, accept p = floor(k/fs) when p >= 2, ACF(p) > 0.1
/// and p mod q >= 2 for every q accepted so far.
inline std::vector<std::size_t> detect_seasons_ranked(std::span<const double> x,
                                                      const SeasonDetectionConfig& cfg = {}) {
    const std::size_t n = x.size();
    if (n < 8) {
        throw Error(ErrorCode::TooShort, "season detection needs at least 8 observations");
    }
    if (!(cfg.sampling_freq > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sampling frequency must be positive");
    }
    std::vector<double> diff(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        diff[i - 1] = x[i] - x[i - 1];
    }
    const std::size_t half = n / 2;
    const Autocorrelation r = acf(diff, half);
    std::vector<std::size_t> accepted;
    if (r.constant_input) {
        return accepted;
    }
    std::vector<std::size_t> order(r.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });

    const std::size_t examined = std::min(cfg.max_candidates, order.size() - 1);
    for (std::size_t c = 1; c <= examined; ++c) {
        const auto p = static_cast<std::size_t>(std::floor(static_cast<double>(order[c]) / cfg.sampling_freq));
        if (p < 2 || p >= r.size() || !(r[p] > cfg.min_acf)) {
            continue;
        }
        const bool harmonic =
            std::any_of(accepted.begin(), accepted.end(), [p](std::size_t q) { return p % q < 2; });
        if (!harmonic) {
            accepted.push_back(p);
        }
    }
    std::erase_if(accepted, [half](std::size_t p) { return p >= half; });
    return accepted;
}

/// Detected seasons sorted ascending; every period is >= 2 and < L//2.
inline std::vector<std::size_t> detect_seasons(std::span<const double> x, const SeasonDetectionConfig& cfg = {}) {
    auto periods = detect_seasons_ranked(x, cfg);
    std::sort(periods.begin(), periods.end());
    return periods;
}

} // namespace aries::props
