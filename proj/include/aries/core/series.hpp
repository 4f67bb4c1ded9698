#pragma once

#include "aries/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace aries {

/// A finite real-valued sequence with an identifier. Immutable once built.
class TimeSeries {
public:
    TimeSeries(std::string id, std::vector<double> values) : id_(std::move(id)), values_(std::move(values)) {
        if (values_.size() < 2) {
            throw Error(ErrorCode::TooShort, "series '" + id_ + "' needs at least 2 values");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorCode::InvalidArgument,
                            "series '" + id_ + "' has a non-finite value at index " + std::to_string(i));
            }
        }
    }

    const std::string& id() const noexcept { return id_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::string id_;
    std::vector<double> values_;
};

/// Ordered collection of series with unique ids.
class SeriesSet {
public:
    SeriesSet() = default;

    void add(TimeSeries series) {
        if (!ids_.insert(series.id()).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate series id '" + series.id() + "'");
        }
        series_.push_back(std::move(series));
    }

    const std::vector<TimeSeries>& series() const noexcept { return series_; }
    std::size_t size() const noexcept { return series_.size(); }
    bool empty() const noexcept { return series_.empty(); }
    const TimeSeries& operator[](std::size_t i) const { return series_[i]; }
    auto begin() const noexcept { return series_.begin(); }
    auto end() const noexcept { return series_.end(); }

    const TimeSeries* find(const std::string& id) const {
        auto it = std::find_if(series_.begin(), series_.end(), [&](const TimeSeries& s) { return s.id() == id; });
        return it == series_.end() ? nullptr : &*it;
    }

    std::map<std::string, std::string> metadata;

private:
    std::vector<TimeSeries> series_;
    std::unordered_set<std::string> ids_;
};

struct SplitSpec {
    double train_ratio = 0.7;
    double val_ratio = 0.1;
    double test_ratio = 0.2;
    std::size_t history_len = 336;
    std::size_t horizon = 336;
    std::size_t stride = 1;

    void validate() const {
        for (double r : {train_ratio, val_ratio, test_ratio}) {
            if (!(r >= 0.0 && r <= 1.0)) {
                throw Error(ErrorCode::InvalidArgument, "split ratios must lie in [0,1]");
            }
        }
        if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidArgument, "split ratios must sum to 1");
        }
        if (history_len == 0 || horizon == 0 || stride == 0) {
            throw Error(ErrorCode::InvalidArgument, "history_len, horizon and stride must be positive");
        }
    }
};

/// Contiguous train/val/test views into a series. Floor arithmetic on the
/// first two boundaries; the remainder goes to test.
struct SplitSegments {
    std::span<const double> train;
    std::span<const double> val;
    std::span<const double> test;

    /// Index of the first test element.
    std::size_t test_begin() const noexcept { return train.size() + val.size(); }
};

inline SplitSegments split(std::span<const double> values, const SplitSpec& spec) {
    spec.validate();
    const std::size_t n = values.size();
    if (n < spec.history_len + spec.horizon) {
        throw Error(ErrorCode::TooShort, "series of length " + std::to_string(n) + " cannot hold history " +
                                             std::to_string(spec.history_len) + " + horizon " +
                                             std::to_string(spec.horizon));
    }
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train_ratio));
    const auto n_val = std::min(n - n_train,
                                static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_ratio)));
    return SplitSegments{values.subspan(0, n_train), values.subspan(n_train, n_val),
                         values.subspan(n_train + n_val)};
}

inline SplitSegments split(const TimeSeries& series, const SplitSpec& spec) { return split(series.values(), spec); }

struct Window {
    std::span<const double> history;
    std::span<const double> future;
    std::size_t offset = 0;
};

inline std::size_t window_count(std::size_t length, std::size_t history_len, std::size_t horizon, std::size_t stride) {
    if (history_len + horizon > length || stride == 0) {
        return 0;
    }
    return (length - history_len - horizon) / stride + 1;
}

inline std::vector<Window> sliding_windows(std::span<const double> values, std::size_t history_len,
                                           std::size_t horizon, std::size_t stride) {
    if (history_len == 0 || horizon == 0 || stride == 0) {
        throw Error(ErrorCode::InvalidArgument, "history_len, horizon and stride must be positive");
    }
    if (history_len + horizon > values.size()) {
        throw Error(ErrorCode::TooShort, "series of length " + std::to_string(values.size()) +
                                             " is shorter than history + horizon");
    }
    const std::size_t count = window_count(values.size(), history_len, horizon, stride);
    std::vector<Window> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * stride;
        out.push_back(Window{values.subspan(start, history_len), values.subspan(start + history_len, horizon), start});
    }
    return out;
}

inline std::vector<Window> sliding_windows(const TimeSeries& series, std::size_t history_len, std::size_t horizon,
                                           std::size_t stride) {
    return sliding_windows(series.values(), history_len, horizon, stride);
}

/// The history that precedes the first test value: the segment a forecaster
/// sees before its first test-set prediction. Profiles are computed on it so
/// that no test-period value leaks into property evaluation.
inline std::span<const double> history_segment(std::span<const double> values, const SplitSpec& spec) {
    const SplitSegments seg = split(values, spec);
    const std::size_t border = seg.test_begin();
    const std::size_t begin = border >= spec.history_len ? border - spec.history_len : 0;
    return values.subspan(begin, spec.history_len);
}

inline bool is_constant(std::span<const double> values) {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

/// Affine map onto [0,1]; a constant input maps to 0.5 everywhere.
inline std::vector<double> minmax_normalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.5);
    if (values.empty() || is_constant(values)) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::clamp((values[i] - min) / range, 0.0, 1.0);
    }
    return out;
}

inline TimeSeries minmax_normalize(const TimeSeries& series) {
    return TimeSeries(series.id(), minmax_normalize(series.values()));
}

} // namespace aries
