#pragma once

#include "aries/baselines/models.hpp"
#include "aries/core/error.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/series.hpp"
#include "aries/store/perf_log.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace aries::baselines {

struct EvalResult {
    std::string series_id;
    std::string model;
    double mae = 0.0;
    double mse = 0.0;
    std::size_t window_count = 0;
    bool fallback = false;
};

struct EvalWindow {
    std::size_t history_begin = 0;
    std::size_t future_begin = 0;
};

/// Windows whose future lies entirely in the test segment. The history may
/// reach back into validation and training data. Future starts run from
/// max(test_begin, history_len) in steps of `stride`.
inline std::vector<EvalWindow> evaluation_windows(std::size_t length, const SplitSpec& spec) {
    spec.validate();
    std::vector<EvalWindow> out;
    if (length < spec.history_len + spec.horizon) {
        return out;
    }
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(length) * spec.train_ratio));
    const auto n_val =
        std::min(length - n_train, static_cast<std::size_t>(std::floor(static_cast<double>(length) * spec.val_ratio)));
    const std::size_t first = std::max(n_train + n_val, spec.history_len);
    for (std::size_t s = first; s + spec.horizon <= length; s += spec.stride) {
        out.push_back({s - spec.history_len, s});
    }
    return out;
}

struct SkippedSeries {
    std::string series_id;
    std::string reason;
};

struct EvalOutput {
    /// Series order of the input, model order of the request.
    std::vector<EvalResult> results;
    std::vector<SkippedSeries> skipped;

    std::size_t fallback_count() const {
        return static_cast<std::size_t>(
            std::count_if(results.begin(), results.end(), [](const EvalResult& r) { return r.fallback; }));
    }
};

/// Fits each model on the training segment and scores it on every
/// evaluation window of one series.
inline std::vector<EvalResult> evaluate_series(const TimeSeries& s, const std::vector<ModelKind>& models,
                                               const SplitSpec& spec, const ModelOptions& opts = {}) {
    const auto windows = evaluation_windows(s.size(), spec);
    if (windows.empty()) {
        throw Error(ErrorCode::InsufficientWindows,
                    "series '" + s.id() + "' has no test window for history " + std::to_string(spec.history_len) +
                        " + horizon " + std::to_string(spec.horizon));
    }
    const SplitSegments seg = split(s.values(), spec);
    const auto values = s.values();
    std::vector<EvalResult> out;
    for (ModelKind k : models) {
        auto model = make_model(k, opts);
        model->fit(seg.train, spec.history_len, spec.horizon);
        double abs_sum = 0.0;
        double sq_sum = 0.0;
        for (const auto& w : windows) {
            const auto history = values.subspan(w.history_begin, spec.history_len);
            const auto future = values.subspan(w.future_begin, spec.horizon);
            const auto pred = model->predict(history, spec.horizon);
            if (pred.size() != spec.horizon) {
                throw Error(ErrorCode::InvalidArgument, model->name() + " returned a forecast of wrong length");
            }
            double a = 0.0;
            double q = 0.0;
            for (std::size_t t = 0; t < spec.horizon; ++t) {
                if (!std::isfinite(pred[t])) {
                    throw Error(ErrorCode::InvalidArgument, model->name() + " produced a non-finite forecast");
                }
                const double e = pred[t] - future[t];
                a += std::abs(e);
                q += e * e;
            }
            abs_sum += a / static_cast<double>(spec.horizon);
            sq_sum += q / static_cast<double>(spec.horizon);
        }
        const auto n = static_cast<double>(windows.size());
        out.push_back({s.id(), model->name(), abs_sum / n, sq_sum / n, windows.size(), model->fallback()});
    }
    return out;
}

/// Series without a test window, or whose evaluation throws, are skipped
/// and reported. Output does not depend on the thread count.
inline EvalOutput evaluate(const std::vector<ModelKind>& models, const SeriesSet& set, const SplitSpec& spec,
                           const ModelOptions& opts = {}, std::size_t threads = 1) {
    spec.validate();
    if (models.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no models to evaluate");
    }
    struct Slot {
        std::vector<EvalResult> results;
        std::string error;
    };
    std::vector<Slot> slots(set.size());
    parallel_for(set.size(), threads, [&](std::size_t i) {
        try {
            slots[i].results = evaluate_series(set[i], models, spec, opts);
        } catch (const Error& e) {
            slots[i].error = e.what();
        }
    });
    EvalOutput out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].error.empty()) {
            out.skipped.push_back({set[i].id(), slots[i].error});
            continue;
        }
        out.results.insert(out.results.end(), slots[i].results.begin(), slots[i].results.end());
    }
    return out;
}

inline store::PerfLog to_perf_log(const std::vector<EvalResult>& results) {
    store::PerfLog log;
    log.reserve(results.size());
    for (const auto& r : results) {
        log.push_back({r.series_id, {r.model, r.mae, r.mse}});
    }
    return log;
}

} // namespace aries::baselines
