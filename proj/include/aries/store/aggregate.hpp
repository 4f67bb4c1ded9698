#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/core/stats.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/property_vector.hpp"
#include "aries/store/store.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aries::store {

struct CellStats {
    double mae_mean = 0.0;
    double mae_median = 0.0;
    double mse_mean = 0.0;
    double mse_median = 0.0;
    std::size_t count = 0;
};

/// Rows are models (sorted), columns are "Regular", then "Stationary"
/// unless the property is stationarity itself, then the property's bins.
/// A cell with no series is nullopt rather than zero.
struct AggregateTable {
    Component property = Component::Trend;
    std::vector<std::string> columns;
    std::vector<std::string> models;
    std::vector<std::vector<std::optional<CellStats>>> cells;
};

namespace detail {

inline CellStats summarize(std::vector<double> mae, std::vector<double> mse) {
    std::sort(mae.begin(), mae.end());
    std::sort(mse.begin(), mse.end());
    return CellStats{stats::mean(mae), stats::median(mae), stats::mean(mse), stats::median(mse), mae.size()};
}

struct Sample {
    std::string model;
    double mae;
    double mse;
    std::optional<std::size_t> column;
    bool stationary;
};

inline AggregateTable tabulate(Component property, const std::vector<Sample>& samples) {
    AggregateTable t;
    t.property = property;
    t.columns.push_back("Regular");
    const bool with_stationary_column = property != Component::Stationarity;
    if (with_stationary_column) {
        t.columns.push_back("Stationary");
    }
    const auto& labels = bin_labels(property);
    t.columns.insert(t.columns.end(), labels.begin(), labels.end());
    const std::size_t offset = with_stationary_column ? 2 : 1;

    std::map<std::string, std::vector<std::pair<std::vector<double>, std::vector<double>>>> acc;
    for (const auto& s : samples) {
        auto& row = acc[s.model];
        row.resize(t.columns.size());
        auto push = [&](std::size_t col) {
            row[col].first.push_back(s.mae);
            row[col].second.push_back(s.mse);
        };
        push(0);
        if (with_stationary_column && s.stationary) {
            push(1);
        } else if (s.column) {
            push(offset + *s.column);
        }
    }
    for (auto& [model, row] : acc) {
        t.models.push_back(model);
        std::vector<std::optional<CellStats>> cells(t.columns.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].first.empty()) {
                cells[c] = summarize(std::move(row[c].first), std::move(row[c].second));
            }
        }
        t.cells.push_back(std::move(cells));
    }
    return t;
}

} // namespace detail

/// Aggregates raw profiles and log. Stationary series count toward Regular
/// and Stationary only; the property bins cover the non-stationary ones.
inline AggregateTable aggregate_table(const std::map<std::string, props::PropertyProfile>& profiles,
                                      const PerfLog& log, Component property) {
    if (log.empty()) {
        throw Error(ErrorCode::EmptyInput, "performance log is empty");
    }
    std::vector<detail::Sample> samples;
    for (const auto& e : log) {
        auto it = profiles.find(e.series_id);
        if (it == profiles.end()) {
            throw Error(ErrorCode::MissingProfile, "no profile for logged series '" + e.series_id + "'");
        }
        const PropertyVector v = bin_profile(it->second);
        const bool stationary = it->second.is_stationary;
        std::optional<std::size_t> column;
        if (property == Component::Stationarity || !stationary) {
            column = v[property];
        }
        samples.push_back({e.record.model, e.record.mae, e.record.mse, column, stationary});
    }
    return detail::tabulate(property, samples);
}

/// Same shape from a store; stationary series are not in the index, so the
/// Stationary column stays empty.
inline AggregateTable aggregate_table(const Store& st, Component property) {
    std::vector<detail::Sample> samples;
    for (const auto& [key, bags] : st.index) {
        for (const auto& bag : bags) {
            for (const auto& r : bag.records) {
                samples.push_back({r.model, r.mae, r.mse, std::size_t{key[property]}, false});
            }
        }
    }
    if (samples.empty()) {
        throw Error(ErrorCode::EmptyStore, "store has no entries to aggregate");
    }
    return detail::tabulate(property, samples);
}

inline constexpr std::array<const char*, 4> kStatNames = {"mae_mean", "mae_median", "mse_mean", "mse_median"};

namespace detail {

inline std::optional<double> stat_of(const std::optional<CellStats>& c, std::size_t which) {
    if (!c) {
        return std::nullopt;
    }
    switch (which) {
        case 0: return c->mae_mean;
        case 1: return c->mae_median;
        case 2: return c->mse_mean;
        default: return c->mse_median;
    }
}

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

} // namespace detail

/// One row per (model, statistic); empty cell when a bin has no series.
inline void write_table_csv(std::ostream& out, const AggregateTable& t) {
    out << "model,statistic";
    for (const auto& c : t.columns) {
        out << ',' << detail::csv_cell(c);
    }
    out << '\n';
    for (std::size_t m = 0; m < t.models.size(); ++m) {
        for (std::size_t s = 0; s < kStatNames.size(); ++s) {
            out << detail::csv_cell(t.models[m]) << ',' << kStatNames[s];
            for (const auto& cell : t.cells[m]) {
                out << ',';
                if (auto v = detail::stat_of(cell, s)) {
                    out << io::format_double(*v);
                }
            }
            out << '\n';
        }
    }
}

inline std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

/// Markdown rendering with three decimals; absent cells show "n/a".
inline void write_table_markdown(std::ostream& out, const AggregateTable& t) {
    out << "| " << component_name(t.property) << " | statistic |";
    for (const auto& c : t.columns) {
        out << ' ' << c << " |";
    }
    out << "\n|---|---|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    for (std::size_t m = 0; m < t.models.size(); ++m) {
        for (std::size_t s = 0; s < kStatNames.size(); ++s) {
            out << "| " << t.models[m] << " | " << kStatNames[s] << " |";
            for (const auto& cell : t.cells[m]) {
                const auto v = detail::stat_of(cell, s);
                out << ' ' << (v ? fixed3(*v) : std::string("n/a")) << " |";
            }
            out << '\n';
        }
    }
}

} // namespace aries::store
