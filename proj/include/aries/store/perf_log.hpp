#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"

#include <cmath>
#include <filesystem>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace aries::store {

struct PerfRecord {
    std::string model;
    double mae = 0.0;
    double mse = 0.0;

    bool operator==(const PerfRecord&) const = default;
};

struct LogEntry {
    std::string series_id;
    PerfRecord record;

    bool operator==(const LogEntry&) const = default;
};

using PerfLog = std::vector<LogEntry>;

inline constexpr const char* kLogHeader = "series_id,model,mae,mse";

inline void validate_metric(double v, const char* what, const std::string& where) {
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::ParseError, std::string(what) + " is not finite " + where);
    }
    if (v < 0.0) {
        throw Error(ErrorCode::NegativeMetric, std::string(what) + " is negative " + where);
    }
}

/// Parses the performance log CSV. Rejects duplicate (series_id, model).
inline PerfLog read_perf_log(std::istream& in) {
    const auto lines = io::read_lines(in);
    if (lines.empty()) {
        throw Error(ErrorCode::EmptyInput, "performance log is empty");
    }
    std::string header = lines.front();
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    if (header != kLogHeader) {
        throw Error(ErrorCode::ParseError, "performance log header must be exactly '" + std::string(kLogHeader) + "'");
    }
    PerfLog log;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = "(line " + std::to_string(i + 1) + ")";
        const auto cells = io::split_csv_line(lines[i]);
        if (cells.size() == 1 && cells[0].empty()) {
            continue;
        }
        if (cells.size() != 4) {
            throw Error(ErrorCode::ParseError, "expected 4 cells " + where);
        }
        if (cells[0].empty() || cells[1].empty()) {
            throw Error(ErrorCode::ParseError, "empty series_id or model " + where);
        }
        const auto mae = io::parse_double(cells[2]);
        const auto mse = io::parse_double(cells[3]);
        if (!mae || !mse) {
            throw Error(ErrorCode::ParseError, "non-numeric metric " + where);
        }
        validate_metric(*mae, "mae", where);
        validate_metric(*mse, "mse", where);
        if (!seen.emplace(cells[0], cells[1]).second) {
            throw Error(ErrorCode::DuplicateMeasurement,
                        "duplicate measurement for (" + cells[0] + ", " + cells[1] + ") " + where);
        }
        log.push_back({cells[0], {cells[1], *mae, *mse}});
    }
    return log;
}

inline PerfLog read_perf_log(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    return read_perf_log(in);
}

inline void write_perf_log(std::ostream& out, const PerfLog& log) {
    out << kLogHeader << '\n';
    for (const auto& e : log) {
        out << e.series_id << ',' << e.record.model << ',' << io::format_double(e.record.mae) << ','
            << io::format_double(e.record.mse) << '\n';
    }
}

} // namespace aries::store
