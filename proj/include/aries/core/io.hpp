#pragma once

#include "aries/core/error.hpp"
#include "aries/core/series.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace aries::io {

enum class CsvLayout { Wide, Long };

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

inline std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        first = false;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            lines.push_back(std::move(line));
        }
    }
    return lines;
}

namespace detail {

inline Error parse_error(std::size_t data_row, std::size_t column, std::size_t line, const std::string& cell) {
    return Error(ErrorCode::ParseError, "non-numeric cell '" + cell + "' at row " + std::to_string(data_row) +
                                            ", column " + std::to_string(column) + " (line " +
                                            std::to_string(line) + ")");
}

inline bool all_non_numeric(const std::vector<std::string>& cells) {
    for (const auto& c : cells) {
        if (parse_double(c)) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Rows are timestamps. Wide: one series per column, header row optional
/// (a first line whose cells are all non-numeric). Long: rows `id,value`,
/// grouped by id in first-appearance order.
inline SeriesSet read_csv(std::istream& in, CsvLayout layout = CsvLayout::Wide) {
    const std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) {
        throw Error(ErrorCode::EmptyInput, "CSV input has no rows");
    }
    const std::vector<std::string> first = split_csv_line(lines.front());
    bool has_header = false;
    if (layout == CsvLayout::Wide) {
        has_header = detail::all_non_numeric(first);
    } else {
        has_header = first.size() >= 2 && !parse_double(first[1]);
    }
    const std::size_t start = has_header ? 1 : 0;
    if (lines.size() <= start) {
        throw Error(ErrorCode::EmptyInput, "CSV input has a header but no data rows");
    }

    SeriesSet set;
    if (layout == CsvLayout::Wide) {
        const std::size_t ncol = first.size();
        std::vector<std::string> names(ncol);
        for (std::size_t j = 0; j < ncol; ++j) {
            names[j] = has_header ? first[j] : "col" + std::to_string(j);
        }
        std::vector<std::vector<double>> columns(ncol);
        for (std::size_t r = start; r < lines.size(); ++r) {
            const auto cells = split_csv_line(lines[r]);
            if (cells.size() != ncol) {
                throw Error(ErrorCode::ParseError, "row " + std::to_string(r - start + 1) + " has " +
                                                       std::to_string(cells.size()) + " cells, expected " +
                                                       std::to_string(ncol));
            }
            for (std::size_t j = 0; j < ncol; ++j) {
                const auto v = parse_double(cells[j]);
                if (!v || !std::isfinite(*v)) {
                    throw detail::parse_error(r - start + 1, j + 1, r + 1, cells[j]);
                }
                columns[j].push_back(*v);
            }
        }
        for (std::size_t j = 0; j < ncol; ++j) {
            set.add(TimeSeries(names[j], std::move(columns[j])));
        }
        return set;
    }

    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> groups;
    for (std::size_t r = start; r < lines.size(); ++r) {
        const auto cells = split_csv_line(lines[r]);
        if (cells.size() < 2) {
            throw Error(ErrorCode::ParseError, "row " + std::to_string(r - start + 1) + " needs id,value");
        }
        const auto v = parse_double(cells[1]);
        if (!v || !std::isfinite(*v)) {
            throw detail::parse_error(r - start + 1, 2, r + 1, cells[1]);
        }
        auto [it, inserted] = groups.try_emplace(cells[0]);
        if (inserted) {
            order.push_back(cells[0]);
        }
        it->second.push_back(*v);
    }
    for (const auto& id : order) {
        set.add(TimeSeries(id, std::move(groups[id])));
    }
    return set;
}

/// One JSON object per line: {"id": string, "values": [numbers]}.
inline SeriesSet read_jsonl(std::istream& in) {
    const std::vector<std::string> lines = read_lines(in);
    if (lines.empty()) {
        throw Error(ErrorCode::EmptyInput, "JSONL input has no rows");
    }
    SeriesSet set;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        try {
            const auto obj = nlohmann::json::parse(lines[r]);
            set.add(TimeSeries(obj.at("id").get<std::string>(), obj.at("values").get<std::vector<double>>()));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(r + 1) + ": " + e.what());
        }
    }
    return set;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    return in;
}

inline bool has_jsonl_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return ext == ".jsonl" || ext == ".ndjson";
}

/// Reads a series file; `.jsonl` selects the JSONL format, anything else CSV.
inline SeriesSet load_series(const std::filesystem::path& path, CsvLayout layout = CsvLayout::Wide) {
    auto in = open_input(path);
    return has_jsonl_extension(path) ? read_jsonl(in) : read_csv(in, layout);
}

inline SeriesSet load_csv(const std::filesystem::path& path, CsvLayout layout = CsvLayout::Wide) {
    auto in = open_input(path);
    return read_csv(in, layout);
}

inline void write_csv_wide(std::ostream& out, const SeriesSet& set) {
    if (set.empty()) {
        throw Error(ErrorCode::EmptyInput, "nothing to write");
    }
    const std::size_t len = set[0].size();
    for (std::size_t j = 0; j < set.size(); ++j) {
        if (set[j].size() != len) {
            throw Error(ErrorCode::InvalidArgument, "wide CSV needs equal-length series; use JSONL instead");
        }
        out << (j ? "," : "") << set[j].id();
    }
    out << '\n';
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            out << (j ? "," : "") << format_double(set[j][i]);
        }
        out << '\n';
    }
}

inline void write_jsonl(std::ostream& out, const SeriesSet& set) {
    for (const auto& s : set) {
        nlohmann::json obj;
        obj["id"] = s.id();
        obj["values"] = std::vector<double>(s.values().begin(), s.values().end());
        out << obj.dump() << '\n';
    }
}

inline void save_series(const std::filesystem::path& path, const SeriesSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    if (has_jsonl_extension(path)) {
        write_jsonl(out, set);
    } else {
        write_csv_wide(out, set);
    }
}

/// 64-bit FNV-1a, rendered as 16 hex digits. Used for config fingerprints.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

} // namespace aries::io
