#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/property_vector.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace aries::store {

/// All records logged for one series, sorted by model name.
struct Bag {
    std::string series_id;
    std::vector<PerfRecord> records;

    bool operator==(const Bag&) const = default;
};

struct MeanPerf {
    double mae = 0.0;
    double mse = 0.0;
    std::size_t count = 0;

    bool operator==(const MeanPerf&) const = default;
};

inline constexpr const char* kStoreSchema = "aries.store";
inline constexpr int kStoreVersion = 1;

struct Store {
    std::map<PropertyVector, std::vector<Bag>> index;
    std::set<std::string> model_universe;
    std::string config_hash;
    std::size_t excluded_stationary = 0;
    /// Per-model mean over every logged series, stationary ones included.
    std::optional<std::map<std::string, MeanPerf>> regular;

    bool empty() const { return index.empty(); }

    std::size_t bag_count() const {
        std::size_t n = 0;
        for (const auto& [key, bags] : index) {
            n += bags.size();
        }
        return n;
    }

    bool operator==(const Store&) const = default;
};

/// Groups the log by series, keys each non-stationary series by its binned
/// profile and tallies the stationary ones. Bags within a key are ordered
/// by series id so the result does not depend on input order.
inline Store build_store(const std::map<std::string, props::PropertyProfile>& profiles, const PerfLog& log,
                         std::string config_hash = {}) {
    std::map<std::string, std::vector<PerfRecord>> by_series;
    for (const auto& e : log) {
        if (!profiles.contains(e.series_id)) {
            throw Error(ErrorCode::MissingProfile, "no profile for logged series '" + e.series_id + "'");
        }
        by_series[e.series_id].push_back(e.record);
    }
    Store st;
    st.config_hash = std::move(config_hash);
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> regular;
    for (auto& [id, records] : by_series) {
        std::sort(records.begin(), records.end(),
                  [](const PerfRecord& a, const PerfRecord& b) { return a.model < b.model; });
        for (const auto& r : records) {
            st.model_universe.insert(r.model);
            regular[r.model].first.push_back(r.mae);
            regular[r.model].second.push_back(r.mse);
        }
        const auto& p = profiles.at(id);
        if (p.is_stationary) {
            ++st.excluded_stationary;
            continue;
        }
        st.index[bin_profile(p)].push_back(Bag{id, records});
    }
    std::map<std::string, MeanPerf> reg;
    for (auto& [model, values] : regular) {
        std::sort(values.first.begin(), values.first.end());
        std::sort(values.second.begin(), values.second.end());
        MeanPerf m;
        for (double v : values.first) {
            m.mae += v;
        }
        for (double v : values.second) {
            m.mse += v;
        }
        m.count = values.first.size();
        m.mae /= static_cast<double>(m.count);
        m.mse /= static_cast<double>(m.count);
        reg[model] = m;
    }
    if (!reg.empty()) {
        st.regular = std::move(reg);
    }
    return st;
}

inline Store build_store(const std::vector<props::PropertyProfile>& profiles, const PerfLog& log,
                         std::string config_hash = {}) {
    std::map<std::string, props::PropertyProfile> by_id;
    for (const auto& p : profiles) {
        by_id.emplace(p.id, p);
    }
    return build_store(by_id, log, std::move(config_hash));
}

inline nlohmann::json to_json(const Store& st) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, bags] : st.index) {
        nlohmann::json jb = nlohmann::json::array();
        for (const auto& bag : bags) {
            nlohmann::json recs = nlohmann::json::array();
            for (const auto& r : bag.records) {
                recs.push_back({{"model", r.model}, {"mae", r.mae}, {"mse", r.mse}});
            }
            jb.push_back({{"series_id", bag.series_id}, {"records", recs}});
        }
        entries.push_back({{"key", key.to_ints()}, {"bags", jb}});
    }
    nlohmann::json j{{"schema", kStoreSchema},
                     {"version", kStoreVersion},
                     {"config_hash", st.config_hash},
                     {"component_order", nlohmann::json::array()},
                     {"model_universe", st.model_universe},
                     {"excluded_stationary", st.excluded_stationary},
                     {"entries", entries}};
    for (Component c : kAllComponents) {
        j["component_order"].push_back(component_name(c));
    }
    if (st.regular) {
        nlohmann::json reg = nlohmann::json::object();
        for (const auto& [model, m] : *st.regular) {
            reg[model] = {{"mae", m.mae}, {"mse", m.mse}, {"count", m.count}};
        }
        j["regular"] = reg;
    }
    return j;
}

inline Store store_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema").get<std::string>() != kStoreSchema) {
            throw Error(ErrorCode::Schema, "not a store file (schema '" + j.at("schema").get<std::string>() + "')");
        }
        const int version = j.at("version").get<int>();
        if (version < 1 || version > kStoreVersion) {
            throw Error(ErrorCode::Schema, "unsupported store version " + std::to_string(version));
        }
        Store st;
        st.config_hash = j.at("config_hash").get<std::string>();
        st.excluded_stationary = j.at("excluded_stationary").get<std::size_t>();
        for (const auto& m : j.at("model_universe")) {
            st.model_universe.insert(m.get<std::string>());
        }
        for (const auto& e : j.at("entries")) {
            const PropertyVector key = PropertyVector::from_ints(e.at("key").get<std::vector<int>>());
            auto& bags = st.index[key];
            for (const auto& jb : e.at("bags")) {
                Bag bag{jb.at("series_id").get<std::string>(), {}};
                for (const auto& r : jb.at("records")) {
                    PerfRecord rec{r.at("model").get<std::string>(), r.at("mae").get<double>(),
                                   r.at("mse").get<double>()};
                    if (!st.model_universe.contains(rec.model)) {
                        throw Error(ErrorCode::Schema, "record model '" + rec.model + "' not in model_universe");
                    }
                    validate_metric(rec.mae, "mae", "in store");
                    validate_metric(rec.mse, "mse", "in store");
                    bag.records.push_back(std::move(rec));
                }
                if (bag.records.empty()) {
                    throw Error(ErrorCode::Schema, "empty bag for series '" + bag.series_id + "'");
                }
                bags.push_back(std::move(bag));
            }
        }
        if (j.contains("regular")) {
            std::map<std::string, MeanPerf> reg;
            for (const auto& [model, m] : j.at("regular").items()) {
                reg[model] = MeanPerf{m.at("mae").get<double>(), m.at("mse").get<double>(),
                                      m.at("count").get<std::size_t>()};
            }
            st.regular = std::move(reg);
        }
        return st;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Schema, std::string("malformed store: ") + e.what());
    }
}

inline void save_store(const std::filesystem::path& path, const Store& st) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    out << to_json(st).dump(1) << '\n';
}

inline Store load_store(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "store '" + path.string() + "': " + e.what());
    }
    return store_from_json(j);
}

} // namespace aries::store
