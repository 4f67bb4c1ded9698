#pragma once

#include "aries/core/error.hpp"
#include "aries/store/property_vector.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace aries::recommend {

inline const std::vector<std::string>& strategy_vocabulary() {
    static const std::vector<std::string> v = {
        "RevIN",          "RevIN-like",           "Residual",       "Channel Interaction",
        "Decomposition(Moving Avg)", "Decomposition(Fourier method)", "DownSample", "Multi-Scale",
        "Patch",          "Channel Independency", "Channel Dependency", "Channel Embedding",
        "Timestamp Embedding", "Fourier method",  "Time-(in)variant", "Transformer backbone",
        "MLP backbone",   "MLP-only backbone",    "Foundation Model", "Only Season"};
    return v;
}

/// One granularity row: applies when the property's bin is in `bins`.
struct StrategyRule {
    store::Component property = store::Component::Trend;
    std::vector<std::uint8_t> bins;
    std::string granularity;
    std::vector<std::string> adopt;
    std::vector<std::string> avoid;
    /// Free-text guidance for rows that name no strategy.
    std::string note;

    bool operator==(const StrategyRule&) const = default;
};

struct StrategyMap {
    std::string version;
    std::vector<StrategyRule> rules;

    bool operator==(const StrategyMap&) const = default;

    std::vector<const StrategyRule*> matching(store::Component property, std::uint8_t bin) const {
        std::vector<const StrategyRule*> out;
        for (const auto& r : rules) {
            if (r.property == property && std::find(r.bins.begin(), r.bins.end(), bin) != r.bins.end()) {
                out.push_back(&r);
            }
        }
        return out;
    }

    void validate() const {
        const auto& vocab = strategy_vocabulary();
        const std::set<std::string> known(vocab.begin(), vocab.end());
        for (const auto& r : rules) {
            for (const auto* list : {&r.adopt, &r.avoid}) {
                for (const auto& s : *list) {
                    if (!known.contains(s)) {
                        throw Error(ErrorCode::Schema, "strategy '" + s + "' is not in the vocabulary");
                    }
                }
            }
            const auto n = store::kComponentBins[static_cast<std::size_t>(r.property)];
            for (auto b : r.bins) {
                if (b >= n) {
                    throw Error(ErrorCode::Schema, "rule '" + r.granularity + "' has out-of-range bin");
                }
            }
        }
    }
};

/// Relation between property bins and modeling strategies. Trend and
/// seasonality share the "General" row, which applies whenever either
/// pattern is present.
inline const StrategyMap& default_strategy_map() {
    using store::Component;
    static const StrategyMap m{
        "aries.strategy-map/1",
        {
            {Component::Stationarity, {0}, "Stationary", {}, {}, "Unlearnable"},
            {Component::Stationarity, {1}, "Non-stationary", {}, {}, "All deep forecasting models"},
            {Component::Trend, {1, 2, 3}, "General", {"RevIN", "RevIN-like", "Channel Interaction"}, {}, ""},
            {Component::Trend,
             {3},
             "Strong Trend",
             {"Decomposition(Fourier method)", "Transformer backbone"},
             {"Decomposition(Moving Avg)", "MLP-only backbone", "Foundation Model"},
             ""},
            {Component::SeasonCount, {1, 2}, "General", {"RevIN", "RevIN-like", "Channel Interaction"}, {}, ""},
            {Component::SeasonStrength,
             {3},
             "Strong Seasonality",
             {"Decomposition(Moving Avg)", "Only Season", "Residual"},
             {"Decomposition(Fourier method)"},
             ""},
            {Component::SeasonCount,
             {2},
             "Multi-season",
             {"Decomposition(Moving Avg)", "Only Season", "Residual"},
             {"Decomposition(Fourier method)"},
             ""},
            {Component::Volatility, {0}, "Low Volatility", {}, {}, "Difficult to learn"},
            {Component::Volatility,
             {1, 2, 3},
             "High Volatility",
             {"Timestamp Embedding", "Fourier method", "RevIN"},
             {"Channel Embedding", "Foundation Model"},
             ""},
            {Component::Memory,
             {0, 1, 2, 3},
             "General",
             {"RevIN", "RevIN-like", "Channel Independency", "Channel Interaction"},
             {"Channel Dependency"},
             ""},
            {Component::Memory, {0, 1}, "Short-term dependence", {"DownSample", "Multi-Scale", "Patch", "MLP backbone"}, {}, ""},
            {Component::Memory, {2, 3}, "Long-term dependence", {"Transformer backbone"}, {"MLP-only backbone"}, ""},
            {Component::Scedasticity, {0}, "Homo-scedasticity", {"Time-(in)variant"}, {"Residual"}, ""},
            {Component::Scedasticity, {1}, "Hetero-scedasticity", {"RevIN", "Residual"}, {"Time-(in)variant"}, ""},
            {Component::Anomaly,
             {0, 1},
             "Low anomaly",
             {"DownSample", "Fourier method", "Patch"},
             {"MLP-only backbone"},
             ""},
            {Component::Anomaly, {2, 3}, "High anomaly", {"RevIN", "RevIN-like", "Residual"}, {}, ""},
        }};
    return m;
}

inline nlohmann::json to_json(const StrategyMap& m) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : m.rules) {
        nlohmann::json j{{"property", store::component_name(r.property)},
                         {"bins", r.bins},
                         {"granularity", r.granularity},
                         {"adopt", r.adopt},
                         {"avoid", r.avoid}};
        if (!r.note.empty()) {
            j["note"] = r.note;
        }
        rules.push_back(std::move(j));
    }
    return nlohmann::json{{"version", m.version}, {"vocabulary", strategy_vocabulary()}, {"rules", rules}};
}

inline StrategyMap strategy_map_from_json(const nlohmann::json& j) {
    try {
        StrategyMap m;
        m.version = j.at("version").get<std::string>();
        for (const auto& jr : j.at("rules")) {
            StrategyRule r;
            r.property = store::parse_component(jr.at("property").get<std::string>());
            r.bins = jr.at("bins").get<std::vector<std::uint8_t>>();
            r.granularity = jr.at("granularity").get<std::string>();
            r.adopt = jr.at("adopt").get<std::vector<std::string>>();
            r.avoid = jr.at("avoid").get<std::vector<std::string>>();
            r.note = jr.value("note", std::string{});
            m.rules.push_back(std::move(r));
        }
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Schema, std::string("malformed strategy map: ") + e.what());
    }
}

} // namespace aries::recommend
