#pragma once

#include "aries/core/io.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/series.hpp"
#include "aries/properties/arch.hpp"
#include "aries/properties/hurst.hpp"
#include "aries/properties/measures.hpp"
#include "aries/properties/mstl.hpp"
#include "aries/properties/seasonality.hpp"
#include "aries/properties/stationarity.hpp"
#include "aries/properties/trend.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace aries::props {

inline constexpr std::size_t kMinProfileLength = 64;

struct ProfileConfig {
    SeasonDetectionConfig seasons;
    MstlConfig mstl;
    /// ARCH-LM lag order; default min(12, floor(L/20)).
    std::optional<std::size_t> arch_lags;

    nlohmann::json to_json() const {
        return nlohmann::json{{"schema", "aries.profile-config/1"},
                              {"max_candidates", seasons.max_candidates},
                              {"sampling_freq", seasons.sampling_freq},
                              {"min_acf", seasons.min_acf},
                              {"seasonal_span", mstl.stl.seasonal_span},
                              {"seasonal_span_step", mstl.seasonal_span_step},
                              {"inner_iterations", mstl.stl.inner_iterations},
                              {"outer_iterations", mstl.outer_iterations},
                              {"arch_lags", arch_lags ? nlohmann::json(*arch_lags) : nlohmann::json("auto")},
                              {"hurst", "rs-dyadic-anis-lloyd"},
                              {"volatility", "cv-minmax"}};
    }

    std::string hash() const { return io::fnv1a_hex(to_json().dump()); }
};

/// The seven properties of one series, plus test diagnostics.
struct PropertyProfile {
    std::string id;
    std::size_t length = 0;
    bool is_stationary = false;
    double trend_strength = 0.0;
    std::vector<std::size_t> seasons;
    double season_strength = 0.0;
    double volatility = 0.0;
    double memory = 0.5;
    bool is_heteroscedastic = false;
    double anomaly_rate = 0.0;

    double adf_statistic = 0.0;
    double kpss_statistic = 0.0;
    double arch_p_value = 1.0;
    /// Degenerate paths taken, e.g. "adf_singular", "arch_singular".
    std::vector<std::string> flags;

    bool operator==(const PropertyProfile&) const = default;
};

inline void to_json(nlohmann::json& j, const PropertyProfile& p) {
    j = nlohmann::json{{"id", p.id},
                       {"length", p.length},
                       {"is_stationary", p.is_stationary},
                       {"trend_strength", p.trend_strength},
                       {"seasons", p.seasons},
                       {"season_strength", p.season_strength},
                       {"volatility", p.volatility},
                       {"memory", p.memory},
                       {"is_heteroscedastic", p.is_heteroscedastic},
                       {"anomaly_rate", p.anomaly_rate},
                       {"adf_statistic", p.adf_statistic},
                       {"kpss_statistic", p.kpss_statistic},
                       {"arch_p_value", p.arch_p_value},
                       {"flags", p.flags}};
}

inline void from_json(const nlohmann::json& j, PropertyProfile& p) {
    j.at("id").get_to(p.id);
    p.length = j.value("length", std::size_t{0});
    j.at("is_stationary").get_to(p.is_stationary);
    j.at("trend_strength").get_to(p.trend_strength);
    j.at("seasons").get_to(p.seasons);
    j.at("season_strength").get_to(p.season_strength);
    j.at("volatility").get_to(p.volatility);
    j.at("memory").get_to(p.memory);
    j.at("is_heteroscedastic").get_to(p.is_heteroscedastic);
    j.at("anomaly_rate").get_to(p.anomaly_rate);
    p.adf_statistic = j.value("adf_statistic", 0.0);
    p.kpss_statistic = j.value("kpss_statistic", 0.0);
    p.arch_p_value = j.value("arch_p_value", 1.0);
    p.flags = j.value("flags", std::vector<std::string>{});
}

/// Full property pass on one series. Deterministic in (values, config).
inline PropertyProfile profile(std::string id, std::span<const double> x, const ProfileConfig& cfg = {}) {
    if (x.size() < kMinProfileLength) {
        throw Error(ErrorCode::TooShort, "profiling '" + id + "' needs at least 64 observations, got " +
                                             std::to_string(x.size()));
    }
    PropertyProfile p;
    p.id = std::move(id);
    p.length = x.size();

    const StationarityResult st = stationarity(x);
    p.is_stationary = st.is_stationary;
    p.adf_statistic = st.adf.statistic;
    p.kpss_statistic = st.kpss.statistic;
    if (st.adf.singular) {
        p.flags.emplace_back("adf_singular");
    }
    if (st.kpss.constant_input) {
        p.flags.emplace_back("kpss_constant");
    }

    p.trend_strength = mann_kendall(x);
    p.seasons = detect_seasons(x, cfg.seasons);
    const Decomposition d = mstl_decompose(x, p.seasons, cfg.mstl);
    p.season_strength = season_strength(d);
    p.volatility = volatility_cv(x);

    const HurstEstimate h = hurst(x);
    p.memory = h.exponent;
    if (h.degenerate) {
        p.flags.emplace_back("hurst_degenerate");
    }

    const ArchLmResult arch = arch_lm_test(d.residual, cfg.arch_lags.value_or(default_arch_lags(x.size())));
    p.is_heteroscedastic = arch.is_heteroscedastic;
    p.arch_p_value = arch.p_value;
    if (arch.singular) {
        p.flags.emplace_back("arch_singular");
    }

    p.anomaly_rate = anomaly_rate(x);
    return p;
}

inline PropertyProfile profile(const TimeSeries& s, const ProfileConfig& cfg = {}) {
    return profile(s.id(), s.values(), cfg);
}

/// Which part of each series gets profiled.
struct SegmentSelector {
    /// When set, profile only the history preceding the first test value.
    std::optional<SplitSpec> history;

    std::span<const double> select(const TimeSeries& s) const {
        return history ? history_segment(s.values(), *history) : s.values();
    }
};

struct ProfileBatch {
    std::vector<PropertyProfile> profiles;
    /// Series that failed to profile: (id, message).
    std::vector<std::pair<std::string, std::string>> skipped;
};

/// Profiles every series (in parallel); output keeps input order.
inline ProfileBatch profile_set(const SeriesSet& set, const ProfileConfig& cfg = {}, const SegmentSelector& seg = {},
                                std::size_t threads = 1) {
    std::vector<std::optional<PropertyProfile>> slots(set.size());
    std::vector<std::string> errors(set.size());
    parallel_for(set.size(), threads, [&](std::size_t i) {
        try {
            slots[i] = profile(set[i].id(), seg.select(set[i]), cfg);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    ProfileBatch out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (slots[i]) {
            out.profiles.push_back(std::move(*slots[i]));
        } else {
            out.skipped.emplace_back(set[i].id(), errors[i]);
        }
    }
    return out;
}

inline void write_profiles_jsonl(std::ostream& out, const std::vector<PropertyProfile>& profiles,
                                 const std::string& config_hash) {
    for (const auto& p : profiles) {
        nlohmann::json j = p;
        j["config_hash"] = config_hash;
        out << j.dump() << '\n';
    }
}

inline std::vector<PropertyProfile> read_profiles_jsonl(std::istream& in, std::string* config_hash = nullptr) {
    std::vector<PropertyProfile> out;
    const auto lines = io::read_lines(in);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        try {
            const auto j = nlohmann::json::parse(lines[r]);
            out.push_back(j.get<PropertyProfile>());
            if (config_hash && j.contains("config_hash")) {
                *config_hash = j["config_hash"].get<std::string>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, "profile line " + std::to_string(r + 1) + ": " + e.what());
        }
    }
    return out;
}

} // namespace aries::props
