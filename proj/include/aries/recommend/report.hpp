#pragma once

#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/properties/profile.hpp"
#include "aries/recommend/metrics.hpp"
#include "aries/recommend/recommender.hpp"
#include "aries/recommend/strategy_map.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/store.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace aries::recommend {

using store::Component;

/// Wording for each bin as it appears under "Main properties".
inline std::string bin_description(Component c, std::uint8_t bin) {
    static const std::map<Component, std::vector<std::string>> text = {
        {Component::Stationarity, {"Stationary", "Non-stationary"}},
        {Component::Trend,
         {"No trend with strength of [0, 0.1]", "Medium-low trend with strength of (0.1, 0.5]",
          "Medium-high trend with strength of (0.5, 0.9]", "Strong trend with strength of (0.9, 1]"}},
        {Component::SeasonStrength,
         {"Weak seasonality with strength of [0, 0.25]", "Medium-low seasonality with strength of (0.25, 0.5]",
          "Medium-high seasonality with strength of (0.5, 0.75]", "Strong seasonality with strength of (0.75, 1]"}},
        {Component::SeasonCount, {"Non-seasonal", "Single season", "Multi season"}},
        {Component::Volatility,
         {"Low Volatility with value of [0, 0.4]", "Medium-low Volatility with value of (0.4, 0.6]",
          "Medium-high Volatility with value of (0.6, 0.8]", "High Volatility with value of > 0.8"}},
        {Component::Memory,
         {"Short-term/ Low Memory with value of [0, 0.25]",
          "Medium-Short-term/ Medium-Low Memory with value of (0.25, 0.5]",
          "Medium-Long-term/ Medium-High Memory with value of (0.5, 0.75]",
          "Long-term/ High Memory with value of (0.75, 1]"}},
        {Component::Scedasticity, {"Homo-scedasticity", "Hetero-scedasticity"}},
        {Component::Anomaly,
         {"Low Anomaly with value of [0, 0.05]", "Medium-low Anomaly with value of (0.05, 0.1]",
          "Medium-high Anomaly with value of (0.1, 0.15]", "High Anomaly with value of > 0.15"}},
    };
    return text.at(c).at(bin);
}

struct TopProperty {
    Component component = Component::Trend;
    std::uint8_t bin = 0;
    std::size_t count = 0;
    double percentage = 0.0;

    std::string label() const { return bin_description(component, bin); }
};

/// ratio = (query-conditioned mean MAE - Regular mean MAE) / Regular mean MAE;
/// negative means the model does better on data like the query.
struct ModelShift {
    std::string model;
    double ratio = 0.0;
};

struct ValidationRow {
    std::size_t k = 0;
    double hit_ratio_overall = 0.0;
    double ndcg_overall = 0.0;
    std::optional<double> hit_ratio_individual;
    std::optional<double> ndcg_individual;
};

struct Validation {
    std::vector<std::string> truth_top;
    std::vector<ValidationRow> rows;
};

struct RecommendationReport {
    std::vector<RankedModel> ranked_models;
    std::vector<TopProperty> top_properties;
    std::vector<std::string> strategies_adopt;
    std::vector<std::string> strategies_avoid;
    std::vector<std::string> property_notes;
    std::vector<ModelShift> preferred_models;
    std::vector<ModelShift> unsuitable_models;
    std::vector<std::string> notices;
    bool has_regular = false;

    std::size_t query_count = 0;
    std::size_t skipped_queries = 0;
    std::size_t stationary_queries = 0;
    std::size_t store_excluded_stationary = 0;
    double tau = 1.0;
    std::uint64_t seed = 0;
    std::string store_config_hash;
    std::string strategy_map_version;
    std::vector<GroupOutcome> groups;
    std::optional<Validation> validation;
};

/// Most frequent bin per dimension (lowest bin on ties) with its share of
/// all query series, ordered by share then component order.
inline std::vector<TopProperty> top_properties(std::span<const props::PropertyProfile> queries) {
    std::vector<TopProperty> out;
    if (queries.empty()) {
        return out;
    }
    std::vector<store::PropertyVector> vs;
    for (const auto& p : queries) {
        vs.push_back(store::bin_profile(p));
    }
    for (Component c : store::kAllComponents) {
        std::vector<std::size_t> counts(store::kComponentBins[static_cast<std::size_t>(c)], 0);
        for (const auto& v : vs) {
            ++counts[v[c]];
        }
        const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
        TopProperty t{c, static_cast<std::uint8_t>(best), counts[static_cast<std::size_t>(best)], 0.0};
        t.percentage = 100.0 * static_cast<double>(t.count) / static_cast<double>(vs.size());
        out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TopProperty& a, const TopProperty& b) { return a.percentage > b.percentage; });
    return out;
}

inline constexpr std::size_t kMaxModelShifts = 5;

inline RecommendationReport interpret(std::span<const props::PropertyProfile> queries, const Recommendation& rec,
                                      const std::optional<std::map<std::string, store::MeanPerf>>& regular,
                                      const StrategyMap& map = default_strategy_map()) {
    if (queries.empty()) {
        throw Error(ErrorCode::EmptyInput, "no query profiles to interpret");
    }
    RecommendationReport r;
    r.ranked_models = rec.ranking;
    r.query_count = rec.query_count;
    r.stationary_queries = rec.stationary_queries;
    r.groups = rec.groups;
    r.strategy_map_version = map.version;
    r.top_properties = top_properties(queries);

    std::set<std::string> seen_adopt;
    std::set<std::string> seen_avoid;
    for (const auto& t : r.top_properties) {
        for (const StrategyRule* rule : map.matching(t.component, t.bin)) {
            for (const auto& s : rule->adopt) {
                if (seen_adopt.insert(s).second) {
                    r.strategies_adopt.push_back(s);
                }
            }
            for (const auto& s : rule->avoid) {
                if (seen_avoid.insert(s).second) {
                    r.strategies_avoid.push_back(s);
                }
            }
            if (!rule->note.empty()) {
                r.property_notes.push_back(rule->granularity + ": " + rule->note);
            }
        }
    }

    r.has_regular = regular.has_value();
    if (!regular) {
        r.notices.emplace_back("store has no Regular table; model preferences omitted");
    } else if (!rec.ranking.empty()) {
        std::vector<ModelShift> shifts;
        for (const auto& m : rec.ranking) {
            auto it = regular->find(m.model);
            if (it == regular->end() || !(it->second.mae > 0.0)) {
                continue;
            }
            shifts.push_back({m.model, (m.mae - it->second.mae) / it->second.mae});
        }
        // Upper and lower halves stay disjoint; a lone model appears in both.
        const std::size_t n = std::min(kMaxModelShifts, (shifts.size() + 1) / 2);
        const std::size_t n_worst = shifts.size() == 1 ? 1 : std::min(kMaxModelShifts, shifts.size() / 2);
        auto by_ratio = [](const ModelShift& a, const ModelShift& b) {
            return a.ratio != b.ratio ? a.ratio < b.ratio : a.model < b.model;
        };
        std::sort(shifts.begin(), shifts.end(), by_ratio);
        r.preferred_models.assign(shifts.begin(), shifts.begin() + static_cast<std::ptrdiff_t>(n));
        std::sort(shifts.begin(), shifts.end(), [&](const ModelShift& a, const ModelShift& b) {
            return a.ratio != b.ratio ? a.ratio > b.ratio : a.model < b.model;
        });
        r.unsuitable_models.assign(shifts.begin(), shifts.begin() + static_cast<std::ptrdiff_t>(n_worst));
    }
    if (rec.ranking.empty()) {
        r.notices.emplace_back("every query was stationary; no models retrieved");
    }
    return r;
}

/// Overall metrics compare the report ranking with the truth log restricted
/// to the retrieved (non-stationary) queries. Individual metrics compare
/// each group's ranking with the truth over that group's series, averaged
/// with group weights.
inline Validation validate(const RecommendationReport& r, const store::PerfLog& truth,
                           const std::vector<std::size_t>& ks) {
    std::vector<std::string> retrieved;
    for (const auto& g : r.groups) {
        if (!g.excluded) {
            retrieved.insert(retrieved.end(), g.group.series_ids.begin(), g.group.series_ids.end());
        }
    }
    Validation v;
    const auto overall_truth = model_names(rank_log(truth, retrieved));
    const auto overall_rec = model_names(r.ranked_models);
    v.truth_top.assign(overall_truth.begin(), overall_truth.begin() + std::min<std::ptrdiff_t>(10, overall_truth.size()));
    for (std::size_t k : ks) {
        ValidationRow row;
        row.k = k;
        row.hit_ratio_overall = hit_ratio_at_k(overall_rec, overall_truth, k);
        row.ndcg_overall = ndcg_at_k(overall_rec, overall_truth, k);
        double hr = 0.0;
        double nd = 0.0;
        double w = 0.0;
        for (const auto& g : r.groups) {
            if (g.excluded) {
                continue;
            }
            const auto t = model_names(rank_log(truth, g.group.series_ids));
            if (t.empty()) {
                continue;
            }
            const auto rec = model_names(g.ranking);
            const auto gw = static_cast<double>(g.group.weight);
            hr += gw * hit_ratio_at_k(rec, t, k);
            nd += gw * ndcg_at_k(rec, t, k);
            w += gw;
        }
        if (w > 0.0) {
            row.hit_ratio_individual = hr / w;
            row.ndcg_individual = nd / w;
        }
        v.rows.push_back(row);
    }
    return v;
}

struct RecommendInput {
    props::ProfileConfig profile;
    props::SegmentSelector segment;
    RecommendConfig sampling;
};

struct RecommendRun {
    std::vector<props::PropertyProfile> profiles;
    Recommendation recommendation;
    RecommendationReport report;
};

/// Profiles the query series, then retrieves, ranks and interprets. Series
/// that fail to profile are skipped and tallied.
inline RecommendRun recommend(const store::Store& st, const SeriesSet& queries, const RecommendInput& in,
                              const StrategyMap& map = default_strategy_map()) {
    if (st.empty()) {
        throw Error(ErrorCode::EmptyStore, "store index is empty");
    }
    auto batch = props::profile_set(queries, in.profile, in.segment, in.sampling.threads);
    if (batch.profiles.empty()) {
        throw Error(ErrorCode::EmptyInput, "no query series could be profiled");
    }
    RecommendRun run;
    run.profiles = std::move(batch.profiles);
    run.recommendation = recommend_profiles(st, run.profiles, in.sampling);
    run.report = interpret(run.profiles, run.recommendation, st.regular, map);
    run.report.skipped_queries = batch.skipped.size();
    run.report.tau = in.sampling.tau;
    run.report.seed = in.sampling.seed;
    run.report.store_config_hash = st.config_hash;
    run.report.store_excluded_stationary = st.excluded_stationary;
    return run;
}

/// Two decimals with trailing zeros dropped: 100%, 62.4%, 99.58%.
inline std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s = buf;
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') {
        s.pop_back();
    }
    return s + "%";
}

inline std::string metric3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? sep : "") + items[i];
    }
    return out;
}

inline void write_report_text(std::ostream& out, const RecommendationReport& r) {
    out << "Interpretability Suggestions:\n";
    out << "  Main properties:\n";
    for (const auto& t : r.top_properties) {
        out << "    " << percent(t.percentage) << ' ' << t.label() << '\n';
    }
    for (const auto& n : r.property_notes) {
        out << "    (" << n << ")\n";
    }
    out << "  Strategies that can be adopted:\n    " << join(r.strategies_adopt) << '\n';
    out << "  Strategies to be avoided:\n    " << join(r.strategies_avoid) << '\n';
    auto shifts = [](const std::vector<ModelShift>& v) {
        std::vector<std::string> s;
        for (const auto& m : v) {
            s.push_back(m.model + " (" + (m.ratio <= 0 ? "" : "+") + metric3(100.0 * m.ratio) + "% MAE vs Regular)");
        }
        return join(s);
    };
    if (r.has_regular) {
        out << "  Models with potential preferences: " << shifts(r.preferred_models) << '\n';
        out << "  Potentially unsuitable Models: " << shifts(r.unsuitable_models) << '\n';
    }
    for (const auto& n : r.notices) {
        out << "  Notice: " << n << '\n';
    }
    out << "Top 10 Recommended Models:\n";
    std::vector<std::string> top;
    for (std::size_t i = 0; i < r.ranked_models.size() && i < 10; ++i) {
        const auto& m = r.ranked_models[i];
        top.push_back(m.model);
    }
    out << "  " << join(top) << '\n';
    for (std::size_t i = 0; i < r.ranked_models.size() && i < 10; ++i) {
        const auto& m = r.ranked_models[i];
        out << "    " << (i + 1) << ". " << m.model << "  mean MAE " << io::format_double(m.mae) << "  mean MSE "
            << io::format_double(m.mse) << '\n';
    }
    out << "Validation:\n";
    if (!r.validation) {
        out << "  no truth log supplied\n";
    } else {
        out << "  The 10 Best Models for Real:\n    " << join(r.validation->truth_top) << '\n';
        for (const auto& row : r.validation->rows) {
            out << "  ";
            if (row.hit_ratio_individual) {
                out << "Hit Ratio@" << row.k << "_i: " << metric3(*row.hit_ratio_individual) << "  NDCG@" << row.k
                    << "_i: " << metric3(*row.ndcg_individual) << "  ";
            }
            out << "Hit Ratio@" << row.k << "_o: " << metric3(row.hit_ratio_overall) << "  NDCG@" << row.k
                << "_o: " << metric3(row.ndcg_overall) << '\n';
        }
    }
    out << "Queries: " << r.query_count << " profiled, " << r.skipped_queries << " skipped, "
        << r.stationary_queries << " stationary (not retrieved); tau " << io::format_double(r.tau) << ", seed "
        << r.seed << '\n';
    out << "Ranking uses mean MAE (ties: mean MSE, then name); NDCG relevance is k minus the 0-based truth rank.\n";
}

inline nlohmann::json to_json(const RecommendationReport& r) {
    using nlohmann::json;
    json ranked = json::array();
    for (const auto& m : r.ranked_models) {
        ranked.push_back({{"model", m.model}, {"mae", m.mae}, {"mse", m.mse}, {"count", m.count}});
    }
    json props = json::array();
    for (const auto& t : r.top_properties) {
        props.push_back({{"property", store::component_name(t.component)},
                         {"bin", t.bin},
                         {"label", t.label()},
                         {"count", t.count},
                         {"percentage", t.percentage}});
    }
    auto shifts = [](const std::vector<ModelShift>& v) {
        json a = json::array();
        for (const auto& m : v) {
            a.push_back({{"model", m.model}, {"ratio", m.ratio}});
        }
        return a;
    };
    json groups = json::array();
    for (const auto& g : r.groups) {
        json jg{{"key", g.group.vector.to_ints()}, {"weight", g.group.weight}, {"excluded", g.excluded}};
        if (!g.excluded) {
            jg["nearest"] = g.neighbor.key.to_ints();
            jg["distance"] = g.neighbor.distance;
            jg["sampled"] = g.sample_count;
        }
        groups.push_back(std::move(jg));
    }
    json j{{"schema", "aries.report"},
           {"version", 1},
           {"ranked_models", ranked},
           {"top_properties", props},
           {"strategies_adopt", r.strategies_adopt},
           {"strategies_avoid", r.strategies_avoid},
           {"property_notes", r.property_notes},
           {"notices", r.notices},
           {"query_count", r.query_count},
           {"skipped_queries", r.skipped_queries},
           {"stationary_queries", r.stationary_queries},
           {"store_excluded_stationary", r.store_excluded_stationary},
           {"sampling", {{"tau", r.tau}, {"seed", r.seed}}},
           {"store_config_hash", r.store_config_hash},
           {"strategy_map_version", r.strategy_map_version},
           {"ranking_metric", "mean MAE, ties by mean MSE then name"},
           {"ndcg_relevance", "k - truth_rank (0-based) within truth top-k"},
           {"groups", groups}};
    if (r.has_regular) {
        j["preferred_models"] = shifts(r.preferred_models);
        j["unsuitable_models"] = shifts(r.unsuitable_models);
    }
    if (r.validation) {
        json rows = json::array();
        for (const auto& row : r.validation->rows) {
            json jr{{"k", row.k}, {"hit_ratio_o", row.hit_ratio_overall}, {"ndcg_o", row.ndcg_overall}};
            if (row.hit_ratio_individual) {
                jr["hit_ratio_i"] = *row.hit_ratio_individual;
                jr["ndcg_i"] = *row.ndcg_individual;
            }
            rows.push_back(std::move(jr));
        }
        j["validation"] = {{"truth_top", r.validation->truth_top}, {"metrics", rows}};
    }
    return j;
}

} // namespace aries::recommend
