#pragma once

#include "aries/core/error.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/random.hpp"
#include "aries/properties/profile.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/property_vector.hpp"
#include "aries/store/store.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aries::recommend {

using store::Bag;
using store::PropertyVector;

struct QueryGroup {
    PropertyVector vector;
    std::size_t weight = 0;
    std::vector<std::string> series_ids;

    bool stationary() const { return vector[store::Component::Stationarity] == 0; }
};

/// Bins every profile and counts identical vectors. Groups come out in key
/// order; stationary groups are kept (and flagged by their key).
inline std::vector<QueryGroup> group_queries(std::span<const props::PropertyProfile> profiles) {
    std::map<PropertyVector, QueryGroup> groups;
    for (const auto& p : profiles) {
        const PropertyVector v = store::bin_profile(p);
        auto& g = groups[v];
        g.vector = v;
        ++g.weight;
        g.series_ids.push_back(p.id);
    }
    std::vector<QueryGroup> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) {
        out.push_back(std::move(g));
    }
    return out;
}

struct Neighbor {
    PropertyVector key;
    int distance = 0;
};

/// Exact key when present, otherwise the L1-nearest stored key; ties go to
/// the lexicographically smallest key.
inline Neighbor nearest_key(const store::Store& st, const PropertyVector& q) {
    if (st.empty()) {
        throw Error(ErrorCode::EmptyStore, "store index is empty");
    }
    if (st.index.contains(q)) {
        return {q, 0};
    }
    Neighbor best{st.index.begin()->first, store::l1_distance(st.index.begin()->first, q)};
    for (const auto& [key, bags] : st.index) {
        const int d = store::l1_distance(key, q);
        if (d < best.distance) {
            best = {key, d};
        }
    }
    return best;
}

/// ceil(tau * weight), at least 1. A relative slack of 1e-9 absorbs
/// products such as 0.7 * 10 = 7.000000000000001.
inline std::size_t sample_count(double tau, std::size_t weight) {
    const double raw = tau * static_cast<double>(weight);
    const auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::max<std::size_t>(n, 1);
}

/// Draws `count` bags at `key` uniformly with replacement.
inline std::vector<const Bag*> sample_values(const store::Store& st, const PropertyVector& key, std::size_t count,
                                             Rng& rng) {
    auto it = st.index.find(key);
    if (it == st.index.end() || it->second.empty()) {
        throw Error(ErrorCode::InvalidArgument, "key " + key.to_string() + " not in store");
    }
    if (count == 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
    }
    const auto& bags = it->second;
    std::uniform_int_distribution<std::size_t> pick(0, bags.size() - 1);
    std::vector<const Bag*> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(&bags[pick(rng)]);
    }
    return out;
}

struct RankedModel {
    std::string model;
    double mae = 0.0;
    double mse = 0.0;
    std::size_t count = 0;

    bool operator==(const RankedModel&) const = default;
};

/// Ascending by mean MAE, then mean MSE, then name.
inline void sort_ranking(std::vector<RankedModel>& r) {
    std::sort(r.begin(), r.end(), [](const RankedModel& a, const RankedModel& b) {
        if (a.mae != b.mae) {
            return a.mae < b.mae;
        }
        if (a.mse != b.mse) {
            return a.mse < b.mse;
        }
        return a.model < b.model;
    });
}

namespace detail {

struct Accumulator {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> values;

    void add(const store::PerfRecord& r) {
        auto& v = values[r.model];
        v.first.push_back(r.mae);
        v.second.push_back(r.mse);
    }

    /// Values are summed in sorted order so the result is independent of
    /// the order bags were drawn in.
    std::vector<RankedModel> finish() {
        std::vector<RankedModel> out;
        for (auto& [model, v] : values) {
            std::sort(v.first.begin(), v.first.end());
            std::sort(v.second.begin(), v.second.end());
            double mae = 0.0;
            double mse = 0.0;
            for (double x : v.first) {
                mae += x;
            }
            for (double x : v.second) {
                mse += x;
            }
            const auto n = static_cast<double>(v.first.size());
            out.push_back({model, mae / n, mse / n, v.first.size()});
        }
        sort_ranking(out);
        return out;
    }
};

} // namespace detail

/// Per-model mean over every measurement in the sampled bags.
inline std::vector<RankedModel> rank_models(std::span<const Bag* const> bags) {
    detail::Accumulator acc;
    for (const Bag* b : bags) {
        for (const auto& r : b->records) {
            acc.add(r);
        }
    }
    return acc.finish();
}

inline std::vector<RankedModel> rank_models(std::span<const Bag> bags) {
    std::vector<const Bag*> ptrs;
    for (const auto& b : bags) {
        ptrs.push_back(&b);
    }
    return rank_models(ptrs);
}

/// Ranking of a raw performance log restricted to `series` (all when empty).
inline std::vector<RankedModel> rank_log(const store::PerfLog& log, std::span<const std::string> series = {}) {
    std::set<std::string> keep(series.begin(), series.end());
    detail::Accumulator acc;
    for (const auto& e : log) {
        if (keep.empty() || keep.contains(e.series_id)) {
            acc.add(e.record);
        }
    }
    return acc.finish();
}

inline std::vector<std::string> model_names(const std::vector<RankedModel>& r) {
    std::vector<std::string> out;
    for (const auto& m : r) {
        out.push_back(m.model);
    }
    return out;
}

struct RecommendConfig {
    /// Sampling rate in (0, 1].
    double tau = 1.0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    void validate() const {
        if (!(tau > 0.0) || tau > 1.0) {
            throw Error(ErrorCode::InvalidArgument, "tau must be in (0, 1]");
        }
    }
};

struct GroupOutcome {
    QueryGroup group;
    bool excluded = false;
    Neighbor neighbor;
    std::size_t sample_count = 0;
    std::vector<const Bag*> sampled;
    /// Ranking over this group's sampled bags only.
    std::vector<RankedModel> ranking;
};

struct Recommendation {
    std::vector<GroupOutcome> groups;
    std::vector<RankedModel> ranking;
    std::size_t query_count = 0;
    std::size_t stationary_queries = 0;
};

/// Retrieval, sampling and overall ranking. Group i samples from a stream
/// seeded by derive_seed(seed, i); groups follow key order.
inline Recommendation recommend_profiles(const store::Store& st, std::span<const props::PropertyProfile> queries,
                                         const RecommendConfig& cfg = {}) {
    cfg.validate();
    if (st.empty()) {
        throw Error(ErrorCode::EmptyStore, "store index is empty");
    }
    Recommendation rec;
    rec.query_count = queries.size();
    auto groups = group_queries(queries);
    rec.groups.resize(groups.size());
    parallel_for(groups.size(), cfg.threads, [&](std::size_t i) {
        GroupOutcome& out = rec.groups[i];
        out.group = std::move(groups[i]);
        if (out.group.stationary()) {
            out.excluded = true;
            return;
        }
        Rng rng(derive_seed(cfg.seed, i));
        out.neighbor = nearest_key(st, out.group.vector);
        out.sample_count = sample_count(cfg.tau, out.group.weight);
        out.sampled = sample_values(st, out.neighbor.key, out.sample_count, rng);
        out.ranking = rank_models(out.sampled);
    });
    std::vector<const Bag*> all;
    for (const auto& g : rec.groups) {
        if (g.excluded) {
            rec.stationary_queries += g.group.weight;
        }
        all.insert(all.end(), g.sampled.begin(), g.sampled.end());
    }
    rec.ranking = rank_models(all);
    return rec;
}

} // namespace aries::recommend
