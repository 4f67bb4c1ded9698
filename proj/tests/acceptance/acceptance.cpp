// Acceptance suite: one PASS/FAIL line per criterion, diagnostics indented below it.
#include "aries/aries.hpp"

#include "common/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace aries;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int run(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < budget_s, fmt("runtime %.2f s < %.0f s", secs, budget_s));
    std::printf("[%s] criterion %d: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, secs);
    for (const auto& n : o.notes) {
        std::printf("       %s\n", n.c_str());
    }
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

/// A sin(2 pi t / 24 + phi) + b for t = 1..L.
std::vector<double> wave(std::size_t length, double amplitude, double phase_deg, double offset) {
    std::vector<double> x(length);
    for (std::size_t t = 1; t <= length; ++t) {
        x[t - 1] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 24.0 +
                                        phase_deg * std::numbers::pi / 180.0) +
                   offset;
    }
    return x;
}

bool contains(const std::vector<std::size_t>& v, std::size_t p) {
    return std::find(v.begin(), v.end(), p) != v.end();
}

std::string list(const std::vector<std::size_t>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s + "]";
}

void anchors(Outcome& o) {
    const auto p = props::profile("sine", wave(336, 1, 0, 0));
    o.check(!p.is_stationary, fmt("is_stationary = %s", p.is_stationary ? "true" : "false"));
    o.check(std::abs(std::abs(p.trend_strength) - 0.035) <= 0.02, fmt("|tau| = %.4f (0.035 +- 0.02)", std::abs(p.trend_strength)));
    o.check(contains(p.seasons, 24), "seasons = " + list(p.seasons) + " contains 24");
    o.check(std::abs(p.season_strength - 0.977) <= 0.02, fmt("season_strength = %.4f (0.977 +- 0.02)", p.season_strength));
    o.check(std::abs(p.volatility - 0.7071) <= 0.005, fmt("volatility = %.6f (0.7071 +- 0.005)", p.volatility));
    o.check(p.anomaly_rate == 0.0, fmt("anomaly_rate = %g (exactly 0)", p.anomaly_rate));
    o.check(std::abs(p.memory - 0.289) <= 0.15, fmt("hurst = %.4f (0.289 +- 0.15)", p.memory));
}

void invariance(Outcome& o) {
    const auto base = props::profile("base", wave(336, 1, 0, 0));
    struct Worst {
        double tau = 0, strength = 0, volatility = 0, hurst = 0, anomaly = 0;
        int decision_mismatch = 0, season_mismatch = 0;
    };
    auto sweep = [&](const std::vector<double>& phases) {
        Worst w;
        for (double a : {1.0, 10.0, 100.0}) {
            for (double b : {0.0, 50.0, 100.0}) {
                for (double phi : phases) {
                    const auto p = props::profile("v", wave(336, a, phi, b));
                    w.tau = std::max(w.tau, std::abs(std::abs(p.trend_strength) - std::abs(base.trend_strength)));
                    w.strength = std::max(w.strength, std::abs(p.season_strength - base.season_strength));
                    w.volatility = std::max(w.volatility, std::abs(p.volatility - base.volatility));
                    w.hurst = std::max(w.hurst, std::abs(p.memory - base.memory));
                    w.anomaly = std::max(w.anomaly, std::abs(p.anomaly_rate - base.anomaly_rate));
                    w.decision_mismatch += p.is_stationary != base.is_stationary;
                    w.season_mismatch += p.seasons != base.seasons;
                }
            }
        }
        return w;
    };
    auto report = [&](const char* label, const Worst& w) {
        o.check(w.decision_mismatch == 0, fmt("%s: stationarity decision mismatches = %d", label, w.decision_mismatch));
        o.check(w.season_mismatch == 0, fmt("%s: detected-season mismatches = %d", label, w.season_mismatch));
        o.check(w.tau <= 1e-6, fmt("%s: max | |tau| - base | = %.3g", label, w.tau));
        o.check(w.strength <= 1e-6, fmt("%s: max |season_strength - base| = %.3g", label, w.strength));
        o.check(w.volatility <= 1e-6, fmt("%s: max |volatility - base| = %.3g", label, w.volatility));
        o.check(w.hurst <= 1e-6, fmt("%s: max |hurst - base| = %.3g", label, w.hurst));
        o.check(w.anomaly <= 1e-6, fmt("%s: max |anomaly - base| = %.3g", label, w.anomaly));
    };
    report("amplitude x offset", sweep({0.0}));
    report("amplitude x offset x phase", sweep({0.0, 90.0, 180.0}));
    for (std::size_t len : {336u, 672u, 984u}) {
        const auto p = props::profile("len", wave(len, 1, 0, 0));
        o.check(p.is_stationary == base.is_stationary && contains(p.seasons, 24),
                fmt("L=%zu: stationary=%d seasons=%s", len, int(p.is_stationary), list(p.seasons).c_str()));
    }
}

void calibration(Outcome& o) {
    constexpr int kSeeds = 50;
    int adf_wn = 0, kpss_wn = 0, arch_wn = 0, anomaly_ok = 0, hurst_ok = 0;
    int adf_rw = 0, kpss_rw = 0, arch_flag = 0;
    double anomaly_sum = 0, hurst_sum = 0;
    for (int s = 0; s < kSeeds; ++s) {
        const auto wn = fixtures::white_noise(1024, derive_seed(301, s));
        adf_wn += props::adf_test(wn).reject_unit_root_5pct;
        kpss_wn += !props::kpss_test(wn).reject_stationarity_5pct;
        arch_wn += !props::arch_lm_test(wn, props::default_arch_lags(wn.size())).is_heteroscedastic;

        const auto long_wn = fixtures::white_noise(4096, derive_seed(302, s));
        const double a = props::anomaly_rate(long_wn);
        const double h = props::hurst(long_wn).exponent;
        anomaly_ok += std::abs(a - 0.05) <= 0.015;
        hurst_ok += std::abs(h - 0.5) <= 0.1;
        anomaly_sum += a;
        hurst_sum += h;

        const auto rw = fixtures::random_walk(1024, derive_seed(303, s));
        adf_rw += !props::adf_test(rw).reject_unit_root_5pct;
        kpss_rw += props::kpss_test(rw).reject_stationarity_5pct;

        const auto arch = fixtures::arch1(1024, 0.6, derive_seed(304, s));
        arch_flag += props::arch_lm_test(arch, props::default_arch_lags(arch.size())).is_heteroscedastic;
    }
    auto rate = [&](const char* what, int hits) {
        o.check(hits >= 45, fmt("%s: %d/%d (>= 90%%)", what, hits, kSeeds));
    };
    rate("white noise L=1024, ADF rejects", adf_wn);
    rate("white noise L=1024, KPSS does not reject", kpss_wn);
    rate("white noise L=1024, ARCH-LM does not flag", arch_wn);
    o.check(anomaly_ok == kSeeds, fmt("white noise L=4096, anomaly_rate in 0.05 +- 0.015: %d/%d (mean %.4f)",
                                      anomaly_ok, kSeeds, anomaly_sum / kSeeds));
    o.check(hurst_ok == kSeeds,
            fmt("white noise L=4096, hurst in 0.5 +- 0.1: %d/%d (mean %.4f)", hurst_ok, kSeeds, hurst_sum / kSeeds));
    rate("random walk L=1024, ADF does not reject", adf_rw);
    rate("random walk L=1024, KPSS rejects", kpss_rw);
    rate("ARCH(1) alpha=0.6 L=1024, heteroscedastic", arch_flag);
}

void generator_round_trips(Outcome& o) {
    constexpr std::size_t kLength = 1024;
    constexpr int kSeeds = 50;
    double worst_jitter = 0;
    auto draw = [&](const synth::CompositeKernel& k, std::uint64_t seed) {
        Rng rng(seed);
        double used = 0;
        auto x = synth::sample_gp(k, kLength, rng, 1e-6, &used);
        worst_jitter = std::max(worst_jitter, used);
        return x;
    };
    int periodic = 0, trend = 0, noise = 0;
    for (int s = 0; s < kSeeds; ++s) {
        const synth::CompositeKernel ess{{synth::ExpSineSquared{1.0, 24.0}, synth::WhiteNoise{0.01}},
                                         {synth::KernelOp::Add}};
        const auto seasons = props::detect_seasons(draw(ess, derive_seed(401, s)));
        periodic += contains(seasons, 23) || contains(seasons, 24) || contains(seasons, 25);
        const synth::CompositeKernel dot{{synth::DotProduct{0.5}}, {}};
        trend += std::abs(props::mann_kendall(draw(dot, derive_seed(402, s)))) > 0.9;
        const synth::CompositeKernel wn{{synth::WhiteNoise{1.0}}, {}};
        noise += props::is_stationary(draw(wn, derive_seed(403, s)));
    }
    o.check(periodic >= 45, fmt("ExpSineSquared(period 24) + WhiteNoise: period 24+-1 recovered %d/%d", periodic, kSeeds));
    o.check(trend >= 45, fmt("DotProduct: |tau| > 0.9 in %d/%d", trend, kSeeds));
    o.check(noise >= 45, fmt("WhiteNoise: is_stationary in %d/%d", noise, kSeeds));

    synth::SynthConfig cfg;
    cfg.n_series = 200;
    cfg.length = kLength;
    cfg.seed = 20240601;
    const auto ds = synth::generate_dataset(cfg, default_thread_count());
    std::size_t retried = 0;
    for (const auto& p : ds.provenance) {
        worst_jitter = std::max(worst_jitter, p.jitter);
        retried += p.attempts > 1;
    }
    o.check(worst_jitter <= synth::kMaxJitter,
            fmt("all covariances factorized, max jitter %g <= 1e-2 (%zu of 200 composites resampled)", worst_jitter,
                retried));
}

void retrieval_oracle(Outcome& o) {
    std::mt19937_64 rng(501);
    auto random_vector = [&] {
        store::PropertyVector v;
        for (std::size_t i = 0; i < store::kComponents; ++i) {
            v.c[i] = static_cast<std::uint8_t>(
                std::uniform_int_distribution<int>(0, store::kComponentBins[i] - 1)(rng));
        }
        return v;
    };
    store::Store st;
    st.model_universe = {"M"};
    std::vector<store::PropertyVector> keys;
    for (int i = 0; i < 500; ++i) {
        keys.push_back(random_vector());
        st.index[keys.back()].push_back({"s" + std::to_string(i), {{"M", 1.0, 1.0}}});
    }
    int mismatches = 0;
    for (int q = 0; q < 1000; ++q) {
        const auto query = random_vector();
        std::pair<int, store::PropertyVector> best{1 << 30, {}};
        for (const auto& k : keys) {
            int d = 0;
            for (std::size_t i = 0; i < store::kComponents; ++i) {
                d += std::abs(int(k.c[i]) - int(query.c[i]));
            }
            best = std::min(best, {d, k});
        }
        const auto got = recommend::nearest_key(st, query);
        mismatches += got.key != best.second || got.distance != best.first;
    }
    o.check(mismatches == 0, fmt("nearest_key vs exhaustive L1 scan (1000 queries, 500 keys): %d mismatches", mismatches));

    std::uniform_real_distribution<double> u(0.0, 1.0);
    int rank_mismatch = 0;
    for (int fixture = 0; fixture < 100; ++fixture) {
        std::vector<store::Bag> bags;
        for (int b = 0; b < 30; ++b) {
            store::Bag bag{"s" + std::to_string(b), {}};
            for (int m = 0; m < 6; ++m) {
                if (u(rng) < 0.8) {
                    bag.records.push_back({"M" + std::to_string(m), u(rng), u(rng)});
                }
            }
            if (!bag.records.empty()) {
                bags.push_back(bag);
            }
        }
        std::map<std::string, std::vector<std::pair<double, double>>> per_model;
        for (const auto& b : bags) {
            for (const auto& r : b.records) {
                per_model[r.model].emplace_back(r.mae, r.mse);
            }
        }
        std::vector<recommend::RankedModel> brute;
        for (auto& [model, vals] : per_model) {
            std::vector<double> mae, mse;
            for (const auto& [a, s] : vals) {
                mae.push_back(a);
                mse.push_back(s);
            }
            std::sort(mae.begin(), mae.end());
            std::sort(mse.begin(), mse.end());
            double sa = 0, ss = 0;
            for (std::size_t i = 0; i < mae.size(); ++i) {
                sa += mae[i];
                ss += mse[i];
            }
            const double n = static_cast<double>(vals.size());
            brute.push_back({model, sa / n, ss / n, vals.size()});
        }
        recommend::sort_ranking(brute);
        rank_mismatch += recommend::rank_models(bags) != brute;
    }
    o.check(rank_mismatch == 0, fmt("rank_models vs brute force (100 fixtures): %d mismatches", rank_mismatch));
}

void metric_values(Outcome& o) {
    const std::vector<std::string> a = {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J"};
    const std::vector<std::string> b = {"K", "L", "M", "N", "O", "P", "Q", "R", "S", "T"};
    for (std::size_t k : {3u, 5u, 7u, 10u}) {
        const bool ok = recommend::hit_ratio_at_k(a, a, k) == 1.0 && recommend::ndcg_at_k(a, a, k) == 1.0 &&
                        recommend::hit_ratio_at_k(a, b, k) == 0.0 && recommend::ndcg_at_k(a, b, k) == 0.0;
        o.check(ok, fmt("k=%zu identical -> 1, disjoint -> 0", k));
    }
    const double l3 = std::log2(3.0);
    const double formula = (1.0 + 2.0 / l3) / (2.0 + 1.0 / l3);
    const double got = recommend::ndcg_at_k({"B", "A"}, {"A", "B"}, 2);
    o.check(std::abs(got - formula) <= 1e-6,
            fmt("NDCG@2([B,A] vs [A,B]) = %.7f, formula %.7f (quoted approx 0.861)", got, formula));
}

struct ClosedLoop {
    synth::SynthDataset data;
    store::PerfLog log;
    std::vector<props::PropertyProfile> queries;
    store::Store st;
};

ClosedLoop build_closed_loop(Outcome& o) {
    ClosedLoop c;
    synth::SynthConfig cfg;
    cfg.n_series = 200;
    cfg.length = 1024;
    cfg.seed = 20240601;
    c.data = synth::generate_dataset(cfg, default_thread_count());
    SplitSpec spec;
    spec.history_len = 336;
    spec.horizon = 96;
    const std::vector<baselines::ModelKind> models = {baselines::ModelKind::Hi, baselines::ModelKind::NaiveMean,
                                                      baselines::ModelKind::SeasonalNaive, baselines::ModelKind::Ar,
                                                      baselines::ModelKind::LinearWindow};
    const auto eval = baselines::evaluate(models, c.data.series, spec, {}, default_thread_count());
    c.log = baselines::to_perf_log(eval.results);
    const auto batch = props::profile_set(c.data.series, {}, props::SegmentSelector{spec}, default_thread_count());
    c.queries = batch.profiles;
    c.st = store::build_store(c.queries, c.log, "acceptance");
    o.notes.push_back(fmt("     %zu results, %zu series skipped, %zu keys, %zu stationary excluded",
                          eval.results.size(), eval.skipped.size() + batch.skipped.size(), c.st.index.size(),
                          c.st.excluded_stationary));
    return c;
}

void closed_loop(Outcome& o, const ClosedLoop& c) {
    const auto rec = recommend::recommend_profiles(c.st, c.queries, {1.0, 7, 1});
    std::vector<std::string> retrieved;
    int max_distance = 0;
    for (const auto& g : rec.groups) {
        if (!g.excluded) {
            retrieved.insert(retrieved.end(), g.group.series_ids.begin(), g.group.series_ids.end());
            max_distance = std::max(max_distance, g.neighbor.distance);
        }
    }
    const auto truth = recommend::model_names(recommend::rank_log(c.log, retrieved));
    const auto got = recommend::model_names(rec.ranking);
    std::string order;
    for (const auto& m : rec.ranking) {
        order += fmt(" %s(%.4f)", m.model.c_str(), m.mae);
    }
    o.notes.push_back("     recommended:" + order);
    o.check(recommend::hit_ratio_at_k(got, truth, 3) == 1.0,
            fmt("HR@3 = %.3f vs store-derived truth", recommend::hit_ratio_at_k(got, truth, 3)));
    o.check(max_distance == 0, fmt("max retrieval distance = %d", max_distance));

    std::vector<props::PropertyProfile> seasonal;
    for (const auto& p : c.queries) {
        if (!p.is_stationary && store::bin_profile(p)[store::Component::SeasonStrength] == 3) {
            seasonal.push_back(p);
        }
    }
    const auto names = recommend::model_names(recommend::recommend_profiles(c.st, seasonal, {1.0, 7, 1}).ranking);
    const auto pos = [&](const char* m) { return std::find(names.begin(), names.end(), m) - names.begin(); };
    o.check(!seasonal.empty() && pos("SeasonalNaive") < pos("NaiveMean"),
            fmt("season_strength bin 3 subset (%zu queries): SeasonalNaive rank %td, NaiveMean rank %td",
                seasonal.size(), pos("SeasonalNaive") + 1, pos("NaiveMean") + 1));
}

void sampling_robustness(Outcome& o, const ClosedLoop& c) {
    int same = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto low = recommend::model_names(recommend::recommend_profiles(c.st, c.queries, {0.01, s, 1}).ranking);
        auto full = recommend::model_names(recommend::recommend_profiles(c.st, c.queries, {1.0, s, 1}).ranking);
        low.resize(std::min<std::size_t>(3, low.size()));
        full.resize(std::min<std::size_t>(3, full.size()));
        same += low == full;
    }
    o.check(same >= 18, fmt("ordered top-3 identical at tau=0.01 and tau=1: %d/20 seeds", same));
}

void mstl_reconstruction(Outcome& o) {
    synth::SynthConfig cfg;
    cfg.n_series = 100;
    cfg.length = 512;
    cfg.seed = 909;
    const auto ds = synth::generate_dataset(cfg, default_thread_count());
    double worst = 0;
    std::size_t multi = 0;
    for (const auto& s : ds.series) {
        const auto periods = props::detect_seasons(s.values());
        multi += periods.size() > 1;
        const auto d = props::mstl_decompose(s.values(), periods);
        for (std::size_t t = 0; t < s.size(); ++t) {
            double sum = d.trend[t] + d.residual[t];
            for (const auto& comp : d.seasonals) {
                sum += comp[t];
            }
            worst = std::max(worst, std::abs(sum - s.values()[t]));
        }
    }
    o.check(worst <= 1e-8, fmt("max |x - (T + sum S + R)| = %.3g over 100 series (%zu multi-seasonal)", worst, multi));
}

} // namespace

int main() {
    int failures = 0;
    failures += run(1, "sinusoid anchors", 1, anchors);
    failures += run(2, "invariance sweeps", 10, invariance);
    failures += run(3, "statistical-test calibration", 60, calibration);
    failures += run(4, "generator round trips", 120, generator_round_trips);
    failures += run(5, "retrieval oracle", 60, retrieval_oracle);
    failures += run(6, "metric unit values", 1, metric_values);
    ClosedLoop loop;
    failures += run(7, "closed-loop end-to-end", 600, [&](Outcome& o) {
        loop = build_closed_loop(o);
        closed_loop(o, loop);
    });
    failures += run(8, "sampling-rate robustness", 60, [&](Outcome& o) { sampling_robustness(o, loop); });
    failures += run(9, "MSTL reconstruction", 60, mstl_reconstruction);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
