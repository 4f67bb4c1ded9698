#include "aries/store/aggregate.hpp"
#include "aries/store/perf_log.hpp"
#include "aries/store/property_vector.hpp"
#include "aries/store/store.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

using namespace aries;
using namespace aries::store;

namespace {

props::PropertyProfile make_profile(const std::string& id, bool stationary, double tau, double strength,
                                    std::size_t seasons, double cv, double h, bool hetero, double anomaly) {
    props::PropertyProfile p;
    p.id = id;
    p.is_stationary = stationary;
    p.trend_strength = tau;
    p.season_strength = strength;
    p.seasons.assign(seasons, 24);
    p.volatility = cv;
    p.memory = h;
    p.is_heteroscedastic = hetero;
    p.anomaly_rate = anomaly;
    return p;
}

props::PropertyProfile random_profile(std::mt19937_64& rng, const std::string& id) {
    std::uniform_real_distribution<double> u(0, 1);
    return make_profile(id, u(rng) < 0.3, 2 * u(rng) - 1, u(rng), static_cast<std::size_t>(u(rng) * 4),
                        1.2 * u(rng), u(rng), u(rng) < 0.5, 0.2 * u(rng));
}

PerfLog parse(const std::string& text) {
    std::istringstream in(text);
    return read_perf_log(in);
}

} // namespace

TEST(BinProfile, SinusoidExample) {
    const auto v = bin_profile(make_profile("s", false, 0.035, 0.977, 1, 0.7071, 0.289, true, 0.0));
    EXPECT_EQ(v.to_string(), "(1,0,3,1,2,1,1,0)");
}

TEST(BinProfile, UpperClosedEdges) {
    auto p = make_profile("s", false, 0.1, 0.25, 0, 0.4, 0.33, false, 0.05);
    auto v = bin_profile(p);
    EXPECT_EQ(v[Component::Trend], 0);
    EXPECT_EQ(v[Component::SeasonStrength], 0);
    EXPECT_EQ(v[Component::Volatility], 0);
    EXPECT_EQ(v[Component::Memory], 1);
    EXPECT_EQ(v[Component::Anomaly], 0);
    p.trend_strength = -0.95;
    p.volatility = 1.7;
    p.seasons.assign(5, 3);
    v = bin_profile(p);
    EXPECT_EQ(v[Component::Trend], 3);
    EXPECT_EQ(v[Component::Volatility], 3);
    EXPECT_EQ(v[Component::SeasonCount], 2);
}

TEST(BinProfile, EveryValueLandsInExactlyOneBin) {
    const std::vector<double> e = {0.1, 0.5, 0.9};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng);
        int hits = 0;
        int expected = -1;
        const double lo[] = {-1.0, 0.1, 0.5, 0.9};
        const double hi[] = {0.1, 0.5, 0.9, 2.0};
        for (int b = 0; b < 4; ++b) {
            if (x > lo[b] && x <= hi[b]) {
                ++hits;
                expected = b;
            }
        }
        EXPECT_EQ(hits, 1);
        EXPECT_EQ(bin4(x, e[0], e[1], e[2]), expected);
        const auto v = bin_profile(random_profile(rng, "r"));
        EXPECT_TRUE(v.valid());
    }
}

TEST(PropertyVector, OrderHashAndDistance) {
    PropertyVector a;
    PropertyVector b;
    b.c = {1, 3, 3, 2, 3, 3, 1, 3};
    EXPECT_LT(a, b);
    EXPECT_EQ(l1_distance(a, b), 19);
    EXPECT_NE(std::hash<PropertyVector>{}(a), std::hash<PropertyVector>{}(b));
    EXPECT_EQ(PropertyVector::from_ints(b.to_ints()), b);
    EXPECT_THROW(PropertyVector::from_ints({2, 0, 0, 0, 0, 0, 0, 0}), Error);
}

TEST(PerfLog, ParsesAndValidates) {
    const auto log = parse("series_id,model,mae,mse\nsynth-0,HI,0.694,1.156\n");
    ASSERT_EQ(log.size(), 1u);
    EXPECT_EQ(log[0].series_id, "synth-0");
    EXPECT_EQ(log[0].record.model, "HI");
    EXPECT_EQ(log[0].record.mae, 0.694);
    EXPECT_EQ(log[0].record.mse, 1.156);

    auto code = [](const std::string& text) {
        try {
            parse(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    EXPECT_EQ(code("series_id,model,mae,mse\nsynth-0,HI,1,1\nsynth-0,HI,2,2\n"), ErrorCode::DuplicateMeasurement);
    EXPECT_EQ(code("series_id,model,mae,mse\ns1,m1,-0.2,0.1\n"), ErrorCode::NegativeMetric);
    EXPECT_EQ(code("id,model,mae,mse\ns1,m1,0.2,0.1\n"), ErrorCode::ParseError);
    EXPECT_EQ(code("series_id,model,mae,mse\ns1,m1,x,0.1\n"), ErrorCode::ParseError);
    EXPECT_EQ(code("series_id,model,mae,mse\ns1,m1,0.1\n"), ErrorCode::ParseError);
}

TEST(PerfLog, WriteReadRoundTrip) {
    const PerfLog log = {{"a", {"HI", 0.1, 1.0 / 3.0}}, {"b", {"AR", 2.5, 7.0}}};
    std::ostringstream out;
    write_perf_log(out, log);
    EXPECT_EQ(parse(out.str()), log);
}

TEST(BuildStore, GroupsIdenticalVectors) {
    const auto p = make_profile("a", false, 0.3, 0.8, 1, 0.5, 0.6, true, 0.02);
    auto q = p;
    q.id = "b";
    const PerfLog log = {{"b", {"HI", 1, 1}}, {"a", {"HI", 2, 4}}, {"a", {"AR", 1, 1}}};
    const auto st = build_store(std::vector<props::PropertyProfile>{p, q}, log);
    ASSERT_EQ(st.index.size(), 1u);
    const auto& bags = st.index.begin()->second;
    ASSERT_EQ(bags.size(), 2u);
    EXPECT_EQ(bags[0].series_id, "a");
    EXPECT_EQ(bags[0].records[0].model, "AR");
    EXPECT_EQ(st.model_universe, (std::set<std::string>{"AR", "HI"}));
    ASSERT_TRUE(st.regular.has_value());
    EXPECT_DOUBLE_EQ(st.regular->at("HI").mae, 1.5);
}

TEST(BuildStore, StationaryExcludedAndTallied) {
    std::vector<props::PropertyProfile> ps;
    PerfLog log;
    for (int i = 0; i < 4; ++i) {
        ps.push_back(make_profile("s" + std::to_string(i), true, 0, 0, 0, 0.3, 0.5, false, 0.05));
        log.push_back({"s" + std::to_string(i), {"HI", 1, 1}});
    }
    const auto st = build_store(ps, log);
    EXPECT_TRUE(st.empty());
    EXPECT_EQ(st.excluded_stationary, 4u);
}

TEST(BuildStore, MissingProfile) {
    const PerfLog log = {{"ghost", {"HI", 1, 1}}};
    try {
        build_store(std::vector<props::PropertyProfile>{}, log);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingProfile);
    }
}

TEST(BuildStore, ConservationAndPigeonhole) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<props::PropertyProfile> ps;
        PerfLog log;
        std::size_t non_stationary = 0;
        for (int i = 0; i < 60; ++i) {
            const std::string id = "s" + std::to_string(i);
            ps.push_back(random_profile(rng, id));
            non_stationary += !ps.back().is_stationary;
            log.push_back({id, {"M1", 0.5, 0.25}});
            log.push_back({id, {"M2", 0.6, 0.36}});
        }
        const auto st = build_store(ps, log);
        EXPECT_EQ(st.bag_count() + st.excluded_stationary, 60u);
        EXPECT_LE(st.index.size(), non_stationary);
        for (const auto& [key, bags] : st.index) {
            for (const auto& b : bags) {
                EXPECT_FALSE(b.records.empty());
            }
        }
    }
}

TEST(StoreFile, RoundTripIsBitIdentical) {
    std::mt19937_64 rng(5);
    std::vector<props::PropertyProfile> ps;
    PerfLog log;
    std::uniform_real_distribution<double> u(0, 3);
    for (int i = 0; i < 30; ++i) {
        const std::string id = "s" + std::to_string(i);
        ps.push_back(random_profile(rng, id));
        log.push_back({id, {"A", u(rng), u(rng)}});
        log.push_back({id, {"B", u(rng), u(rng)}});
    }
    const auto st = build_store(ps, log, "cafe");
    const auto path = std::filesystem::temp_directory_path() / "aries_store_roundtrip.json";
    save_store(path, st);
    const auto back = load_store(path);
    EXPECT_EQ(back, st);
    EXPECT_EQ(to_json(back).dump(), to_json(st).dump());
    std::filesystem::remove(path);
}

TEST(StoreFile, RejectsWrongSchemaOrVersion) {
    auto j = to_json(Store{});
    j["version"] = 2;
    EXPECT_THROW(store_from_json(j), Error);
    j["version"] = 1;
    j["schema"] = "something-else";
    EXPECT_THROW(store_from_json(j), Error);
}

TEST(Aggregate, SingletonAndPairStatistics) {
    std::map<std::string, props::PropertyProfile> ps;
    ps["a"] = make_profile("a", false, 0.05, 0.9, 1, 0.5, 0.4, true, 0.0);
    ps["b"] = make_profile("b", false, 0.07, 0.9, 1, 0.5, 0.4, true, 0.0);
    const auto one = aggregate_table(ps, PerfLog{{"a", {"HI", 0.5, 0.3}}}, Component::Trend);
    ASSERT_EQ(one.models, std::vector<std::string>{"HI"});
    for (const auto& c : one.cells[0]) {
        if (c) {
            EXPECT_EQ(c->mae_mean, 0.5);
            EXPECT_EQ(c->mae_median, 0.5);
        }
    }
    EXPECT_FALSE(one.cells[0][1].has_value());  // Stationary column
    const auto two = aggregate_table(ps, PerfLog{{"a", {"HI", 0.2, 0.1}}, {"b", {"HI", 0.4, 0.1}}}, Component::Trend);
    ASSERT_TRUE(two.cells[0][2].has_value());
    EXPECT_DOUBLE_EQ(two.cells[0][2]->mae_mean, 0.3);
    EXPECT_DOUBLE_EQ(two.cells[0][2]->mae_median, 0.3);
    EXPECT_FALSE(two.cells[0][3].has_value());
}

TEST(Aggregate, MatchesBruteForceOnFixture) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 2);
    std::map<std::string, props::PropertyProfile> ps;
    PerfLog log;
    const std::vector<std::string> models = {"A", "B", "C"};
    for (int i = 0; i < 10; ++i) {
        const std::string id = "s" + std::to_string(i);
        ps[id] = random_profile(rng, id);
        for (const auto& m : models) {
            log.push_back({id, {m, u(rng), u(rng)}});
        }
    }
    for (Component comp : kAllComponents) {
        const auto t = aggregate_table(ps, log, comp);
        const std::size_t offset = comp == Component::Stationarity ? 1 : 2;
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            ASSERT_EQ(t.models[mi], models[mi]);
            for (std::size_t col = 0; col < t.columns.size(); ++col) {
                std::vector<double> mae;
                for (const auto& e : log) {
                    if (e.record.model != models[mi]) {
                        continue;
                    }
                    const auto& p = ps.at(e.series_id);
                    bool in = false;
                    if (col == 0) {
                        in = true;
                    } else if (offset == 2 && col == 1) {
                        in = p.is_stationary;
                    } else {
                        in = (comp == Component::Stationarity || !p.is_stationary) &&
                             bin_profile(p)[comp] == col - offset;
                    }
                    if (in) {
                        mae.push_back(e.record.mae);
                    }
                }
                const auto& cell = t.cells[mi][col];
                ASSERT_EQ(cell.has_value(), !mae.empty()) << component_name(comp) << " col " << col;
                if (!mae.empty()) {
                    double s = 0;
                    for (double v : mae) {
                        s += v;
                    }
                    std::sort(mae.begin(), mae.end());
                    const std::size_t n = mae.size();
                    const double med = n % 2 ? mae[n / 2] : 0.5 * (mae[n / 2 - 1] + mae[n / 2]);
                    EXPECT_NEAR(cell->mae_mean, s / n, 1e-12);
                    EXPECT_NEAR(cell->mae_median, med, 1e-12);
                    EXPECT_EQ(cell->count, n);
                }
            }
        }
    }
}

TEST(Aggregate, RenderersMarkAbsentCells) {
    std::map<std::string, props::PropertyProfile> ps;
    ps["a"] = make_profile("a", false, 0.05, 0.9, 1, 0.5, 0.4, true, 0.0);
    const auto t = aggregate_table(ps, PerfLog{{"a", {"HI", 0.5, 0.25}}}, Component::Trend);
    std::ostringstream csv;
    write_table_csv(csv, t);
    EXPECT_NE(csv.str().find("HI,mae_mean,0.5,,0.5,,,"), std::string::npos) << csv.str();
    std::ostringstream md;
    write_table_markdown(md, t);
    EXPECT_NE(md.str().find("n/a"), std::string::npos);
    EXPECT_THROW(aggregate_table(ps, PerfLog{}, Component::Trend), Error);
}
