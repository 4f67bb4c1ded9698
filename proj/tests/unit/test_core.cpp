#include "aries/core/error.hpp"
#include "aries/core/io.hpp"
#include "aries/core/parallel.hpp"
#include "aries/core/random.hpp"
#include "aries/core/series.hpp"
#include "aries/core/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

using namespace aries;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an aries::Error";
    return ErrorCode::InvalidArgument;
}

std::vector<double> iota_values(std::size_t n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 0.0);
    return v;
}

} // namespace

TEST(TimeSeries, RejectsShortOrNonFinite) {
    EXPECT_EQ(code_of([] { TimeSeries("a", {1.0}); }), ErrorCode::TooShort);
    EXPECT_EQ(code_of([] { TimeSeries("a", {1.0, std::nan("")}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { TimeSeries("a", {1.0, std::numeric_limits<double>::infinity()}); }),
              ErrorCode::InvalidArgument);
    EXPECT_NO_THROW(TimeSeries("a", {1.0, 2.0}));
}

TEST(SeriesSet, UniqueIdsAndLookup) {
    SeriesSet s;
    s.add(TimeSeries("x", {1, 2, 3}));
    s.add(TimeSeries("y", {4, 5}));
    EXPECT_THROW(s.add(TimeSeries("x", {0, 0})), Error);
    ASSERT_NE(s.find("y"), nullptr);
    EXPECT_EQ(s.find("y")->size(), 2u);
    EXPECT_EQ(s.find("z"), nullptr);
}

TEST(Split, FloorBoundariesRemainderToTest) {
    SplitSpec spec;
    spec.history_len = 10;
    spec.horizon = 10;
    auto v = iota_values(1001);
    const auto seg = split(std::span<const double>(v), spec);
    EXPECT_EQ(seg.train.size(), 700u);
    EXPECT_EQ(seg.val.size(), 100u);
    EXPECT_EQ(seg.test.size(), 201u);
    EXPECT_EQ(seg.test_begin(), 800u);
    EXPECT_EQ(seg.test.front(), 800.0);
}

TEST(Split, TooShortAndBadRatios) {
    SplitSpec spec;
    auto v = iota_values(600);
    EXPECT_EQ(code_of([&] { split(std::span<const double>(v), spec); }), ErrorCode::TooShort);
    spec.train_ratio = 0.8;
    EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::InvalidArgument);
}

TEST(Windows, CountMatchesEnumeration) {
    for (std::size_t n : {20u, 37u, 64u}) {
        for (std::size_t stride : {1u, 3u, 7u}) {
            auto v = iota_values(n);
            const auto w = sliding_windows(std::span<const double>(v), 8, 5, stride);
            std::size_t brute = 0;
            for (std::size_t s = 0; s + 13 <= n; s += stride) {
                ++brute;
            }
            EXPECT_EQ(w.size(), brute);
            EXPECT_EQ(window_count(n, 8, 5, stride), brute);
            for (const auto& win : w) {
                EXPECT_EQ(win.history.back() + 1.0, win.future.front());
            }
        }
    }
}

TEST(Windows, HistorySegmentEndsAtTestBorder) {
    SplitSpec spec;
    spec.history_len = 100;
    spec.horizon = 50;
    auto v = iota_values(1000);
    const auto h = history_segment(std::span<const double>(v), spec);
    ASSERT_EQ(h.size(), 100u);
    EXPECT_EQ(h.back(), 799.0);
}

TEST(Normalize, MinMaxAndConstant) {
    const std::vector<double> v = {2, 4, 6};
    EXPECT_EQ(minmax_normalize(v), (std::vector<double>{0.0, 0.5, 1.0}));
    const std::vector<double> c = {3, 3, 3};
    EXPECT_EQ(minmax_normalize(c), (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Csv, WideWithHeaderAndRoundTrip) {
    std::istringstream in("a,b\n1,2\n3,4.5\n5,6\n");
    const auto set = io::read_csv(in);
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set[0].id(), "a");
    EXPECT_EQ(set[1][1], 4.5);

    SeriesSet s;
    s.add(TimeSeries("p", {0.1, 1.0 / 3.0, -2e-300}));
    s.add(TimeSeries("q", {1e10, 2.5, 7}));
    std::ostringstream out;
    io::write_csv_wide(out, s);
    std::istringstream back(out.str());
    const auto r = io::read_csv(back);
    ASSERT_EQ(r.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(std::vector<double>(r[i].values().begin(), r[i].values().end()),
                  std::vector<double>(s[i].values().begin(), s[i].values().end()));
    }
}

TEST(Csv, HeaderlessWideGetsPositionalIds) {
    std::istringstream in("1,2\n3,4\n");
    const auto set = io::read_csv(in);
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set[0][1], 3.0);
}

TEST(Csv, LongLayout) {
    std::istringstream in("id,value\ns1,1\ns2,5\ns1,2\ns2,6\ns1,3\n");
    const auto set = io::read_csv(in, io::CsvLayout::Long);
    ASSERT_EQ(set.size(), 2u);
    ASSERT_NE(set.find("s1"), nullptr);
    EXPECT_EQ(set.find("s1")->size(), 3u);
    EXPECT_EQ(set.find("s2")->size(), 2u);
}

TEST(Csv, NonNumericCellReportsPosition) {
    std::istringstream in("a,b\n1,2\n3,oops\n");
    try {
        io::read_csv(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("oops"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    std::istringstream empty("");
    EXPECT_EQ(code_of([&] { io::read_csv(empty); }), ErrorCode::EmptyInput);
}

TEST(Jsonl, RoundTrip) {
    SeriesSet s;
    s.add(TimeSeries("k", {0.25, -1.5, 3}));
    std::ostringstream out;
    io::write_jsonl(out, s);
    std::istringstream in(out.str());
    const auto r = io::read_jsonl(in);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].id(), "k");
    EXPECT_EQ(r[0][1], -1.5);
}

TEST(Io, FormatDoubleIsShortestRoundTrip) {
    EXPECT_EQ(io::format_double(0.1), "0.1");
    EXPECT_EQ(io::format_double(2.0), "2");
    const double x = 1.0 / 7.0;
    EXPECT_EQ(*io::parse_double(io::format_double(x)), x);
    EXPECT_FALSE(io::parse_double("1.5x").has_value());
}

TEST(Io, Fnv1aKnownVectors) {
    EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(io::fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Stats, Moments) {
    const std::vector<double> v = {1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(stats::mean(v), 2.5);
    EXPECT_DOUBLE_EQ(stats::variance(v), 1.25);
    EXPECT_DOUBLE_EQ(stats::median(v), 2.5);
    EXPECT_DOUBLE_EQ(stats::median({5, 1, 3}), 3.0);
}

TEST(Stats, OlsMatchesClosedFormSimpleRegression) {
    Rng rng(3);
    std::normal_distribution<double> n(0, 1);
    const int N = 50;
    Eigen::MatrixXd X(N, 2);
    Eigen::VectorXd y(N);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < N; ++i) {
        const double x = n(rng);
        X(i, 0) = 1.0;
        X(i, 1) = x;
        y[i] = 2.0 - 0.5 * x + 0.1 * n(rng);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / N;
    const auto fit = stats::ols(X, y);
    EXPECT_NEAR(fit.coefficients[0], icpt, 1e-10);
    EXPECT_NEAR(fit.coefficients[1], slope, 1e-10);
    EXPECT_EQ(fit.dof, N - 2);
}

TEST(Stats, OlsSingularThrows) {
    Eigen::MatrixXd X(5, 2);
    X.col(0).setOnes();
    X.col(1).setOnes();
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(5, 0, 4);
    EXPECT_EQ(code_of([&] { stats::ols(X, y); }), ErrorCode::SingularRegression);
}

TEST(Stats, ChiSquareSurvival) {
    EXPECT_NEAR(stats::chi_square_sf(3.841458820694124, 1), 0.05, 1e-9);
    EXPECT_NEAR(stats::chi_square_sf(2.0, 2), std::exp(-1.0), 1e-12);
}

TEST(Random, DeriveSeedIsDeterministicAndSpread) {
    EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seen.insert(derive_seed(7, i));
    }
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Parallel, SlotsAndExceptions) {
    std::vector<std::size_t> out(100);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = i * i; });
    for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_EQ(out[i], i * i);
    }
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 5) {
                                      throw Error(ErrorCode::InvalidArgument, "boom");
                                  }
                              }),
                 Error);
}
