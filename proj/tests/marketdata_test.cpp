#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bondopt/error.hpp"
#include "bondopt/marketdata.hpp"
#include "support/oracles.hpp"

using namespace bondopt;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::InvalidArgument;
}

std::vector<YieldCurve> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_curves(in);
}

YieldCurve flat(const std::string& date, double y) {
    return {date, {1.0 / 12.0, 0.5, 1.0, 2.0, 5.0, 10.0}, std::vector<double>(6, y)};
}

}  // namespace

TEST(Loader, LongFormat) {
    const auto c = parse("date,tenor_years,yield\n2020-01-31,0.5,0.01\n2020-01-31,1,0.015\n2020-02-29,0.5,0.02\n2020-02-29,1,0.025\n");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].date, "2020-01-31");
    EXPECT_EQ(c[0].tenors, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(c[1].yields, (std::vector<double>{0.02, 0.025}));
}

TEST(Loader, WideFormatAndSorting) {
    const auto c = parse("# comment\nDate,y_0.25,y_1,y_10\n2020-03-31,0.01,0.02,0.03\n\n2020-01-31,0.04,0.05,0.06\n");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].date, "2020-01-31");
    EXPECT_EQ(c[0].tenors, (std::vector<double>{0.25, 1.0, 10.0}));
    EXPECT_EQ(c[0].yields, (std::vector<double>{0.04, 0.05, 0.06}));
    EXPECT_EQ(c[1].date, "2020-03-31");
}

TEST(Loader, RoundTripsThroughWriter) {
    const std::vector<YieldCurve> curves{{"2001-01-01", {0.1, 1.0 / 3.0}, {0.0123456789012345, 0.1}},
                                         {"2001-02-01", {0.1, 1.0 / 3.0}, {-0.001, 0.07}}};
    std::ostringstream out;
    write_curves(out, curves);
    const auto back = parse(out.str());
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].tenors, curves[i].tenors);
        EXPECT_EQ(back[i].yields, curves[i].yields);
    }
}

TEST(Loader, Errors) {
    EXPECT_EQ(code_of([] { parse(""); }), ErrorCode::EmptyInput);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n"); }), ErrorCode::EmptyInput);
    EXPECT_EQ(code_of([] { parse("date,y_1\n2020-01-01,0.01\n2020-01-01,0.02\n"); }), ErrorCode::DuplicateDate);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n2020-01-01,1,0.01\n2020-02-01,1,0.01\n2020-01-01,2,0.01\n"); }),
              ErrorCode::DuplicateDate);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n2020-01-01,1,abc\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n2020-13-01,1,0.01\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n2020-01-01,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse("when,what\n2020-01-01,1\n"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse("date,tenor_years,yield\n2020-01-01,2,0.01\n2020-01-01,1,0.01\n"); }),
              ErrorCode::NonMonotoneTenors);
    EXPECT_EQ(code_of([] { parse("date,y_2,y_1\n2020-01-01,0.01,0.02\n"); }), ErrorCode::NonMonotoneTenors);
    EXPECT_EQ(code_of([] { load_curves("/nonexistent/curves.csv"); }), ErrorCode::IoError);
}

TEST(Spline, FlatAndLinear) {
    const std::vector<int> grid{1, 7, 18, 60, 119};
    const auto f = spline_interpolate(flat("2000-01-01", 0.04), grid);
    for (double y : f.yields) EXPECT_NEAR(y, 0.04, 1e-15);
    const YieldCurve lin{"2000-01-01", {0.5, 1.0, 3.0, 10.0}, {0.015, 0.02, 0.04, 0.11}};
    const auto l = spline_interpolate(lin, std::vector<int>{6, 9, 30, 100});
    for (std::size_t i = 0; i < l.tenors.size(); ++i) EXPECT_NEAR(l.yields[i], 0.01 + 0.01 * l.tenors[i], 1e-15);
}

TEST(Spline, SmoothCurve) {
    const std::vector<double> knots{0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<double> ys;
    for (double t : knots) ys.push_back(0.05 - 0.03 * std::exp(-t));
    const YieldCurve c{"2000-01-01", knots, ys};
    const auto out = spline_interpolate(c, std::vector<int>{36});
    EXPECT_NEAR(out.yields[0], 0.05 - 0.03 * std::exp(-3.0), 2e-4);

    const oracle::NaturalSpline ref(knots, ys);
    const auto grid = month_grid(6, 120);
    const auto all = spline_interpolate(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(all.yields[i], ref(grid[i] / 12.0), 1e-14);
}

TEST(Spline, RejectsOutOfRangeGrid) {
    const YieldCurve c{"2000-01-01", {0.5, 1.0, 2.0}, {0.01, 0.02, 0.03}};
    EXPECT_EQ(code_of([&] { spline_interpolate(c, std::vector<int>{3}); }), ErrorCode::GridOutOfRange);
    EXPECT_EQ(code_of([&] { spline_interpolate(c, std::vector<int>{25}); }), ErrorCode::GridOutOfRange);
}

TEST(Returns, FlatCurveEarnsTheYield) {
    const std::vector<YieldCurve> curves{flat("2000-01-01", 0.05), flat("2000-02-01", 0.05), flat("2000-03-01", 0.05)};
    const auto grid = month_grid(1, 120);
    const auto p = compute_returns(curves, grid);
    EXPECT_EQ(p.num_dates(), 2);
    EXPECT_EQ(p.num_maturities(), 120);
    EXPECT_EQ(p.dates[0], "2000-02-01");
    for (Eigen::Index s = 0; s < 2; ++s)
        for (Eigen::Index j = 0; j < 120; ++j) EXPECT_NEAR(p.returns(s, j), 0.05 / 12.0, 1e-15);
}

TEST(Returns, ParallelShift) {
    const std::vector<YieldCurve> curves{flat("2000-01-01", 0.05), flat("2000-02-01", 0.0501)};
    const auto p = compute_returns(curves, std::vector<int>{1, 60});
    EXPECT_NEAR(p.returns(0, 0), 0.05 / 12.0, 1e-15);
    EXPECT_NEAR(p.returns(0, 1), 0.05 * 60.0 / 12.0 - 0.0501 * 59.0 / 12.0, 1e-14);
    EXPECT_EQ(code_of([&] { compute_returns(std::span(curves).first(1), std::vector<int>{1}); }),
              ErrorCode::InsufficientDates);
}

TEST(Returns, StaticExpectationsUseTheForwardRate) {
    const std::vector<double> knots{1.0 / 12.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<double> ys;
    for (double t : knots) ys.push_back(0.05 - 0.03 * std::exp(-t));
    const YieldCurve c{"2000-01-01", knots, ys};
    const std::vector<int> grid{1, 2, 24, 120};
    const auto er = expected_returns_static(c, grid);
    const oracle::NaturalSpline ref(knots, ys);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i] / 12.0, s = (grid[i] - 1) / 12.0;
        const double want = ref(t) * t - (grid[i] > 1 ? ref(s) * s : 0.0);
        EXPECT_NEAR(er[i], want, 1e-14);
    }
    // The realized return on an unchanged curve is the static expectation.
    const std::vector<YieldCurve> same{c, {"2000-02-01", knots, ys}};
    const auto p = compute_returns(same, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(p.returns(0, static_cast<Eigen::Index>(i)), er[i], 1e-15);
}

TEST(ReturnVariance, Examples) {
    Eigen::MatrixXd r(2, 1);
    r << 0.01, 0.03;
    const auto p = ReturnPanel::from_returns({"2000-01-01", "2000-02-01"}, {1}, r);
    EXPECT_NEAR(variance_estimates(p)[0], 0.0002, 1e-18);

    std::mt19937_64 rng(61);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd big(2000, 10);
    for (Eigen::Index s = 0; s < big.rows(); ++s)
        for (Eigen::Index t = 0; t < big.cols(); ++t) big(s, t) = 0.004 + 0.002 * static_cast<double>(t + 1) * n(rng);
    const auto v = variance_estimates(ReturnPanel::from_returns(std::vector<std::string>(2000, "2000-01-01"), month_grid(1, 10), big));
    for (int t = 1; t <= 10; ++t) EXPECT_NEAR(v[static_cast<std::size_t>(t - 1)] / std::pow(0.002 * t, 2), 1.0, 0.15);
}

TEST(ReturnVariance, DegenerateMaturity) {
    Eigen::MatrixXd r(3, 2);
    r << 0.01, 0.02, 0.01, 0.03, 0.01, 0.01;
    const auto p = ReturnPanel::from_returns({"a", "b", "c"}, {1, 2}, r);
    EXPECT_EQ(code_of([&] { variance_estimates(p); }), ErrorCode::DegenerateMaturity);
    EXPECT_EQ(code_of([&] { standardized(p); }), ErrorCode::DegenerateMaturity);
}

TEST(Panel, StandardizedColumns) {
    std::mt19937_64 rng(62);
    Eigen::MatrixXd r(50, 6);
    for (Eigen::Index s = 0; s < 50; ++s)
        for (Eigen::Index t = 0; t < 6; ++t) r(s, t) = oracle::random_vector(rng, 1, -0.01, 0.03)[0];
    const auto p = ReturnPanel::from_returns(std::vector<std::string>(50, "x"), month_grid(1, 6), r);
    const Eigen::MatrixXd z = standardized(p);
    for (Eigen::Index t = 0; t < 6; ++t) {
        EXPECT_NEAR(z.col(t).mean(), 0.0, 1e-14);
        EXPECT_NEAR(std::sqrt(z.col(t).squaredNorm() / 49.0), 1.0, 1e-14);
    }
    const auto w = p.window(10, 20);
    EXPECT_EQ(w.num_dates(), 20);
    EXPECT_NEAR(w.means[2], r.col(2).segment(10, 20).mean(), 1e-15);
    EXPECT_EQ(code_of([&] { p.window(40, 20); }), ErrorCode::InvalidArgument);
}
