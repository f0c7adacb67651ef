#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bondopt/corrfit.hpp"
#include "bondopt/error.hpp"
#include "support/oracles.hpp"

using namespace bondopt;

namespace {

ReturnPanel panel_from(const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t t = 0; t < rows[0].size(); ++t) m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = rows[s][t];
    std::vector<std::string> dates;
    for (std::size_t s = 0; s < rows.size(); ++s) dates.push_back("2000-01-" + std::to_string(10 + s % 18));
    std::vector<int> mats;
    for (std::size_t t = 0; t < rows[0].size(); ++t) mats.push_back(static_cast<int>(t) + 1);
    return ReturnPanel::from_returns(dates, mats, m);
}

std::vector<std::vector<double>> gaussian_rows(std::size_t dates, std::size_t mats, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::vector<double>> rows(dates, std::vector<double>(mats));
    for (auto& r : rows)
        for (auto& x : r) x = n(rng);
    return rows;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::InvalidArgument;
}

std::vector<double> geometric(double a, int count) {
    std::vector<double> c;
    for (int k = 0; k < count; ++k) c.push_back(std::pow(a, k));
    return c;
}

}  // namespace

TEST(CorrelationEstimate, IdenticalColumnsArePerfectlyCorrelated) {
    std::mt19937_64 rng(1);
    const auto series = oracle::random_vector(rng, 30);
    std::vector<std::vector<double>> rows(30, std::vector<double>(12));
    for (std::size_t s = 0; s < 30; ++s)
        for (auto& x : rows[s]) x = series[s];
    const auto est = estimate_correlation(panel_from(rows), 10);
    for (double c : est.values) EXPECT_NEAR(c, 1.0, 1e-12);
}

TEST(CorrelationEstimate, IndependentReturnsAreNearZero) {
    const auto est = estimate_correlation(panel_from(gaussian_rows(60, 40, 2024)), 38);
    for (int k = 1; k <= 38; ++k) EXPECT_LE(std::abs(est.values[static_cast<std::size_t>(k)]), 0.15) << "lag " << k;
}

TEST(CorrelationEstimate, MatchesLoopOracle) {
    const auto rows = gaussian_rows(25, 15, 9);
    const auto est = estimate_correlation(panel_from(rows), 13);
    const auto want = oracle::correlation(rows, 13);
    EXPECT_EQ(est.values[0], 1.0);
    EXPECT_NEAR(want[0], 1.0, 1e-12);
    for (int k = 1; k <= 13; ++k) EXPECT_NEAR(est.values[static_cast<std::size_t>(k)], want[static_cast<std::size_t>(k)], 1e-12);
    for (int k = 0; k <= 13; ++k) EXPECT_EQ(est.pair_counts[static_cast<std::size_t>(k)], 25L * (15 - k));
}

TEST(CorrelationEstimate, InvariantToPositiveColumnScaling) {
    auto rows = gaussian_rows(40, 10, 3);
    const auto before = estimate_correlation(panel_from(rows), 8);
    for (auto& r : rows) r[4] *= 37.5;
    const auto after = estimate_correlation(panel_from(rows), 8);
    for (std::size_t k = 0; k < before.values.size(); ++k) EXPECT_NEAR(before.values[k], after.values[k], 1e-12);
}

TEST(CorrelationEstimate, BoundedBySlack) {
    const auto est = estimate_correlation(panel_from(gaussian_rows(20, 30, 4)), 28);
    EXPECT_EQ(est.values[0], 1.0);
    for (double c : est.values) EXPECT_LE(std::abs(c), 1.0 + kCorrelationSlack);
    for (long n : est.pair_counts) EXPECT_GT(n, 0);
}

TEST(CorrelationEstimate, Errors) {
    const auto rows = gaussian_rows(10, 5, 5);
    EXPECT_EQ(code_of([&] { estimate_correlation(panel_from(rows), 4); }), ErrorCode::InsufficientData);
    auto flat = rows;
    for (auto& r : flat) r[2] = 0.01;
    EXPECT_EQ(code_of([&] { estimate_correlation(panel_from(flat), 2); }), ErrorCode::DegenerateMaturity);
    EXPECT_EQ(code_of([&] { estimate_correlation(panel_from({rows[0]}), 2); }), ErrorCode::InsufficientData);
}

TEST(PadeClassical, GeometricIsItsOwnApproximant) {
    const std::vector<double> c{1.0, 0.5, 0.25};
    const auto f = pade_classical(c, {0, 1, 0});
    EXPECT_NEAR(f.denominator()[1], -0.5, 1e-14);
    EXPECT_NEAR(f.numerator()[0], 1.0, 1e-14);
    EXPECT_NEAR(f.taylor(4)[3], 0.125, 1e-14);
}

TEST(PadeClassical, UncorrelatedLimit) {
    const std::vector<double> c{1.0, 0.0, 0.0, 0.0};
    const auto f = pade_classical(c, {0, 1, 0});
    EXPECT_EQ(f.denominator().degree(), 0);
    const auto t = f.taylor(6);
    EXPECT_NEAR(t[0], 1.0, 1e-15);
    for (int k = 1; k < 6; ++k) EXPECT_NEAR(t[static_cast<std::size_t>(k)], 0.0, 1e-15);
}

TEST(PadeClassical, RecoversPlantedOneTwo) {
    const std::vector<double> p{1.0, 0.3}, q{1.0, -0.5, 0.06};
    const auto c = oracle::taylor_divide(p, q, 4);
    const auto f = pade_classical(c, {1, 2, 0});
    for (int k = 0; k <= 1; ++k) EXPECT_NEAR(f.numerator()[k], p[static_cast<std::size_t>(k)], 1e-9);
    for (int k = 0; k <= 2; ++k) EXPECT_NEAR(f.denominator()[k], q[static_cast<std::size_t>(k)], 1e-9);
}

TEST(PadeClassical, InterpolatesInputs) {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int M = std::uniform_int_distribution<int>(0, 3)(rng);
        const int N = std::uniform_int_distribution<int>(1, 4)(rng);
        auto c = oracle::random_vector(rng, static_cast<std::size_t>(M + N + 1));
        c[0] = 1.0;
        RationalFunction f;
        try {
            f = pade_classical(c, {M, N, 0});
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
            continue;
        }
        // Linearized conditions (q c - p)_k = 0 for every draw.
        double scale = 0.0;
        for (double q : f.denominator().coefficients()) scale += std::abs(q);
        for (int k = 0; k <= M + N; ++k) {
            double r = -f.numerator()[k];
            for (int j = 0; j <= std::min(k, N); ++j) r += f.denominator()[j] * c[static_cast<std::size_t>(k - j)];
            EXPECT_NEAR(r, 0.0, 1e-13 * scale);
        }
        // The Taylor recurrence amplifies rounding by |pole|^-k, so re-expansion
        // is compared where the fit is a valid generating function.
        bool poles_outside = true;
        for (const Complex& r : f.denominator_roots()) poles_outside = poles_outside && std::abs(r) >= 1.0;
        if (!poles_outside) continue;
        ++checked;
        const auto t = f.taylor(M + N + 1);
        for (int k = 0; k <= M + N; ++k) EXPECT_NEAR(t[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)], 1e-10);
    }
    EXPECT_GE(checked, 50);
}

TEST(PadeClassical, RankDeficientSystemIsReported) {
    const std::vector<double> c{1.0, 0.0, 0.0};
    EXPECT_EQ(code_of([&] { pade_classical(c, {1, 1, 0}); }), ErrorCode::SingularSystem);
    EXPECT_EQ(code_of([&] { pade_classical(c, {1, 2, 0}); }), ErrorCode::InvalidArgument);
}

TEST(PadeGeneralized, KZeroEqualsClassical) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const int M = std::uniform_int_distribution<int>(0, 3)(rng);
        const int N = std::uniform_int_distribution<int>(1, 4)(rng);
        auto c = geometric(0.6, M + N + 1);
        for (auto& x : c) x += 0.05 * oracle::random_vector(rng, 1)[0];
        c[0] = 1.0;
        RationalFunction a, b;
        try {
            a = pade_classical(c, {M, N, 0});
            b = pade_generalized(c, {M, N, 0});
        } catch (const Error& e) {
            continue;
        }
        for (int k = 0; k <= M; ++k) EXPECT_NEAR(a.numerator()[k], b.numerator()[k], 1e-8);
        for (int k = 0; k <= N; ++k) EXPECT_NEAR(a.denominator()[k], b.denominator()[k], 1e-8);
    }
}

TEST(PadeGeneralized, RecoversGeometricWithExtraRows) {
    const auto c = geometric(0.9, 34);
    const auto f = pade_generalized(c, {0, 5, 28});
    const auto t = f.taylor(34);
    double ss = 0.0;
    for (int k = 0; k < 34; ++k) ss += std::pow(t[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)], 2);
    EXPECT_LE(std::sqrt(ss / 34.0), 1e-3);
}

TEST(PadeGeneralized, StableUnderSmallNoise) {
    const auto clean = geometric(0.9, 34);
    std::mt19937_64 rng(23);
    auto noisy = clean;
    for (std::size_t k = 1; k < noisy.size(); ++k) noisy[k] += 0.01 * oracle::random_vector(rng, 1)[0];
    const auto a = pade_generalized(clean, {0, 5, 28}).taylor(34);
    const auto b = pade_generalized(noisy, {0, 5, 28}).taylor(34);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 0.05) << "lag " << k;
}

TEST(PadeGeneralized, LargerDenominatorOnSameRowsNeverFitsWorse) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 30; ++trial) {
        auto c = geometric(0.8, 20);
        for (std::size_t k = 1; k < c.size(); ++k) c[k] += 0.03 * oracle::random_vector(rng, 1)[0];
        for (int N = 1; N <= 5; ++N) {
            const PadeOrder small{1, N, 18 - N}, large{1, N + 1, 17 - N};
            const double fs = pade_objective(c, small, pade_generalized(c, small));
            const double fl = pade_objective(c, large, pade_generalized(c, large));
            EXPECT_LE(fl, fs + 1e-12);
        }
    }
}

TEST(PadeGeneralized, UnitRootIsUnstable) {
    const std::vector<double> ones(6, 1.0);
    EXPECT_EQ(code_of([&] { pade_generalized(ones, {0, 1, 3}); }), ErrorCode::UnstableFit);
}

TEST(PadeGeneralized, OrderValidation) {
    const auto c = geometric(0.5, 5);
    EXPECT_EQ(code_of([&] { pade_generalized(c, {0, 0, 2}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { pade_generalized(c, {1, 2, 2}); }), ErrorCode::InvalidArgument);
}

TEST(Diagnostics, FlagsNegativeSymbol) {
    const auto ok = diagnose_fit(RationalFunction::from_polynomials(Polynomial({1.0}), Polynomial({1.0, -0.5})));
    EXPECT_TRUE(ok.positive);
    EXPECT_NEAR(ok.symbol_min, 1.0 / 3.0, 1e-9);
    const auto bad = diagnose_fit(RationalFunction::from_polynomials(Polynomial({1.0, 0.8}), Polynomial({1.0})));
    EXPECT_FALSE(bad.positive);
    EXPECT_NEAR(bad.symbol_min, -0.6, 1e-9);
}
