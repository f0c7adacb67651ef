#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bondopt/arbitrage.hpp"
#include "bondopt/error.hpp"
#include "support/oracles.hpp"
#include "support/symbols.hpp"

using namespace bondopt;

namespace {

RationalFunction ar1(double alpha) {
    return RationalFunction::from_polynomials(Polynomial({1.0}), Polynomial({1.0, -alpha}));
}

RationalFunction polynomial_chat(std::vector<double> c) {
    return RationalFunction::from_polynomials(Polynomial(std::move(c)), Polynomial({1.0}));
}

LaurentSeries geometric_series(double beta, int T) {
    std::vector<double> e;
    for (int k = 0; k <= T; ++k) e.push_back(std::pow(beta, k));
    return LaurentSeries(e, 0);
}

}  // namespace

TEST(Invertibility, Ar1Interval) {
    const auto v = invertibility_check(build_symbol(ar1(0.5), 64));
    EXPECT_TRUE(v.invertible);
    EXPECT_NEAR(v.interval.min, 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(v.interval.max, 3.0, 1e-9);
}

TEST(Invertibility, Identity) {
    const auto v = invertibility_check(build_symbol(RationalFunction(), 8));
    EXPECT_TRUE(v.invertible);
    EXPECT_EQ(v.interval.min, 1.0);
    EXPECT_EQ(v.interval.max, 1.0);
}

TEST(Invertibility, TouchingZeroIsNotInvertible) {
    const auto v = invertibility_check(build_symbol(polynomial_chat({1.0, 0.5}), 16));
    EXPECT_FALSE(v.invertible);
    EXPECT_NEAR(v.interval.min, 0.0, 1e-12);
    EXPECT_NEAR(v.interval.max, 2.0, 1e-12);
}

TEST(Kernel, InvertibleSymbolHasNoKernel) {
    const auto k = kernel_orthogonality(build_symbol(ar1(0.5), 32), normalized_from_series(LaurentSeries({1.0})), 32);
    EXPECT_EQ(k.classical, ClassicalArbitrage::absent);
    EXPECT_EQ(k.kernel_dimension, 0);
}

TEST(Kernel, OrthogonalExpectationsAreNotArbitrage) {
    // A = 1 + 2 cos(theta); the 8 x 8 section has kernel (1, -1, 0, 1, -1, 0, 1, -1).
    const SymbolSpectrum s = build_symbol(polynomial_chat({1.0, 1.0}), 8);
    const auto k = kernel_orthogonality(s, normalized_from_series(LaurentSeries({1.0, 1.0})), 8);
    EXPECT_EQ(k.kernel_dimension, 1);
    EXPECT_EQ(k.classical, ClassicalArbitrage::absent);
}

TEST(Kernel, KernelAlignedExpectationsAreArbitrage) {
    const SymbolSpectrum s = build_symbol(polynomial_chat({1.0, 1.0}), 8);
    const auto k = kernel_orthogonality(s, normalized_from_series(LaurentSeries({1.0, -1.0, 0.0, 1.0, -1.0, 0.0, 1.0, -1.0})), 8);
    EXPECT_EQ(k.kernel_dimension, 1);
    EXPECT_EQ(k.classical, ClassicalArbitrage::present);
}

TEST(Kernel, NoNumericalNullSpace) {
    // Not invertible, but the 6 x 6 section of 1 + 2 cos(theta) is regular.
    const SymbolSpectrum s = build_symbol(polynomial_chat({1.0, 1.0}), 6);
    const auto k = kernel_orthogonality(s, normalized_from_series(LaurentSeries({1.0})), 6);
    EXPECT_EQ(k.kernel_dimension, 0);
    EXPECT_EQ(k.classical, ClassicalArbitrage::not_applicable);
}

TEST(NearArbitrage, ThresholdDecides) {
    const int T = 256;
    const Factorization f = factorize(build_symbol(ar1(0.5), T));
    const auto e = normalized_from_series(geometric_series(0.25, T));
    const auto loose = near_arbitrage(f, e, 2.0, T);
    EXPECT_NEAR(loose.quadratic_form, 1.0888888888888888, 1e-10);
    EXPECT_FALSE(loose.near_arbitrage);
    EXPECT_TRUE(near_arbitrage(f, e, 1.0, T).near_arbitrage);
    EXPECT_EQ(near_arbitrage(f, normalized_from_series(LaurentSeries({0.0})), 2.0, T).quadratic_form, 0.0);
}

TEST(NearArbitrage, QuadraticFormIsFourGammaUtility) {
    std::mt19937_64 rng(51);
    const int T = 128;
    const Factorization f = factorize(build_symbol(fixtures::random_chat(rng), T));
    const LaurentSeries e(oracle::random_vector(rng, 20), 0);
    const auto q = near_arbitrage(f, normalized_from_series(e), 2.0, T).quadratic_form;
    for (double gamma : {0.1, 1.0, 7.0}) {
        const Allocation a = optimize(f, normalized_from_series(e), gamma, T);
        EXPECT_NEAR(4.0 * gamma * *a.utility, q, 1e-10 * std::max(1.0, q));
    }
    const auto q3 = near_arbitrage(f, normalized_from_series(3.0 * e), 2.0, T).quadratic_form;
    EXPECT_NEAR(q3, 9.0 * q, 1e-10 * std::max(1.0, q3));
    EXPECT_GT(q, 0.0);
}

TEST(Assess, FullReport) {
    const int T = 128;
    const auto r = assess_arbitrage(build_symbol(ar1(0.5), T), normalized_from_series(geometric_series(0.25, T)), 2.0, T);
    EXPECT_TRUE(r.invertible);
    EXPECT_EQ(r.classical_arbitrage, ClassicalArbitrage::absent);
    ASSERT_TRUE(r.quadratic_form.has_value());
    EXPECT_NEAR(*r.quadratic_form, 1.0888888888888888, 1e-9);
    EXPECT_FALSE(r.near_arbitrage);

    const auto bad = assess_arbitrage(build_symbol(polynomial_chat({1.0, 0.5}), 16), normalized_from_series(LaurentSeries({1.0})), 2.0, 16);
    EXPECT_FALSE(bad.invertible);
    EXPECT_FALSE(bad.quadratic_form.has_value());
    EXPECT_STREQ(to_string(ClassicalArbitrage::present), "present");
}
