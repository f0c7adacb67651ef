#pragma once

// Mean-variance allocation over bonds with maturity-difference correlations.
//
// Work is done on unit-variance securities S_t with expected returns
// E(t) = ER(t) / sqrt(V(t)); holdings Y(t) in S_t translate back to bond
// holdings X(t) = Y(t) / sqrt(V(t)). The investor maximizes
// U(Y) = <E|Y> - gamma <Y|P+ A x Y>, whose optimum is
// Y = (1 / 2 gamma) [P+ A x]^-1 E and U = (1 / 4 gamma) <E|[P+ A x]^-1 E>.

#include <optional>
#include <span>
#include <vector>

#include "bondopt/laurent.hpp"
#include "bondopt/wienerhopf.hpp"

namespace bondopt {

struct NormalizedExpectations {
    LaurentSeries series;               // E(t) at powers 0..n-1
    std::vector<double> expected;       // ER(t)
    std::vector<double> variances;      // V(t), all positive
};

struct Allocation {
    LaurentSeries normalized;    // Y
    std::vector<double> raw;     // X, one entry per maturity with a known variance
    std::optional<double> utility;
    std::optional<double> gamma; // absent for the sum-to-one variant
    bool sum_to_one = false;
    double variance = 0.0;
    double expected_return = 0.0;  // <E|Y>, per period
};

/// Throws NonPositiveVariance / InvalidArgument.
NormalizedExpectations normalize_expectations(std::span<const double> er, std::span<const double> v);

/// Unit variances: the series is taken as already normalized.
NormalizedExpectations normalized_from_series(const LaurentSeries& e);

/// Optimal allocation for risk aversion gamma > 0 with the operator inverted
/// through the factorization. The normalized series keeps powers 0..T; raw
/// holdings cover the maturities that carry a variance.
Allocation optimize(const Factorization& fac, const NormalizedExpectations& e, double gamma, int truncation);

/// <y | P+ A x y> = sum_ij y_i A_{i-j} y_j.
double portfolio_variance(const SymbolSpectrum& symbol, const LaurentSeries& y);

/// X(t) = Y(t) / sqrt(v(t)) for t = 0..v.size()-1.
std::vector<double> denormalize(const LaurentSeries& y, std::span<const double> v);

/// Rescales the allocation so that the bond holdings sum to one. Throws
/// ZeroNetPosition when the holdings sum to zero.
Allocation sum_to_one(const Allocation& alloc);

/// The optimum under zero correlations (A = 1), normalized to sum to one:
/// X(t) proportional to ER(t) / V(t).
Allocation benchmark_uncorrelated(const NormalizedExpectations& e, int truncation);

struct Ar1ClosedForm {
    RationalFunction yhat;
    double utility = 0.0;
};

/// Optimal allocation and utility when C(z) = 1/(1 - alpha z) and
/// E(z) = e0/(1 - beta z).
Ar1ClosedForm ar1_closed_form(double alpha, double beta, double e0, double gamma);

}  // namespace bondopt
