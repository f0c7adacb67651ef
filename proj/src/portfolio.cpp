#include "bondopt/portfolio.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bondopt/error.hpp"

namespace bondopt {

NormalizedExpectations normalize_expectations(std::span<const double> er, std::span<const double> v) {
    if (er.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "expected returns and variances differ in length");
    if (er.empty()) throw Error(ErrorCode::InvalidArgument, "no expected returns");
    std::vector<double> e(er.size());
    for (std::size_t t = 0; t < er.size(); ++t) {
        if (!(v[t] > 0.0)) throw Error(ErrorCode::NonPositiveVariance, "variance at index " + std::to_string(t) + " is not positive");
        e[t] = er[t] / std::sqrt(v[t]);
    }
    return {LaurentSeries(std::move(e), 0), {er.begin(), er.end()}, {v.begin(), v.end()}};
}

NormalizedExpectations normalized_from_series(const LaurentSeries& e) {
    if (e.min_index() < 0) {
        for (int k = e.min_index(); k < 0; ++k)
            if (e[k] != 0.0) throw Error(ErrorCode::InvalidArgument, "expectation series has negative powers");
    }
    const int hi = std::max(0, e.max_index());
    LaurentSeries series = e.restricted({0, hi});
    std::vector<double> er = series.dense({0, hi});
    return {std::move(series), er, std::vector<double>(er.size(), 1.0)};
}

double portfolio_variance(const SymbolSpectrum& symbol, const LaurentSeries& y) {
    if (y.is_zero()) return 0.0;
    const LaurentSeries ay = multiply(symbol.laurent, y, {std::max(0, y.min_index()), y.max_index()});
    return inner_product(y, ay);
}

std::vector<double> denormalize(const LaurentSeries& y, std::span<const double> v) {
    std::vector<double> x(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (!(v[t] > 0.0)) throw Error(ErrorCode::NonPositiveVariance, "variance at index " + std::to_string(t) + " is not positive");
        x[t] = y[static_cast<int>(t)] / std::sqrt(v[t]);
    }
    return x;
}

Allocation optimize(const Factorization& fac, const NormalizedExpectations& e, double gamma, int truncation) {
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "risk aversion must be positive");
    const LaurentSeries inv = apply_inverse(fac, e.series, truncation);
    Allocation a;
    a.normalized = (0.5 / gamma) * inv;
    a.gamma = gamma;
    a.utility = 0.25 / gamma * inner_product(e.series, inv);
    a.raw = denormalize(a.normalized, e.variances);
    a.variance = portfolio_variance(fac.symbol, a.normalized);
    a.expected_return = inner_product(e.series, a.normalized);
    return a;
}

Allocation sum_to_one(const Allocation& alloc) {
    const double total = std::accumulate(alloc.raw.begin(), alloc.raw.end(), 0.0);
    double gross = 0.0;
    for (double x : alloc.raw) gross += std::abs(x);
    if (alloc.raw.empty() || std::abs(total) <= 1e-12 * std::max(1.0, gross)) {
        throw Error(ErrorCode::ZeroNetPosition, "holdings sum to zero; cannot normalize to one");
    }
    const double k = 1.0 / total;
    Allocation out;
    out.normalized = k * alloc.normalized;
    out.raw.reserve(alloc.raw.size());
    for (double x : alloc.raw) out.raw.push_back(k * x);
    out.sum_to_one = true;
    out.variance = k * k * alloc.variance;
    out.expected_return = k * alloc.expected_return;
    return out;
}

Allocation benchmark_uncorrelated(const NormalizedExpectations& e, int truncation) {
    return sum_to_one(optimize(identity_factorization(truncation), e, 0.5, truncation));
}

Ar1ClosedForm ar1_closed_form(double alpha, double beta, double e0, double gamma) {
    if (!(std::abs(alpha) < 1.0) || !(std::abs(beta) < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "AR(1) parameters must lie in (-1, 1)");
    }
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "risk aversion must be positive");
    const double k = e0 / (2.0 * gamma) * (1.0 - alpha * beta) / (1.0 - alpha * alpha);
    Ar1ClosedForm out;
    out.yhat = RationalFunction::from_polynomials(Polynomial({k, -k * alpha}), Polynomial({1.0, -beta}));
    out.utility = e0 * e0 / (4.0 * gamma) * (1.0 - alpha * beta) * (1.0 - alpha * beta) /
                  ((1.0 - alpha * alpha) * (1.0 - beta * beta));
    return out;
}

}  // namespace bondopt
