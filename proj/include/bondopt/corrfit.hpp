#pragma once

// Maturity-difference correlation C(tau) and its rational (Pade) fits.

#include <span>
#include <vector>

#include "bondopt/laurent.hpp"
#include "bondopt/marketdata.hpp"

namespace bondopt {

/// Tolerance on |C(tau)| above one that sampling noise may produce.
inline constexpr double kCorrelationSlack = 0.05;

struct CorrelationEstimate {
    std::vector<double> values;     // C(0..max_lag); C(0) == 1
    std::vector<long> pair_counts;  // (date, maturity) pairs entering each lag
    int max_lag = 0;
};

/// Pade order [M/N/K]: numerator degree M, denominator degree N, and K extra
/// coefficients matched in the least-squares sense (K = 0 is classical).
struct PadeOrder {
    int M = 0;
    int N = 1;
    int K = 0;

    int coefficients_used() const noexcept { return M + N + K + 1; }
};

/// Throws InvalidArgument unless M >= 0, N >= 1, K >= 0 and M+N+K+1 <= available.
void validate(const PadeOrder& order, std::size_t available);

/// Average over (date, maturity) pairs of E(s,t) E(s,t+tau), where E are the
/// per-maturity demeaned returns divided by their sample standard deviation.
/// The lag sum is divided by (dates - 1) * (maturity pairs at that lag), the
/// normalization under which C(0) equals one; C(0) is then set to exactly 1.
CorrelationEstimate estimate_correlation(const ReturnPanel& panel, int max_lag);

/// Classical [M/N] Pade approximant with Q(0) = 1 matching c(0..M+N).
RationalFunction pade_classical(std::span<const double> c, const PadeOrder& order);

/// Generalized [M/N/K] Pade approximant: minimizes sum_i (Q c - P)_i^2 over
/// i = 0..M+N+K with Q(0) = 1. Reduces to pade_classical when K = 0.
RationalFunction pade_generalized(std::span<const double> c, const PadeOrder& order);

/// Sum of squared linearized residuals (Q c - P)_i over i = 0..M+N+K.
double pade_objective(std::span<const double> c, const PadeOrder& order, const RationalFunction& fit);

/// Validity diagnostic of a fitted generating function: the minimum over a
/// 4096-point circle grid of 2 Re C(e^{i theta}) - 1. A negative value means
/// the fit does not define a positive covariance symbol.
struct FitDiagnostics {
    double symbol_min = 0.0;
    bool positive = false;
};

FitDiagnostics diagnose_fit(const RationalFunction& chat);

}  // namespace bondopt
