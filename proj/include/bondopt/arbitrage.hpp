#pragma once

// Arbitrage diagnostics for a rate structure.
//
// * Invertibility: P+ A x is invertible iff 0 lies outside
//   [ess inf A, ess sup A] on the unit circle.
// * Classical arbitrage: a zero-risk portfolio (kernel of P+ A x) with a
//   nonzero expected return, i.e. the kernel is not orthogonal to E.
// * Near arbitrage: q = <E|[P+ A x]^-1 E> exceeds a normality threshold. q is
//   4 gamma times the optimal utility and does not depend on gamma.

#include <optional>
#include <utility>

#include "bondopt/portfolio.hpp"
#include "bondopt/wienerhopf.hpp"

namespace bondopt {

/// Illustrative default for the near-arbitrage threshold; callers should supply their own.
inline constexpr double kDefaultNearArbitrageThreshold = 2.0;

enum class ClassicalArbitrage { absent, present, not_applicable };

const char* to_string(ClassicalArbitrage verdict);

struct CircleInterval {
    double min = 0.0;
    double max = 0.0;
};

struct InvertibilityVerdict {
    bool invertible = false;
    CircleInterval interval;
};

/// 0 notin [min - g, max + g] with g = 1e-9 (1 + |max|).
InvertibilityVerdict invertibility_check(const SymbolSpectrum& symbol);

struct KernelVerdict {
    ClassicalArbitrage classical = ClassicalArbitrage::absent;
    int kernel_dimension = 0;
};

/// Kernel of the T x T finite section approximated by singular vectors with
/// singular value below 1e-8 times the largest; arbitrage is present when one
/// of them overlaps E by more than 1e-6 ||E||. A non-invertible symbol whose
/// finite section shows no numerical null space is reported not_applicable.
KernelVerdict kernel_orthogonality(const SymbolSpectrum& symbol, const NormalizedExpectations& e, int truncation);

struct NearArbitrageVerdict {
    bool near_arbitrage = false;
    double quadratic_form = 0.0;
};

NearArbitrageVerdict near_arbitrage(const Factorization& fac, const NormalizedExpectations& e, double threshold,
                                    int truncation);

struct ArbitrageReport {
    bool invertible = false;
    CircleInterval circle_interval;
    int kernel_dimension_estimate = 0;
    ClassicalArbitrage classical_arbitrage = ClassicalArbitrage::absent;
    std::optional<double> quadratic_form;  // absent when the operator cannot be inverted
    double threshold = kDefaultNearArbitrageThreshold;
    bool near_arbitrage = false;
};

/// Runs all three checks. The factorization is attempted only for invertible symbols.
ArbitrageReport assess_arbitrage(const SymbolSpectrum& symbol, const NormalizedExpectations& e, double threshold,
                                 int truncation);

}  // namespace bondopt
