#include "bondopt/arbitrage.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bondopt/error.hpp"

namespace bondopt {

namespace {

constexpr double kSingularTolerance = 1e-8;
constexpr double kOrthogonalityTolerance = 1e-6;
constexpr int kMaxKernelSection = 1024;

}  // namespace

const char* to_string(ClassicalArbitrage verdict) {
    switch (verdict) {
        case ClassicalArbitrage::absent: return "absent";
        case ClassicalArbitrage::present: return "present";
        case ClassicalArbitrage::not_applicable: return "not-applicable";
    }
    return "unknown";
}

InvertibilityVerdict invertibility_check(const SymbolSpectrum& symbol) {
    InvertibilityVerdict v;
    v.interval = {symbol.circle_min, symbol.circle_max};
    const double guard = 1e-9 * (1.0 + std::abs(symbol.circle_max));
    v.invertible = symbol.circle_min - guard > 0.0 || symbol.circle_max + guard < 0.0;
    return v;
}

KernelVerdict kernel_orthogonality(const SymbolSpectrum& symbol, const NormalizedExpectations& e, int truncation) {
    if (truncation < 1 || truncation > kMaxKernelSection) {
        throw Error(ErrorCode::InvalidArgument, "kernel section size must lie in [1, 1024]");
    }
    if (invertibility_check(symbol).invertible) return {ClassicalArbitrage::absent, 0};

    const std::vector<double> a = symbol.coefficients(truncation);
    Eigen::MatrixXd m(truncation, truncation);
    for (int i = 0; i < truncation; ++i)
        for (int j = 0; j < truncation; ++j) m(i, j) = a[static_cast<std::size_t>(std::abs(i - j))];
    // Symmetric, so singular values are |eigenvalues| and singular vectors are eigenvectors.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "eigen-decomposition of the Toeplitz section failed");
    }
    const Eigen::VectorXd sv = eig.eigenvalues().cwiseAbs();
    const double cutoff = kSingularTolerance * sv.maxCoeff();

    Eigen::VectorXd ev(truncation);
    for (int i = 0; i < truncation; ++i) ev(i) = e.series[i];
    const double e_norm = ev.norm();

    KernelVerdict verdict;
    for (int k = 0; k < truncation; ++k) {
        if (sv(k) >= cutoff) continue;
        ++verdict.kernel_dimension;
        if (std::abs(eig.eigenvectors().col(k).dot(ev)) > kOrthogonalityTolerance * e_norm) {
            verdict.classical = ClassicalArbitrage::present;
        }
    }
    if (verdict.kernel_dimension == 0) verdict.classical = ClassicalArbitrage::not_applicable;
    return verdict;
}

NearArbitrageVerdict near_arbitrage(const Factorization& fac, const NormalizedExpectations& e, double threshold,
                                    int truncation) {
    if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "near-arbitrage threshold must be positive");
    const double q = inner_product(e.series, apply_inverse(fac, e.series, truncation));
    return {q > threshold, q};
}

ArbitrageReport assess_arbitrage(const SymbolSpectrum& symbol, const NormalizedExpectations& e, double threshold,
                                 int truncation) {
    ArbitrageReport r;
    r.threshold = threshold;
    const InvertibilityVerdict inv = invertibility_check(symbol);
    r.invertible = inv.invertible;
    r.circle_interval = inv.interval;
    const KernelVerdict kernel = kernel_orthogonality(symbol, e, std::min(truncation, kMaxKernelSection));
    r.kernel_dimension_estimate = kernel.kernel_dimension;
    r.classical_arbitrage = kernel.classical;
    if (inv.invertible) {
        const NearArbitrageVerdict near = near_arbitrage(factorize(symbol), e, threshold, truncation);
        r.quadratic_form = near.quadratic_form;
        r.near_arbitrage = near.near_arbitrage;
    } else if (!(threshold > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "near-arbitrage threshold must be positive");
    }
    return r;
}

}  // namespace bondopt
