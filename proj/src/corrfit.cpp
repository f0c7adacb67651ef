#include "bondopt/corrfit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "bondopt/error.hpp"

namespace bondopt {

void validate(const PadeOrder& order, std::size_t available) {
    if (order.M < 0 || order.N < 1 || order.K < 0) {
        throw Error(ErrorCode::InvalidArgument, "Pade order needs M >= 0, N >= 1, K >= 0");
    }
    if (static_cast<std::size_t>(order.coefficients_used()) > available) {
        throw Error(ErrorCode::InvalidArgument, "Pade order [" + std::to_string(order.M) + "/" +
                                                    std::to_string(order.N) + "/" + std::to_string(order.K) +
                                                    "] needs " + std::to_string(order.coefficients_used()) +
                                                    " coefficients, have " + std::to_string(available));
    }
}

CorrelationEstimate estimate_correlation(const ReturnPanel& panel, int max_lag) {
    if (max_lag < 0) throw Error(ErrorCode::InvalidArgument, "negative max_lag");
    const Eigen::Index dates = panel.num_dates();
    const Eigen::Index mats = panel.num_maturities();
    if (dates < 2) throw Error(ErrorCode::InsufficientData, "correlation needs at least two dates");
    if (mats < max_lag + 2) {
        throw Error(ErrorCode::InsufficientData, "lag " + std::to_string(max_lag) + " needs at least " +
                                                     std::to_string(max_lag + 2) + " maturities");
    }
    const Eigen::MatrixXd e = standardized(panel);

    CorrelationEstimate est;
    est.max_lag = max_lag;
    est.values.resize(static_cast<std::size_t>(max_lag) + 1);
    est.pair_counts.resize(est.values.size());
    for (int lag = 0; lag <= max_lag; ++lag) {
        const Eigen::Index width = mats - lag;
        const double sum = (e.leftCols(width).array() * e.rightCols(width).array()).sum();
        const long pairs = static_cast<long>(dates) * static_cast<long>(width);
        if (pairs <= 0) throw Error(ErrorCode::InsufficientData, "no valid pairs at lag " + std::to_string(lag));
        est.pair_counts[static_cast<std::size_t>(lag)] = pairs;
        est.values[static_cast<std::size_t>(lag)] = sum / (static_cast<double>(dates - 1) * static_cast<double>(width));
    }
    est.values[0] = 1.0;
    return est;
}

namespace {

double coeff(std::span<const double> c, int i) { return i >= 0 ? c[static_cast<std::size_t>(i)] : 0.0; }

// Rows i = M+1 .. last of  sum_{j=1..N} q_j c(i-j) = -c(i).
void denominator_system(std::span<const double> c, const PadeOrder& order, int last, Eigen::MatrixXd& a,
                        Eigen::VectorXd& b) {
    const int rows = last - order.M;
    a.resize(rows, order.N);
    b.resize(rows);
    for (int r = 0; r < rows; ++r) {
        const int i = order.M + 1 + r;
        for (int j = 1; j <= order.N; ++j) a(r, j - 1) = coeff(c, i - j);
        b(r) = -coeff(c, i);
    }
}

// Drops highest-power coefficients that are rounding noise from the solve.
void trim_noise(std::vector<double>& c) {
    double big = 0.0;
    for (double x : c) big = std::max(big, std::abs(x));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * big) c.pop_back();
}

RationalFunction assemble(std::span<const double> c, const PadeOrder& order, const Eigen::VectorXd& q_tail) {
    std::vector<double> q(static_cast<std::size_t>(order.N) + 1);
    q[0] = 1.0;
    for (int j = 1; j <= order.N; ++j) q[static_cast<std::size_t>(j)] = q_tail(j - 1);
    std::vector<double> p(static_cast<std::size_t>(order.M) + 1, 0.0);
    for (int i = 0; i <= order.M; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= std::min(i, order.N); ++j) acc += q[static_cast<std::size_t>(j)] * coeff(c, i - j);
        p[static_cast<std::size_t>(i)] = acc;
    }
    trim_noise(p);
    trim_noise(q);
    return RationalFunction::from_polynomials(Polynomial(std::move(p)), Polynomial(std::move(q)));
}

void require_stable(const RationalFunction& f) {
    for (const Complex& r : f.denominator_roots()) {
        if (std::abs(std::abs(r) - 1.0) < kUnitCircleGuard) {
            throw Error(ErrorCode::UnstableFit, "fitted denominator root of modulus " + std::to_string(std::abs(r)) +
                                                    " lies on the unit circle");
        }
    }
}

}  // namespace

RationalFunction pade_classical(std::span<const double> c, const PadeOrder& order) {
    if (order.K != 0) throw Error(ErrorCode::InvalidArgument, "classical Pade requires K = 0");
    validate(order, c.size());
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    denominator_system(c, order, order.M + order.N, a, b);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw Error(ErrorCode::SingularSystem, "classical Pade system is rank deficient (rank " +
                                                   std::to_string(lu.rank()) + " of " + std::to_string(order.N) + ")");
    }
    return assemble(c, order, lu.solve(b));
}

RationalFunction pade_generalized(std::span<const double> c, const PadeOrder& order) {
    validate(order, c.size());
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    denominator_system(c, order, order.M + order.N + order.K, a, b);
    // The numerator coefficients are free, so their residuals vanish at the
    // optimum and only rows above M constrain the denominator.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(1e-12);
    if (cod.rank() < order.N) {
        throw Error(ErrorCode::SingularSystem, "generalized Pade system is rank deficient (rank " +
                                                   std::to_string(cod.rank()) + " of " + std::to_string(order.N) + ")");
    }
    RationalFunction f = assemble(c, order, cod.solve(b));
    require_stable(f);
    return f;
}

double pade_objective(std::span<const double> c, const PadeOrder& order, const RationalFunction& fit) {
    validate(order, c.size());
    const Polynomial& p = fit.numerator();
    const Polynomial& q = fit.denominator();
    const double q0 = q[0];
    double sum = 0.0;
    for (int i = 0; i <= order.M + order.N + order.K; ++i) {
        double r = -p[i] / q0;
        for (int j = 0; j <= std::min(i, q.degree()); ++j) r += q[j] / q0 * coeff(c, i - j);
        sum += r * r;
    }
    return sum;
}

FitDiagnostics diagnose_fit(const RationalFunction& chat) {
    constexpr int kGrid = 4096;
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGrid; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / kGrid;
        lo = std::min(lo, 2.0 * chat(std::polar(1.0, theta)).real() - 1.0);
    }
    return {lo, lo > 0.0};
}

}  // namespace bondopt
