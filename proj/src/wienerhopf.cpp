#include "bondopt/wienerhopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "bondopt/error.hpp"

namespace bondopt {

namespace {

constexpr int kCircleGrid = 4096;
constexpr int kIdentityPoints = 64;
constexpr double kIdentityTolerance = 1e-8;
constexpr double kNormalizationTolerance = 1e-6;
constexpr int kMaxOracleSize = 2048;

double symbol_on_circle(const RationalFunction& chat, double theta) {
    return 2.0 * chat(std::polar(1.0, theta)).real() - 1.0;
}

// Golden-section search for an extremum of the symbol on [a, b].
double refine_extremum(const RationalFunction& chat, double a, double b, bool minimize) {
    const double sign = minimize ? 1.0 : -1.0;
    auto f = [&](double t) { return sign * symbol_on_circle(chat, t); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return sign * std::min({f1, f2});
}

std::pair<double, double> circle_range(const RationalFunction& chat) {
    const double step = 2.0 * std::numbers::pi / kCircleGrid;
    int imin = 0, imax = 0;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (int k = 0; k < kCircleGrid; ++k) {
        const double v = symbol_on_circle(chat, k * step);
        if (v < vmin) { vmin = v; imin = k; }
        if (v > vmax) { vmax = v; imax = k; }
    }
    vmin = std::min(vmin, refine_extremum(chat, (imin - 1) * step, (imin + 1) * step, true));
    vmax = std::max(vmax, refine_extremum(chat, (imax - 1) * step, (imax + 1) * step, false));
    return {vmin, vmax};
}

bool in_guard_band(Complex r) { return std::abs(std::abs(r) - 1.0) < kUnitCircleGuard; }

}  // namespace

std::vector<double> SymbolSpectrum::coefficients(int count) const {
    std::vector<double> a = chat.taylor(count);
    if (!a.empty()) a[0] = 2.0 * a[0] - 1.0;
    return a;
}

SymbolSpectrum build_symbol(const RationalFunction& chat, int truncation) {
    if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be positive");
    for (const Complex& pole : chat.denominator_roots()) {
        if (in_guard_band(pole)) {
            throw Error(ErrorCode::PoleOnCircle, "correlation function has a pole of modulus " +
                                                     std::to_string(std::abs(pole)) + " on the unit circle");
        }
        if (std::abs(pole) < 1.0) {
            throw Error(ErrorCode::PoleOnWrongSide, "correlation function has a pole inside the unit disk (modulus " +
                                                        std::to_string(std::abs(pole)) + ")");
        }
    }
    const Polynomial& p_in = chat.numerator();
    const Polynomial& q_in = chat.denominator();
    const double c0 = p_in[0] / q_in[0];
    if (!(std::abs(c0 - 1.0) <= kNormalizationTolerance)) {
        throw Error(ErrorCode::NotNormalized, "C(0) = " + std::to_string(c0) + ", expected 1");
    }
    // Q(0) = 1 and P(0) = 1 up to the rescaling by 1/C(0).
    const Polynomial q = (1.0 / q_in[0]) * q_in;
    const Polynomial p = (1.0 / (q_in[0] * c0)) * p_in;

    SymbolSpectrum sym;
    sym.truncation = truncation;
    if (c0 == 1.0 && q_in[0] == 1.0) {
        sym.chat = chat;
    } else {
        std::vector<Complex> poles(chat.denominator_roots().begin(), chat.denominator_roots().end());
        std::vector<Complex> zeros(chat.numerator_roots().begin(), chat.numerator_roots().end());
        sym.chat = RationalFunction::from_parts(p, q, std::move(zeros), std::move(poles));
    }

    // B(z) = A(z) Q(z) Q(1/z) = P(z)Q(1/z) + P(1/z)Q(z) - Q(z)Q(1/z), symmetric in k.
    const int n = q.degree();
    const int d = std::max(p.degree(), n);
    std::vector<double> b(static_cast<std::size_t>(d) + 1, 0.0);
    double magnitude = 0.0;
    for (int k = 0; k <= d; ++k) {
        double acc = 0.0;
        for (int j = 0; j + k <= d; ++j) {
            const double t1 = p[j + k] * q[j];
            const double t2 = p[j] * q[j + k];
            const double t3 = q[j + k] * q[j];
            acc += t1 + t2 - t3;
            magnitude = std::max({magnitude, std::abs(t1), std::abs(t2), std::abs(t3)});
        }
        b[static_cast<std::size_t>(k)] = acc;
    }
    int d_eff = d;
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    while (d_eff > 0 && std::abs(b[static_cast<std::size_t>(d_eff)]) <= tol) --d_eff;

    if (d_eff == 0 && std::abs(b[0]) <= tol) {
        sym.rational = RationalFunction::constant(0.0);
    } else {
        // A = z^(n - d_eff) * [z^d_eff B(z)] / [Q(z) Qrev(z)], Qrev(z) = z^n Q(1/z).
        std::vector<double> num(static_cast<std::size_t>(2 * d_eff) + 1);
        for (int k = -d_eff; k <= d_eff; ++k) num[static_cast<std::size_t>(k + d_eff)] = b[static_cast<std::size_t>(std::abs(k))];
        std::vector<Complex> zeros = d_eff > 0 ? roots(Polynomial(num)) : std::vector<Complex>{};
        std::vector<Complex> q_roots = n > 0 ? roots(q) : std::vector<Complex>{};
        std::vector<Complex> poles = q_roots;
        for (const Complex& r : q_roots) poles.push_back(1.0 / r);
        Polynomial num_poly(num);
        Polynomial den_poly = q * q.reversed();
        const int shift = n - d_eff;
        if (shift > 0) {
            zeros.insert(zeros.end(), static_cast<std::size_t>(shift), Complex(0.0));
            std::vector<double> z(static_cast<std::size_t>(shift) + 1, 0.0);
            z.back() = 1.0;
            num_poly = num_poly * Polynomial(z);
        } else if (shift < 0) {
            poles.insert(poles.end(), static_cast<std::size_t>(-shift), Complex(0.0));
            std::vector<double> z(static_cast<std::size_t>(-shift) + 1, 0.0);
            z.back() = 1.0;
            den_poly = den_poly * Polynomial(z);
        }
        sym.rational = RationalFunction::from_parts(std::move(num_poly), std::move(den_poly), std::move(zeros),
                                                    std::move(poles));
    }

    const std::vector<double> a = sym.coefficients(truncation + 1);
    std::vector<double> two_sided(static_cast<std::size_t>(2 * truncation) + 1);
    for (int k = 0; k <= truncation; ++k) {
        two_sided[static_cast<std::size_t>(truncation + k)] = a[static_cast<std::size_t>(k)];
        two_sided[static_cast<std::size_t>(truncation - k)] = a[static_cast<std::size_t>(k)];
    }
    sym.laurent = LaurentSeries(std::move(two_sided), -truncation);
    std::tie(sym.circle_min, sym.circle_max) = circle_range(sym.chat);
    return sym;
}

Factorization factorize(const SymbolSpectrum& symbol) {
    const RationalFunction& a = symbol.rational;
    if (a.numerator().is_zero()) throw Error(ErrorCode::NonPositiveSymbol, "symbol is identically zero");
    for (const Complex& r : a.numerator_roots()) {
        if (in_guard_band(r)) {
            throw Error(ErrorCode::RootOnCircle, "symbol has a zero of modulus " + std::to_string(std::abs(r)) +
                                                     " on the unit circle; the operator is not invertible");
        }
    }
    for (const Complex& r : a.denominator_roots()) {
        if (in_guard_band(r)) {
            throw Error(ErrorCode::RootOnCircle, "symbol has a pole of modulus " + std::to_string(std::abs(r)) +
                                                     " on the unit circle");
        }
    }
    if (!(symbol.circle_min > 0.0)) {
        throw Error(ErrorCode::NonPositiveSymbol,
                    "symbol minimum on the unit circle is " + std::to_string(symbol.circle_min));
    }

    Factorization fac;
    fac.symbol = symbol;
    fac.scale = a.scale();
    for (const Complex& r : a.numerator_roots()) (std::abs(r) > 1.0 ? fac.zeros_outside : fac.zeros_inside).push_back(r);
    for (const Complex& r : a.denominator_roots()) (std::abs(r) > 1.0 ? fac.poles_outside : fac.poles_inside).push_back(r);
    if (fac.zeros_inside.size() != fac.poles_inside.size()) {
        throw Error(ErrorCode::NonPositiveSymbol, "symbol has nonzero winding number about the origin");
    }
    fac.plus_factor = RationalFunction::from_roots(1.0 / fac.scale, fac.poles_outside, fac.zeros_outside);
    fac.minus_factor = RationalFunction::from_roots(1.0, fac.poles_inside, fac.zeros_inside);
    fac.plus_expansion = expand_rational(fac.plus_factor, Direction::plus, symbol.truncation);
    fac.minus_expansion = expand_rational(fac.minus_factor, Direction::minus, symbol.truncation);

    // Checked against A evaluated from C directly, independent of the root finder.
    double worst = 0.0;
    for (int k = 0; k < kIdentityPoints; ++k) {
        const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / kIdentityPoints);
        const Complex az = symbol.chat(z) + symbol.chat(1.0 / z) - 1.0;
        worst = std::max(worst, std::abs(fac.plus_factor.evaluate_factored(z) *
                                             fac.minus_factor.evaluate_factored(z) * az - 1.0));
    }
    fac.product_identity_error = worst;
    if (!(worst <= kIdentityTolerance)) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "factorization product identity violated by " + std::to_string(worst));
    }
    return fac;
}

Factorization identity_factorization(int truncation) {
    return factorize(build_symbol(RationalFunction(), truncation));
}

LaurentSeries apply_inverse(const Factorization& fac, const LaurentSeries& e, int truncation) {
    if (truncation < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation");
    for (int k = e.min_index(); k < 0; ++k) {
        if (e[k] != 0.0) throw Error(ErrorCode::InvalidArgument, "expectation series has negative powers");
    }
    const LaurentSeries inner = multiply(fac.minus_expansion, e, {0, truncation});  // P+ exp(-A-) e
    return multiply(fac.plus_expansion, inner, {0, truncation});
}

LaurentSeries toeplitz_solve_oracle(const SymbolSpectrum& symbol, const LaurentSeries& e, int truncation) {
    if (truncation < 1 || truncation > kMaxOracleSize) {
        throw Error(ErrorCode::InvalidArgument, "oracle size must lie in [1, 2048]");
    }
    for (int k = e.min_index(); k < 0; ++k) {
        if (e[k] != 0.0) throw Error(ErrorCode::InvalidArgument, "expectation series has negative powers");
    }
    const std::vector<double> a = symbol.coefficients(truncation);
    Eigen::MatrixXd m(truncation, truncation);
    for (int i = 0; i < truncation; ++i)
        for (int j = 0; j < truncation; ++j) m(i, j) = a[static_cast<std::size_t>(std::abs(i - j))];
    Eigen::VectorXd rhs(truncation);
    for (int i = 0; i < truncation; ++i) rhs(i) = e[i];

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (!(lu.rcond() > 1e-13)) {
        throw Error(ErrorCode::SingularMatrix, "Toeplitz section is numerically singular (rcond " +
                                                   std::to_string(lu.rcond()) + ")");
    }
    const Eigen::VectorXd y = lu.solve(rhs);
    return LaurentSeries(std::vector<double>(y.data(), y.data() + y.size()), 0);
}

}  // namespace bondopt
