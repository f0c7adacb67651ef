#pragma once

// Truncated Laurent series, real polynomials and rational functions.
//
// Series are finite windows onto two-sided formal series sum_k a_k z^k. The
// space of square-summable series carries the scalar product
// <a|b> = sum_k a_k b_k (coefficients are real throughout), and the projector
// P+ keeps the non-negative powers. Rational functions are the concrete
// multipliers used by the factorization code: they keep both a coefficient
// form (for exact expansion/evaluation) and a root form (for classifying
// zeros and poles against the unit circle).

#include <complex>
#include <span>
#include <vector>

namespace bondopt {

using Complex = std::complex<double>;

/// Number of retained powers on each side of z^0 unless configured otherwise.
inline constexpr int kDefaultTruncation = 256;

/// A root r with ||r| - 1| < kUnitCircleGuard is treated as lying on the circle.
inline constexpr double kUnitCircleGuard = 1e-6;

/// Backward-error tolerance every computed polynomial root must satisfy.
inline constexpr double kRootResidualTolerance = 1e-10;

/// Inclusive range of powers [lo, hi].
struct IndexRange {
    int lo = 0;
    int hi = 0;
};

class LaurentSeries {
public:
    /// The zero series.
    LaurentSeries();

    /// Coefficients of z^min_index, z^(min_index+1), ... Must be non-empty and finite.
    explicit LaurentSeries(std::vector<double> coefficients, int min_index = 0);

    static LaurentSeries monomial(int power, double value = 1.0);

    int min_index() const noexcept { return min_index_; }
    int max_index() const noexcept { return min_index_ + static_cast<int>(coeffs_.size()) - 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }

    /// Coefficient of z^power; zero outside the stored window.
    double operator[](int power) const noexcept;

    bool is_zero() const noexcept;

    /// Drops exact-zero coefficients at both edges. The zero series trims to 0*z^0.
    LaurentSeries trimmed() const;

    /// Coefficients outside `range` are discarded; missing ones are zero-filled.
    LaurentSeries restricted(IndexRange range) const;

    /// Coefficients at powers range.lo..range.hi as a dense vector.
    std::vector<double> dense(IndexRange range) const;

    LaurentSeries operator-() const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(double s, const LaurentSeries& a);

    /// Equal after alignment and trimming of exact-zero edges.
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);

private:
    std::vector<double> coeffs_;
    int min_index_ = 0;
};

/// Cauchy product restricted to the powers in `trunc`.
LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b, IndexRange trunc);

/// Full Cauchy product.
LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b);

double inner_product(const LaurentSeries& a, const LaurentSeries& b);

/// Zeroes every negative power.
LaurentSeries project_plus(const LaurentSeries& a);

class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    /// Ascending-power coefficients. Trailing (highest-power) exact zeros are trimmed.
    explicit Polynomial(std::vector<double> ascending);

    /// scale * prod (z - r). Non-real roots must come in conjugate pairs.
    static Polynomial from_roots(std::span<const Complex> roots, double scale = 1.0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double operator[](int k) const noexcept;
    double leading() const noexcept { return coeffs_.back(); }

    Complex operator()(Complex z) const;
    double operator()(double x) const;

    /// Coefficients in descending order, i.e. z^degree * p(1/z).
    Polynomial reversed() const;

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& p);

private:
    std::vector<double> coeffs_;
};

/// All complex roots with multiplicity, from the eigenvalues of the companion
/// matrix followed by Newton polishing. Real roots come first in ascending
/// order, then conjugate pairs (upper half-plane member first). Throws
/// ConvergenceFailure when a root's backward error exceeds kRootResidualTolerance.
std::vector<Complex> roots(const Polynomial& p);

enum class Direction { plus, minus };

/// scale * prod(z - zeros) / prod(z - poles), held in both root and coefficient form.
class RationalFunction {
public:
    /// The constant 1.
    RationalFunction();

    static RationalFunction constant(double value);
    static RationalFunction from_roots(double scale, std::vector<Complex> zeros,
                                       std::vector<Complex> poles);
    /// Roots are computed from the polynomials; the coefficient form is kept verbatim.
    static RationalFunction from_polynomials(Polynomial numerator, Polynomial denominator);
    /// Both forms supplied by the caller, who guarantees they describe the same function.
    static RationalFunction from_parts(Polynomial numerator, Polynomial denominator, std::vector<Complex> zeros,
                                       std::vector<Complex> poles);

    double scale() const noexcept { return scale_; }
    std::span<const Complex> numerator_roots() const noexcept { return zeros_; }
    std::span<const Complex> denominator_roots() const noexcept { return poles_; }
    const Polynomial& numerator() const noexcept { return numerator_; }
    const Polynomial& denominator() const noexcept { return denominator_; }

    /// Evaluation through the coefficient form.
    Complex operator()(Complex z) const;

    /// Evaluation through the root form.
    Complex evaluate_factored(Complex z) const;

    /// Taylor coefficients f(0), f(1), ..., f(count-1) about z = 0.
    std::vector<double> taylor(int count) const;

private:
    double scale_ = 1.0;
    std::vector<Complex> zeros_;
    std::vector<Complex> poles_;
    Polynomial numerator_;
    Polynomial denominator_;
};

/// Series expansion of a rational multiplier.
///
/// plus:  power series in z^0..z^T, convergent on |z| <= 1; every pole must lie
///        outside the unit circle.
/// minus: series in z^-1 reaching down to z^-T, convergent on |z| >= 1; every
///        pole must lie inside. When the numerator degree exceeds the
///        denominator degree the series also carries the polynomial part.
/// Throws PoleOnWrongSide when a pole is on the wrong side of (or within the
/// guard band of) the unit circle.
LaurentSeries expand_rational(const RationalFunction& f, Direction direction, int truncation);

}  // namespace bondopt
