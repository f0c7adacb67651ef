#include "bondopt/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "bondopt/error.hpp"

namespace bondopt {

// ---------------------------------------------------------------------------
// LaurentSeries

LaurentSeries::LaurentSeries() : coeffs_{0.0}, min_index_(0) {}

LaurentSeries::LaurentSeries(std::vector<double> coefficients, int min_index)
    : coeffs_(std::move(coefficients)), min_index_(min_index) {
    if (coeffs_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "Laurent series needs at least one coefficient");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorCode::InvalidArgument, "Laurent series coefficient is not finite");
        }
    }
}

LaurentSeries LaurentSeries::monomial(int power, double value) {
    return LaurentSeries({value}, power);
}

double LaurentSeries::operator[](int power) const noexcept {
    const long offset = static_cast<long>(power) - min_index_;
    if (offset < 0 || offset >= static_cast<long>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(offset)];
}

bool LaurentSeries::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

LaurentSeries LaurentSeries::trimmed() const {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
    if (first == coeffs_.end()) return LaurentSeries();
    auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](double c) { return c != 0.0; });
    const int lo = min_index_ + static_cast<int>(first - coeffs_.begin());
    return LaurentSeries(std::vector<double>(first, last.base()), lo);
}

std::vector<double> LaurentSeries::dense(IndexRange range) const {
    if (range.hi < range.lo) {
        throw Error(ErrorCode::InvalidArgument, "empty index range");
    }
    std::vector<double> out(static_cast<std::size_t>(range.hi - range.lo + 1));
    for (int k = range.lo; k <= range.hi; ++k) out[static_cast<std::size_t>(k - range.lo)] = (*this)[k];
    return out;
}

LaurentSeries LaurentSeries::restricted(IndexRange range) const {
    return LaurentSeries(dense(range), range.lo);
}

LaurentSeries LaurentSeries::operator-() const { return -1.0 * (*this); }

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    const IndexRange r{std::min(a.min_index(), b.min_index()), std::max(a.max_index(), b.max_index())};
    std::vector<double> out(static_cast<std::size_t>(r.hi - r.lo + 1));
    for (int k = r.lo; k <= r.hi; ++k) out[static_cast<std::size_t>(k - r.lo)] = a[k] + b[k];
    return LaurentSeries(std::move(out), r.lo);
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-1.0 * b); }

LaurentSeries operator*(double s, const LaurentSeries& a) {
    std::vector<double> out(a.coeffs_);
    for (double& c : out) c *= s;
    return LaurentSeries(std::move(out), a.min_index_);
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    const LaurentSeries ta = a.trimmed();
    const LaurentSeries tb = b.trimmed();
    return ta.min_index_ == tb.min_index_ && ta.coeffs_ == tb.coeffs_;
}

LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b, IndexRange trunc) {
    if (trunc.hi < trunc.lo) {
        throw Error(ErrorCode::InvalidArgument, "empty truncation range");
    }
    std::vector<double> out(static_cast<std::size_t>(trunc.hi - trunc.lo + 1), 0.0);
    const auto ac = a.coefficients();
    const auto bc = b.coefficients();
    for (std::size_t i = 0; i < ac.size(); ++i) {
        if (ac[i] == 0.0) continue;
        const int pa = a.min_index() + static_cast<int>(i);
        // powers pa + pb inside trunc  <=>  pb in [trunc.lo - pa, trunc.hi - pa]
        const int pb_lo = std::max(b.min_index(), trunc.lo - pa);
        const int pb_hi = std::min(b.max_index(), trunc.hi - pa);
        for (int pb = pb_lo; pb <= pb_hi; ++pb) {
            out[static_cast<std::size_t>(pa + pb - trunc.lo)] +=
                ac[i] * bc[static_cast<std::size_t>(pb - b.min_index())];
        }
    }
    return LaurentSeries(std::move(out), trunc.lo);
}

LaurentSeries multiply(const LaurentSeries& a, const LaurentSeries& b) {
    return multiply(a, b, {a.min_index() + b.min_index(), a.max_index() + b.max_index()});
}

double inner_product(const LaurentSeries& a, const LaurentSeries& b) {
    const int lo = std::max(a.min_index(), b.min_index());
    const int hi = std::min(a.max_index(), b.max_index());
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += a[k] * b[k];
    return sum;
}

LaurentSeries project_plus(const LaurentSeries& a) {
    if (a.max_index() < 0) return LaurentSeries();
    return a.restricted({std::max(0, a.min_index()), a.max_index()});
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "polynomial coefficient is not finite");
    }
}

namespace {

std::vector<Complex> expand_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{1.0};
    for (const Complex& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return c;
}

}  // namespace

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double scale) {
    const std::vector<Complex> c = expand_roots(roots);
    std::vector<double> re(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) re[k] = scale * c[k].real();
    return Polynomial(std::move(re));
}

double Polynomial::operator[](int k) const noexcept {
    if (k < 0 || k > degree()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

Complex Polynomial::operator()(Complex z) const {
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::reversed() const {
    return Polynomial(std::vector<double>(coeffs_.rbegin(), coeffs_.rend()));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return Polynomial(std::move(out));
}

Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> out(p.coeffs_);
    for (double& c : out) c *= s;
    return Polynomial(std::move(out));
}

// ---------------------------------------------------------------------------
// Root finding

namespace {

// |p(r)| relative to the evaluation scale sum |p_k| |r|^k.
constexpr double kClusterRadius = 1e-3;

double backward_error(const Polynomial& p, Complex r) {
    const double m = std::abs(r);
    double scale = 0.0;
    for (auto it = p.coefficients().rbegin(); it != p.coefficients().rend(); ++it) scale = scale * m + std::abs(*it);
    if (scale == 0.0) return 0.0;
    return std::abs(p(r)) / scale;
}

Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    double err = backward_error(p, r);
    for (int it = 0; it < 8 && err > 0.0; ++it) {
        const Complex d = dp(r);
        if (d == Complex(0.0)) break;
        const Complex next = r - p(r) / d;
        const double next_err = backward_error(p, next);
        if (!(next_err < err)) break;
        r = next;
        err = next_err;
    }
    return r;
}

Polynomial derivative(const Polynomial& p) {
    if (p.degree() == 0) return Polynomial();
    std::vector<double> d(static_cast<std::size_t>(p.degree()));
    for (int k = 1; k <= p.degree(); ++k) d[static_cast<std::size_t>(k - 1)] = k * p[k];
    return Polynomial(std::move(d));
}

// Pairs each upper-half-plane root with its nearest lower-half-plane partner and
// replaces both by an exact conjugate pair; near-real leftovers are snapped to the axis.
std::vector<Complex> symmetrize(std::vector<Complex> raw) {
    constexpr double kRealTol = 1e-12;
    auto is_real = [](Complex r) { return std::abs(r.imag()) <= kRealTol * std::max(1.0, std::abs(r)); };

    std::vector<double> reals;
    std::vector<Complex> upper, lower;
    for (const Complex& r : raw) {
        if (is_real(r)) reals.push_back(r.real());
        else if (r.imag() > 0) upper.push_back(r);
        else lower.push_back(r);
    }
    std::vector<Complex> pairs;
    std::vector<bool> used(lower.size(), false);
    for (const Complex& u : upper) {
        std::size_t best = lower.size();
        double best_d = 0.0;
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(lower[j] - std::conj(u));
            if (best == lower.size() || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == lower.size()) {
            reals.push_back(u.real());
            continue;
        }
        used[best] = true;
        const Complex l = lower[best];
        pairs.emplace_back(0.5 * (u.real() + l.real()), 0.5 * (u.imag() - l.imag()));
    }
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (!used[j]) reals.push_back(lower[j].real());

    std::sort(reals.begin(), reals.end());
    std::sort(pairs.begin(), pairs.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<Complex> out;
    out.reserve(raw.size());
    for (double r : reals) out.emplace_back(r, 0.0);
    for (const Complex& p : pairs) {
        out.push_back(p);
        out.push_back(std::conj(p));
    }
    return out;
}

}  // namespace

std::vector<Complex> roots(const Polynomial& p) {
    if (p.degree() < 1) {
        throw Error(ErrorCode::InvalidArgument, "root finding needs a polynomial of degree >= 1");
    }
    const auto c = p.coefficients();
    std::size_t zeros = 0;
    while (c[zeros] == 0.0) ++zeros;

    std::vector<Complex> found(zeros, Complex(0.0));
    const Polynomial q(std::vector<double>(c.begin() + static_cast<long>(zeros), c.end()));
    const int n = q.degree();
    if (n >= 1) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -q[i] / q.leading();
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::ConvergenceFailure, "companion eigenvalue iteration did not converge");
        }
        // Members of a cluster keep their eigenvalues: polishing them one at a
        // time drifts the cluster mean, which the eigenvalues get right.
        const Polynomial dq = derivative(q);
        const auto& ev = solver.eigenvalues();
        for (int i = 0; i < n; ++i) {
            bool isolated = true;
            for (int j = 0; j < n; ++j)
                if (j != i && std::abs(ev[i] - ev[j]) < kClusterRadius * std::max(1.0, std::abs(ev[i]))) isolated = false;
            found.push_back(isolated ? newton_polish(q, dq, ev[i]) : ev[i]);
        }
    }

    std::vector<Complex> out = symmetrize(std::move(found));
    for (const Complex& r : out) {
        const double err = backward_error(p, r);
        if (!(err <= kRootResidualTolerance)) {
            throw Error(ErrorCode::ConvergenceFailure,
                        "root backward error " + std::to_string(err) + " exceeds tolerance");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction() : numerator_({1.0}), denominator_({1.0}) {}

RationalFunction RationalFunction::constant(double value) {
    RationalFunction f;
    f.scale_ = value;
    f.numerator_ = Polynomial({value});
    return f;
}

namespace {

void require_conjugate_closed(std::span<const Complex> rs, const char* what) {
    constexpr double kTol = 1e-9;
    std::vector<bool> used(rs.size(), false);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (used[i] || rs[i].imag() == 0.0) continue;
        bool matched = false;
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (j == i || used[j]) continue;
            if (std::abs(rs[j] - std::conj(rs[i])) <= kTol * std::max(1.0, std::abs(rs[i]))) {
                used[i] = used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " roots are not closed under conjugation");
        }
    }
}

}  // namespace

RationalFunction RationalFunction::from_roots(double scale, std::vector<Complex> zeros,
                                              std::vector<Complex> poles) {
    if (!std::isfinite(scale)) throw Error(ErrorCode::InvalidArgument, "rational scale is not finite");
    require_conjugate_closed(zeros, "numerator");
    require_conjugate_closed(poles, "denominator");
    RationalFunction f;
    f.scale_ = scale;
    f.numerator_ = Polynomial::from_roots(zeros, scale);
    f.denominator_ = Polynomial::from_roots(poles);
    f.zeros_ = std::move(zeros);
    f.poles_ = std::move(poles);
    return f;
}

RationalFunction RationalFunction::from_polynomials(Polynomial numerator, Polynomial denominator) {
    if (denominator.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero denominator polynomial");
    RationalFunction f;
    f.scale_ = numerator.leading() / denominator.leading();
    if (numerator.degree() >= 1 && !numerator.is_zero()) f.zeros_ = roots(numerator);
    if (denominator.degree() >= 1) f.poles_ = roots(denominator);
    f.numerator_ = std::move(numerator);
    f.denominator_ = std::move(denominator);
    return f;
}

RationalFunction RationalFunction::from_parts(Polynomial numerator, Polynomial denominator,
                                              std::vector<Complex> zeros, std::vector<Complex> poles) {
    if (denominator.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero denominator polynomial");
    if (!numerator.is_zero() && static_cast<int>(zeros.size()) != numerator.degree()) {
        throw Error(ErrorCode::InvalidArgument, "numerator root count does not match its degree");
    }
    if (static_cast<int>(poles.size()) != denominator.degree()) {
        throw Error(ErrorCode::InvalidArgument, "denominator root count does not match its degree");
    }
    RationalFunction f;
    f.scale_ = numerator.leading() / denominator.leading();
    f.numerator_ = std::move(numerator);
    f.denominator_ = std::move(denominator);
    f.zeros_ = std::move(zeros);
    f.poles_ = std::move(poles);
    return f;
}

Complex RationalFunction::operator()(Complex z) const { return numerator_(z) / denominator_(z); }

Complex RationalFunction::evaluate_factored(Complex z) const {
    Complex v = scale_;
    for (const Complex& r : zeros_) v *= (z - r);
    for (const Complex& r : poles_) v /= (z - r);
    return v;
}

namespace {

// Power-series coefficients of num/den about 0; requires den[0] != 0.
std::vector<double> series_divide(const Polynomial& num, const Polynomial& den, int count) {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    const double d0 = den[0];
    for (int k = 0; k < count; ++k) {
        double acc = num[k];
        const int jmax = std::min(k, den.degree());
        for (int j = 1; j <= jmax; ++j) acc -= den[j] * out[static_cast<std::size_t>(k - j)];
        out[static_cast<std::size_t>(k)] = acc / d0;
    }
    return out;
}

}  // namespace

std::vector<double> RationalFunction::taylor(int count) const {
    if (denominator_[0] == 0.0) {
        throw Error(ErrorCode::PoleOnWrongSide, "rational function has a pole at z = 0");
    }
    return series_divide(numerator_, denominator_, count);
}

LaurentSeries expand_rational(const RationalFunction& f, Direction direction, int truncation) {
    if (truncation < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation");
    for (const Complex& pole : f.denominator_roots()) {
        const double m = std::abs(pole);
        const bool ok = direction == Direction::plus ? m >= 1.0 + kUnitCircleGuard : m <= 1.0 - kUnitCircleGuard;
        if (!ok) {
            throw Error(ErrorCode::PoleOnWrongSide,
                        std::string("pole of modulus ") + std::to_string(m) + " not allowed for " +
                            (direction == Direction::plus ? "plus" : "minus") + " expansion");
        }
    }
    if (f.numerator().is_zero()) return LaurentSeries();

    if (direction == Direction::plus) {
        return LaurentSeries(series_divide(f.numerator(), f.denominator(), truncation + 1), 0);
    }

    // In w = 1/z: f = w^(q-p) * rev(num)(w) / rev(den)(w), with rev(den)(0) = leading(den) != 0.
    const int p = f.numerator().degree();
    const int q = f.denominator().degree();
    const int shift = q - p;
    const int top = std::max(0, -shift);  // highest positive power present
    const int count = truncation - shift + 1;  // w-series terms needed to reach z^-truncation
    std::vector<double> g;
    if (count > 0) g = series_divide(f.numerator().reversed(), f.denominator().reversed(), count);
    std::vector<double> out(static_cast<std::size_t>(truncation + top + 1), 0.0);
    // z^(-m) carries g[m - shift]; out[0] is z^-truncation.
    for (int m = -top; m <= truncation; ++m) {
        const int gi = m - shift;
        if (gi >= 0 && gi < static_cast<int>(g.size())) out[static_cast<std::size_t>(truncation - m)] = g[static_cast<std::size_t>(gi)];
    }
    return LaurentSeries(std::move(out), -truncation);
}

}  // namespace bondopt
