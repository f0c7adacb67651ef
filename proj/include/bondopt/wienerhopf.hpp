#pragma once

// Spectral symbol of the normalized covariance operator and its Wiener-Hopf
// factorization.
//
// For a correlation generating function C(z) = sum_tau C(tau) z^tau the
// covariance operator of unit-variance securities is the Toeplitz operator
// P+ A x with symbol A(z) = C(z^-1) + C(z) - 1. Writing
// A = a0 prod(z - zeros) / prod(z - poles) and splitting zeros and poles by
// modulus gives explicit multipliers
//
//   exp(-A+) = prod(z - poles_out) / (a0 prod(z - zeros_out))
//   exp(-A-) = prod(z - poles_in)  / prod(z - zeros_in)
//
// with [P+ A x]^-1 = exp(-A+) x P+ exp(-A-) x. The multipliers are built from
// the classified roots directly; no complex logarithm is ever taken.

#include <vector>

#include "bondopt/laurent.hpp"

namespace bondopt {

struct SymbolSpectrum {
    RationalFunction chat;      // C(z), normalized so that C(0) == 1 exactly
    RationalFunction rational;  // A(z) as a ratio of polynomials in z
    LaurentSeries laurent;      // A_k for k = -T..T, A_k == A_-k
    double circle_min = 0.0;    // min over |z| = 1 of A
    double circle_max = 0.0;    // max over |z| = 1 of A
    int truncation = kDefaultTruncation;

    /// A_k for any k, from the Taylor coefficients of C.
    std::vector<double> coefficients(int count) const;
};

/// Builds A(z) from C(z). Throws PoleOnCircle when a pole of C lies within the
/// unit-circle guard band, PoleOnWrongSide for a pole inside the disk, and
/// NotNormalized unless C(0) = 1 within 1e-6 (C is then rescaled to C(0) = 1).
SymbolSpectrum build_symbol(const RationalFunction& chat, int truncation = kDefaultTruncation);

struct Factorization {
    SymbolSpectrum symbol;
    double scale = 1.0;  // a0; attributed entirely to the plus factor
    std::vector<Complex> zeros_outside;
    std::vector<Complex> zeros_inside;
    std::vector<Complex> poles_outside;
    std::vector<Complex> poles_inside;
    RationalFunction plus_factor;   // exp(-A+): zeros and poles outside the unit circle
    RationalFunction minus_factor;  // exp(-A-): zeros and poles inside, tends to 1 at infinity
    LaurentSeries plus_expansion;   // powers 0..T
    LaurentSeries minus_expansion;  // powers -T..0
    double product_identity_error = 0.0;  // max |exp(-A+) exp(-A-) A - 1| on 64 circle points
};

/// Throws RootOnCircle when a zero or pole of A lies in the guard band (the
/// operator is then not invertible) and NonPositiveSymbol when A is not
/// strictly positive on the circle.
Factorization factorize(const SymbolSpectrum& symbol);

/// Factorization of the identity symbol A = 1.
Factorization identity_factorization(int truncation = kDefaultTruncation);

/// exp(-A+) x P+ exp(-A-) x e, truncated to powers 0..T. `e` must lie in H+.
LaurentSeries apply_inverse(const Factorization& fac, const LaurentSeries& e, int truncation);

/// Dense solve of the T x T finite section M_ij = A_{i-j} against e; returns
/// powers 0..T-1. Ground truth for apply_inverse. Throws SingularMatrix when
/// the section is numerically singular.
LaurentSeries toeplitz_solve_oracle(const SymbolSpectrum& symbol, const LaurentSeries& e, int truncation);

}  // namespace bondopt
