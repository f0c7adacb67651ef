#pragma once

// Reference implementations used only by the tests. Each one is written
// from the defining formula, independently of the library code paths.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Coefficients of a two-sided series keyed by power.
using Sparse = std::map<int, double>;

inline Sparse convolve(const std::vector<double>& a, int amin, const std::vector<double>& b, int bmin) {
    Sparse out;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[amin + static_cast<int>(i) + bmin + static_cast<int>(j)] += a[i] * b[j];
    return out;
}

/// Taylor coefficients of num/den by long division (den[0] != 0).
inline std::vector<double> taylor_divide(const std::vector<double>& num, const std::vector<double>& den, int count) {
    std::vector<double> rem(static_cast<std::size_t>(count) + den.size(), 0.0);
    for (std::size_t i = 0; i < num.size() && i < rem.size(); ++i) rem[i] = num[i];
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    for (int k = 0; k < count; ++k) {
        const double q = rem[static_cast<std::size_t>(k)] / den[0];
        out[static_cast<std::size_t>(k)] = q;
        for (std::size_t j = 0; j < den.size(); ++j) rem[static_cast<std::size_t>(k) + j] -= q * den[j];
    }
    return out;
}

/// Gaussian elimination with partial pivoting on a dense copy of the matrix.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) throw std::runtime_error("singular");
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
        x[i] = s / m[i][i];
    }
    return x;
}

/// Solves sum_j a[|i-j|] y_j = e_i for i < n.
inline std::vector<double> toeplitz_solve(const std::vector<double>& a, const std::vector<double>& e, std::size_t n) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i > j ? i - j : j - i];
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n && i < e.size(); ++i) rhs[i] = e[i];
    return gauss_solve(std::move(m), std::move(rhs));
}

/// AR(1) optimum coefficients Y_t = k beta^(t-1) (beta - alpha) for t >= 1, Y_0 = k.
inline std::vector<double> ar1_allocation(double alpha, double beta, double e0, double gamma, int count) {
    const double k = e0 / (2.0 * gamma) * (1.0 - alpha * beta) / (1.0 - alpha * alpha);
    std::vector<double> y(static_cast<std::size_t>(count));
    y[0] = k;
    double b = 1.0;
    for (int t = 1; t < count; ++t) {
        y[static_cast<std::size_t>(t)] = k * b * (beta - alpha);
        b *= beta;
    }
    return y;
}

inline double ar1_utility(double alpha, double beta, double e0, double gamma) {
    return e0 * e0 / (4.0 * gamma) * (1.0 - alpha * beta) * (1.0 - alpha * beta) /
           ((1.0 - alpha * alpha) * (1.0 - beta * beta));
}

/// Natural cubic spline by the tridiagonal second-derivative system.
class NaturalSpline {
public:
    NaturalSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
        const std::size_t n = x_.size();
        if (n < 3) return;
        std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
    }

    double operator()(double t) const {
        std::size_t i = 0;
        while (i + 2 < x_.size() && t > x_[i + 1]) ++i;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

/// Lag sums of standardized columns, each divided by (rows - 1) * pairs.
inline std::vector<double> correlation(const std::vector<std::vector<double>>& panel, int max_lag) {
    const std::size_t rows = panel.size(), cols = panel[0].size();
    std::vector<std::vector<double>> z(rows, std::vector<double>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        double mean = 0.0;
        for (std::size_t s = 0; s < rows; ++s) mean += panel[s][j];
        mean /= static_cast<double>(rows);
        double ss = 0.0;
        for (std::size_t s = 0; s < rows; ++s) ss += (panel[s][j] - mean) * (panel[s][j] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(rows - 1));
        for (std::size_t s = 0; s < rows; ++s) z[s][j] = (panel[s][j] - mean) / sd;
    }
    std::vector<double> c;
    for (int tau = 0; tau <= max_lag; ++tau) {
        double acc = 0.0;
        for (std::size_t s = 0; s < rows; ++s)
            for (std::size_t t = 0; t + static_cast<std::size_t>(tau) < cols; ++t) acc += z[s][t] * z[s][t + static_cast<std::size_t>(tau)];
        c.push_back(acc / (static_cast<double>(rows - 1) * static_cast<double>(cols - static_cast<std::size_t>(tau))));
    }
    return c;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace oracle
