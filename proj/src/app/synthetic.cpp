#include "bondopt/app/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "bondopt/error.hpp"

namespace bondopt::app {

namespace {

// Box-Muller on top of mt19937_64 so the stream is identical on every platform.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Symmetric square root of the Toeplitz correlation matrix; tolerates the
// singular decay = +-1 cases where Cholesky would fail.
Eigen::MatrixXd correlation_root(int n, double decay) {
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::pow(decay, std::abs(i - j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double base_yield(double years) { return 0.06 + 0.02 * (1.0 - std::exp(-years / 2.0)); }

std::string add_months(const std::string& iso_date, int months) {
    int y = 0, m = 0, d = 0;
    if (iso_date.size() != 10 || std::sscanf(iso_date.c_str(), "%4d-%2d-%2d", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31) {
        throw Error(ErrorCode::ConfigError, "start date must be YYYY-MM-DD, got '" + iso_date + "'");
    }
    const int total = y * 12 + (m - 1) + months;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", total / 12, total % 12 + 1, std::min(d, 28));
    return buf;
}

std::vector<YieldCurve> generate_curves(const GeneratorSettings& s, int max_months) {
    if (max_months < 2) throw Error(ErrorCode::ConfigError, "synthetic curves need at least two tenors");
    if (s.dates < 1) throw Error(ErrorCode::ConfigError, "synthetic curves need at least one date");
    const int g = max_months;
    const double kappa = s.mean_reversion;

    // log P_base(t) for t = 0..g; deviations d(t) for t = 0..g with d(0) = 0.
    std::vector<double> log_base(g + 1, 0.0);
    for (int t = 1; t <= g; ++t) log_base[t] = -base_yield(t / 12.0) * t / 12.0;
    std::vector<double> dev(g + 1, 0.0);

    // eps(t) for t = 2..g+1: the bond that has t months left at the start of the period.
    const int field = g;
    const Eigen::MatrixXd root = correlation_root(field, s.corr_decay);
    NormalStream normal(s.seed);
    Eigen::VectorXd z(field);

    std::vector<YieldCurve> curves;
    curves.reserve(static_cast<std::size_t>(s.dates));
    for (int k = 0; k < s.dates; ++k) {
        YieldCurve c;
        c.date = add_months(s.start_date, k);
        for (int t = 1; t <= g; ++t) {
            c.tenors.push_back(t / 12.0);
            c.yields.push_back(-(log_base[t] + dev[t]) / (t / 12.0));
        }
        curves.push_back(std::move(c));

        for (int i = 0; i < field; ++i) z(i) = normal.next();
        const Eigen::VectorXd eps = root * z;
        // The bond with g+1 months left is off the curve; it carries its
        // neighbour's yield deviation.
        const double dev_next = dev[g] * (g + 1.0) / g;
        std::vector<double> next(g + 1, 0.0);
        for (int t = 2; t <= g + 1; ++t) {
            const double d = t <= g ? dev[t] : dev_next;
            const double sigma = s.vol * (t - 1) / 12.0;
            next[t - 1] = (1.0 - kappa) * d + sigma * eps(t - 2);
        }
        dev = std::move(next);
    }
    return curves;
}

}  // namespace bondopt::app
