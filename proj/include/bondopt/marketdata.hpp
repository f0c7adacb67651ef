#pragma once

// Zero-coupon curve ingestion and the monthly return panel.
//
// Conventions: tenors in years, maturities on the panel in whole months,
// continuously compounded zero yields so that P(t) = exp(-y(t) * t) and the
// holding period is exactly one month (1/12 year).

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace bondopt {

struct YieldCurve {
    std::string date;             // ISO-8601, YYYY-MM-DD
    std::vector<double> tenors;   // years, strictly increasing, positive
    std::vector<double> yields;   // decimal, continuously compounded
};

/// Throws NonMonotoneTenors / InvalidArgument when the curve breaks its invariants.
void validate(const YieldCurve& curve);

/// One-month log returns R(t, s) of zero-coupon bonds.
///
/// Row s holds the returns earned from curve s to curve s+1 and is labelled
/// with the date of curve s+1; column j is the bond with maturities[j] months
/// to maturity at the start of the period.
struct ReturnPanel {
    std::vector<std::string> dates;
    std::vector<int> maturities;
    Eigen::MatrixXd returns;
    std::vector<double> means;
    std::vector<double> stds;  // sample (n - 1) standard deviations; 0 with a single row

    static ReturnPanel from_returns(std::vector<std::string> dates, std::vector<int> maturities,
                                    Eigen::MatrixXd returns);

    Eigen::Index num_dates() const noexcept { return returns.rows(); }
    Eigen::Index num_maturities() const noexcept { return returns.cols(); }

    /// Rows [first, first + count) with statistics recomputed on that window.
    ReturnPanel window(Eigen::Index first, Eigen::Index count) const;
};

/// Returns demeaned and divided by their sample standard deviation, column by
/// column. Throws DegenerateMaturity for a column with zero variance.
Eigen::MatrixXd standardized(const ReturnPanel& panel);

/// Months start..end inclusive.
std::vector<int> month_grid(int start, int end);

/// Parses the long (`date,tenor_years,yield`) or wide (`date,y_<tenor>,...`)
/// CSV layout, auto-detected from the header. Curves are returned sorted by date.
std::vector<YieldCurve> parse_curves(std::istream& in);
std::vector<YieldCurve> load_curves(const std::filesystem::path& path);

/// Writes the long layout with round-trip precision.
void write_curves(std::ostream& out, std::span<const YieldCurve> curves);

/// Natural cubic spline through the curve's knots evaluated at grid/12 years.
/// Throws GridOutOfRange rather than extrapolating.
YieldCurve spline_interpolate(const YieldCurve& curve, std::span<const int> grid_months);

/// log P(t-1mo, s+1) - log P(t, s) for every consecutive pair of curves.
ReturnPanel compute_returns(std::span<const YieldCurve> curves, std::span<const int> grid_months);

/// One-month expected returns when the curve is expected to stay put:
/// log P(t-1mo) - log P(t) on the same curve.
std::vector<double> expected_returns_static(const YieldCurve& curve, std::span<const int> grid_months);

/// Unbiased per-maturity variance of the panel's returns.
std::vector<double> variance_estimates(const ReturnPanel& panel);

}  // namespace bondopt
