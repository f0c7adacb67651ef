#include "bondopt/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "bondopt/error.hpp"

namespace bondopt {

namespace {

constexpr double kMonth = 1.0 / 12.0;
constexpr double kGridSlack = 1e-9;  // years; absorbs rounding of printed tenors

double log_price(double yield, int months) { return -yield * (months * kMonth); }

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (s[i] < '0' || s[i] > '9') return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

void require_date(const std::string& s, std::size_t line_no) {
    if (!is_iso_date(s)) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad date '" + s + "'");
    }
}

void check_tenors(const std::vector<double>& tenors, const std::string& where) {
    for (std::size_t i = 0; i < tenors.size(); ++i) {
        if (!(tenors[i] > 0.0)) throw Error(ErrorCode::NonMonotoneTenors, where + ": tenor must be positive");
        if (i > 0 && !(tenors[i] > tenors[i - 1])) {
            throw Error(ErrorCode::NonMonotoneTenors, where + ": tenors are not strictly increasing");
        }
    }
}

struct GslSpline {
    gsl_interp_accel* acc = nullptr;
    gsl_spline* spline = nullptr;
    ~GslSpline() {
        if (spline) gsl_spline_free(spline);
        if (acc) gsl_interp_accel_free(acc);
    }
};

}  // namespace

void validate(const YieldCurve& curve) {
    if (!is_iso_date(curve.date)) throw Error(ErrorCode::InvalidArgument, "bad curve date '" + curve.date + "'");
    if (curve.tenors.empty() || curve.tenors.size() != curve.yields.size()) {
        throw Error(ErrorCode::InvalidArgument, "curve " + curve.date + ": tenor/yield size mismatch");
    }
    check_tenors(curve.tenors, "curve " + curve.date);
    for (double y : curve.yields)
        if (!std::isfinite(y)) throw Error(ErrorCode::InvalidArgument, "curve " + curve.date + ": non-finite yield");
}

ReturnPanel ReturnPanel::from_returns(std::vector<std::string> dates, std::vector<int> maturities,
                                      Eigen::MatrixXd returns) {
    if (static_cast<Eigen::Index>(dates.size()) != returns.rows() ||
        static_cast<Eigen::Index>(maturities.size()) != returns.cols()) {
        throw Error(ErrorCode::InvalidArgument, "return panel dimensions are inconsistent");
    }
    ReturnPanel p;
    p.dates = std::move(dates);
    p.maturities = std::move(maturities);
    p.returns = std::move(returns);
    const Eigen::Index n = p.returns.rows();
    p.means.resize(static_cast<std::size_t>(p.returns.cols()));
    p.stds.resize(p.means.size());
    for (Eigen::Index j = 0; j < p.returns.cols(); ++j) {
        const double mean = n > 0 ? p.returns.col(j).mean() : 0.0;
        p.means[static_cast<std::size_t>(j)] = mean;
        p.stds[static_cast<std::size_t>(j)] =
            n > 1 ? std::sqrt((p.returns.col(j).array() - mean).square().sum() / static_cast<double>(n - 1)) : 0.0;
    }
    return p;
}

ReturnPanel ReturnPanel::window(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 0 || first + count > returns.rows()) {
        throw Error(ErrorCode::InvalidArgument, "panel window out of range");
    }
    std::vector<std::string> d(dates.begin() + first, dates.begin() + first + count);
    return from_returns(std::move(d), maturities, returns.middleRows(first, count));
}

Eigen::MatrixXd standardized(const ReturnPanel& panel) {
    Eigen::MatrixXd e(panel.returns.rows(), panel.returns.cols());
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
        const double sd = panel.stds[static_cast<std::size_t>(j)];
        const double mean = panel.means[static_cast<std::size_t>(j)];
        if (!(sd > 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mean)) || sd == 0.0) {
            throw Error(ErrorCode::DegenerateMaturity,
                        "maturity " + std::to_string(panel.maturities[static_cast<std::size_t>(j)]) +
                            " months has zero return variance");
        }
        e.col(j) = (panel.returns.col(j).array() - mean) / sd;
    }
    return e;
}

std::vector<int> month_grid(int start, int end) {
    if (start < 1 || end < start) throw Error(ErrorCode::ConfigError, "maturity grid must satisfy 1 <= start <= end");
    std::vector<int> g;
    for (int m = start; m <= end; ++m) g.push_back(m);
    return g;
}

std::vector<YieldCurve> parse_curves(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::size_t header_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        header = split_csv(t);
        header_line = line_no;
        break;
    }
    if (header.empty()) throw Error(ErrorCode::EmptyInput, "curve file has no header");
    for (auto& h : header) std::transform(h.begin(), h.end(), h.begin(), ::tolower);

    const bool long_format = header == std::vector<std::string>{"date", "tenor_years", "yield"};
    std::vector<double> wide_tenors;
    if (!long_format) {
        if (header.size() < 2 || header[0] != "date") {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(header_line) + ": unrecognized header");
        }
        for (std::size_t i = 1; i < header.size(); ++i) {
            if (header[i].rfind("y_", 0) != 0) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(header_line) + ": wide column '" + header[i] + "' lacks y_ prefix");
            }
            wide_tenors.push_back(parse_number(header[i].substr(2), header_line));
        }
        check_tenors(wide_tenors, "header");
    }

    std::vector<YieldCurve> curves;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split_csv(t);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(header.size()) + " fields");
        }
        require_date(fields[0], line_no);
        if (long_format) {
            const double tenor = parse_number(fields[1], line_no);
            const double yield = parse_number(fields[2], line_no);
            if (curves.empty() || curves.back().date != fields[0]) {
                if (!seen.insert(fields[0]).second) {
                    throw Error(ErrorCode::DuplicateDate,
                                "line " + std::to_string(line_no) + ": date " + fields[0] + " appears in two blocks");
                }
                curves.push_back({fields[0], {}, {}});
            }
            auto& c = curves.back();
            if (!(tenor > 0.0) || (!c.tenors.empty() && !(tenor > c.tenors.back()))) {
                throw Error(ErrorCode::NonMonotoneTenors,
                            "line " + std::to_string(line_no) + ": tenors must be positive and strictly increasing");
            }
            c.tenors.push_back(tenor);
            c.yields.push_back(yield);
        } else {
            if (!seen.insert(fields[0]).second) {
                throw Error(ErrorCode::DuplicateDate, "line " + std::to_string(line_no) + ": duplicate date " + fields[0]);
            }
            YieldCurve c{fields[0], wide_tenors, {}};
            for (std::size_t i = 1; i < fields.size(); ++i) c.yields.push_back(parse_number(fields[i], line_no));
            curves.push_back(std::move(c));
        }
    }
    if (curves.empty()) throw Error(ErrorCode::EmptyInput, "curve file has no data rows");
    std::sort(curves.begin(), curves.end(), [](const YieldCurve& a, const YieldCurve& b) { return a.date < b.date; });
    return curves;
}

std::vector<YieldCurve> load_curves(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return parse_curves(in);
}

void write_curves(std::ostream& out, std::span<const YieldCurve> curves) {
    out << "date,tenor_years,yield\n";
    out << std::setprecision(17);
    for (const auto& c : curves)
        for (std::size_t i = 0; i < c.tenors.size(); ++i) out << c.date << ',' << c.tenors[i] << ',' << c.yields[i] << '\n';
}

YieldCurve spline_interpolate(const YieldCurve& curve, std::span<const int> grid_months) {
    validate(curve);
    const double lo = curve.tenors.front();
    const double hi = curve.tenors.back();
    YieldCurve out{curve.date, {}, {}};
    out.tenors.reserve(grid_months.size());
    for (int m : grid_months) {
        const double t = m * kMonth;
        if (t < lo - kGridSlack || t > hi + kGridSlack) {
            throw Error(ErrorCode::GridOutOfRange, "curve " + curve.date + ": " + std::to_string(m) +
                                                       " months lies outside the quoted tenor range");
        }
        out.tenors.push_back(t);
    }

    const std::size_t n = curve.tenors.size();
    if (n == 1) {
        out.yields.assign(out.tenors.size(), curve.yields.front());
        return out;
    }
    gsl_set_error_handler_off();
    GslSpline s;
    s.acc = gsl_interp_accel_alloc();
    s.spline = gsl_spline_alloc(n >= 3 ? gsl_interp_cspline : gsl_interp_linear, n);
    if (!s.acc || !s.spline || gsl_spline_init(s.spline, curve.tenors.data(), curve.yields.data(), n) != GSL_SUCCESS) {
        throw Error(ErrorCode::InvalidArgument, "curve " + curve.date + ": spline construction failed");
    }
    for (double t : out.tenors) out.yields.push_back(gsl_spline_eval(s.spline, std::clamp(t, lo, hi), s.acc));
    return out;
}

namespace {

// Yields at the union of grid months and their one-month-shorter neighbours.
std::map<int, double> yields_by_month(const YieldCurve& curve, std::span<const int> grid_months) {
    std::set<int> months;
    for (int m : grid_months) {
        if (m < 1) throw Error(ErrorCode::ConfigError, "grid months must be >= 1");
        months.insert(m);
        if (m > 1) months.insert(m - 1);
    }
    const std::vector<int> all(months.begin(), months.end());
    const YieldCurve interp = spline_interpolate(curve, all);
    std::map<int, double> out;
    for (std::size_t i = 0; i < all.size(); ++i) out[all[i]] = interp.yields[i];
    out[0] = 0.0;
    return out;
}

}  // namespace

ReturnPanel compute_returns(std::span<const YieldCurve> curves, std::span<const int> grid_months) {
    if (curves.size() < 2) throw Error(ErrorCode::InsufficientDates, "returns need at least two curves");
    if (grid_months.empty()) throw Error(ErrorCode::ConfigError, "empty maturity grid");
    std::vector<std::map<int, double>> y;
    y.reserve(curves.size());
    for (const auto& c : curves) y.push_back(yields_by_month(c, grid_months));

    const auto rows = static_cast<Eigen::Index>(curves.size() - 1);
    const auto cols = static_cast<Eigen::Index>(grid_months.size());
    Eigen::MatrixXd r(rows, cols);
    std::vector<std::string> dates;
    for (Eigen::Index s = 0; s < rows; ++s) {
        const auto& now = y[static_cast<std::size_t>(s)];
        const auto& next = y[static_cast<std::size_t>(s + 1)];
        for (Eigen::Index j = 0; j < cols; ++j) {
            const int m = grid_months[static_cast<std::size_t>(j)];
            r(s, j) = log_price(next.at(m - 1), m - 1) - log_price(now.at(m), m);
        }
        dates.push_back(curves[static_cast<std::size_t>(s + 1)].date);
    }
    return ReturnPanel::from_returns(std::move(dates), std::vector<int>(grid_months.begin(), grid_months.end()),
                                     std::move(r));
}

std::vector<double> expected_returns_static(const YieldCurve& curve, std::span<const int> grid_months) {
    const auto y = yields_by_month(curve, grid_months);
    std::vector<double> er;
    er.reserve(grid_months.size());
    for (int m : grid_months) er.push_back(log_price(y.at(m - 1), m - 1) - log_price(y.at(m), m));
    return er;
}

std::vector<double> variance_estimates(const ReturnPanel& panel) {
    if (panel.num_dates() < 2) throw Error(ErrorCode::InsufficientDates, "variance needs at least two dates");
    std::vector<double> v;
    v.reserve(panel.stds.size());
    for (std::size_t j = 0; j < panel.stds.size(); ++j) {
        const double sd = panel.stds[j];
        if (!(sd > 64.0 * std::numeric_limits<double>::epsilon() * std::abs(panel.means[j]))) {
            throw Error(ErrorCode::DegenerateMaturity, "maturity " + std::to_string(panel.maturities[j]) +
                                                           " months has zero return variance");
        }
        v.push_back(sd * sd);
    }
    return v;
}

}  // namespace bondopt
