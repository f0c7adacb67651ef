#include "bondopt/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "bondopt/app/synthetic.hpp"

namespace bondopt::app {

namespace {

constexpr int kMinBacktestWindow = 12;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) config_error(std::string(flag) + ": cannot parse '" + item + "' as a number");
        out.push_back(v);
    }
    if (out.empty()) config_error(std::string(flag) + " needs at least one number");
    return out;
}

int as_int(double v, const char* flag) {
    if (v != std::floor(v) || std::abs(v) > 1e9) config_error(std::string(flag) + " expects integers");
    return static_cast<int>(v);
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) config_error("--grid expects start..end, got '" + text + "'");
    const auto a = parse_numbers(text.substr(0, dots), "--grid");
    const auto b = parse_numbers(text.substr(dots + 2), "--grid");
    if (a.size() != 1 || b.size() != 1) config_error("--grid expects start..end, got '" + text + "'");
    return {as_int(a[0], "--grid"), as_int(b[0], "--grid")};
}

PadeOrder parse_pade(const std::string& text) {
    const auto v = parse_numbers(text, "--pade");
    if (v.size() != 3) config_error("--pade expects M,N,K");
    return {as_int(v[0], "--pade"), as_int(v[1], "--pade"), as_int(v[2], "--pade")};
}

std::vector<int> extended_grid(const RunConfig& c) {
    std::vector<int> g;
    if (c.grid_start > 1) g.push_back(c.grid_start - 1);
    for (int m = c.grid_start; m <= c.grid_end; ++m) g.push_back(m);
    return g;
}

Table roots_table(const std::vector<std::pair<std::string, std::span<const Complex>>>& groups) {
    Table t{{"kind", "re", "im", "modulus"}, {}};
    for (const auto& [kind, roots] : groups)
        for (const Complex& r : roots) t.rows.push_back({kind, r.real(), r.imag(), std::abs(r)});
    return t;
}

double realized(const std::vector<double>& x, const ReturnPanel& panel, Eigen::Index row) {
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) total += x[j] * panel.returns(row, static_cast<Eigen::Index>(j));
    return total;
}

}  // namespace

StageError::StageError(std::string stage, ErrorCode code, const std::string& message)
    : std::runtime_error("[stage=" + stage + "] " + message), stage_(std::move(stage)), code_(code), detail_(message) {}

DataStages load_data(const RunConfig& c) {
    DataStages d;
    d.curves = in_stage("load", [&] { return load_curves(c.input); });
    const std::vector<int> grid = c.grid();
    const std::vector<int> ext = extended_grid(c);
    d.interpolated = in_stage("interpolate", [&] {
        std::vector<YieldCurve> out;
        out.reserve(d.curves.size());
        for (const auto& curve : d.curves) {
            try {
                out.push_back(spline_interpolate(curve, ext));
            } catch (const Error& e) {
                throw Error(e.code(), "curve " + curve.date + ": " + e.what());
            }
        }
        return out;
    });
    d.panel = in_stage("returns", [&] { return compute_returns(d.curves, grid); });
    return d;
}

FitStages fit_correlation(const ReturnPanel& panel, const RunConfig& c) {
    FitStages f;
    f.estimate = in_stage("estimate", [&] { return estimate_correlation(panel, c.effective_max_lag()); });
    f.chat = in_stage("fit", [&] { return pade_generalized(f.estimate.values, c.pade); });
    f.diagnostics = in_stage("fit", [&] { return diagnose_fit(f.chat); });
    return f;
}

RationalFunction injected_chat(const ModelSettings& m) {
    return RationalFunction::from_polynomials(Polynomial(m.chat_numerator), Polynomial(m.chat_denominator));
}

NormalizedExpectations injected_expectations(const ModelSettings& m, int truncation) {
    std::vector<double> e = m.expectations;
    if (m.geometric_e0) {
        e.assign(static_cast<std::size_t>(truncation) + 1, 0.0);
        double v = *m.geometric_e0;
        for (auto& x : e) {
            x = v;
            v *= m.geometric_beta;
        }
    }
    return normalized_from_series(LaurentSeries(std::move(e), 0));
}

SummaryStats summarize(std::span<const double> x) {
    SummaryStats s;
    if (x.empty()) return s;
    const double n = static_cast<double>(x.size());
    s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.variance = x.size() > 1 ? ss / (n - 1.0) : 0.0;
    s.std = std::sqrt(s.variance);
    s.min = *std::min_element(x.begin(), x.end());
    return s;
}

BacktestResult run_backtest(const DataStages& data, const RunConfig& c) {
    const ReturnPanel& panel = data.panel;
    const Eigen::Index rows = panel.num_dates();
    const int window = c.backtest_window;
    if (!c.fit_once && (window < kMinBacktestWindow || rows < window + 1)) {
        throw StageError("backtest", ErrorCode::WindowTooShort,
                         std::string(to_string(ErrorCode::WindowTooShort)) + std::string(": walk-forward needs a window of at least ") +
                             std::to_string(kMinBacktestWindow) + " months and one more month to realize; window " +
                             std::to_string(window) + ", panel " + std::to_string(rows) + " months");
    }
    if (c.fit_once && rows < kMinBacktestWindow) {
        throw StageError("backtest", ErrorCode::WindowTooShort,
                         std::string(to_string(ErrorCode::WindowTooShort)) + std::string(": fit-once backtest needs at least ") +
                             std::to_string(kMinBacktestWindow) + " months, panel has " + std::to_string(rows));
    }
    const std::vector<int> grid = c.grid();
    const int T = c.truncation;

    struct Fitted {
        Factorization fac;
        std::vector<double> variances;
    };
    auto fit_on = [&](const ReturnPanel& p) {
        const FitStages f = fit_correlation(p, c);
        const SymbolSpectrum sym = in_stage("symbol", [&] { return build_symbol(f.chat, T); });
        Fitted out{in_stage("factorize", [&] { return factorize(sym); }),
                   in_stage("returns", [&] { return variance_estimates(p); })};
        return out;
    };

    std::optional<Fitted> once;
    if (c.fit_once) once = fit_on(panel);

    BacktestResult result;
    const Eigen::Index first = c.fit_once ? 0 : window;
    for (Eigen::Index s = first; s < rows; ++s) {
        const std::string& date = panel.dates[static_cast<std::size_t>(s)];
        try {
            std::optional<Fitted> local;
            if (!c.fit_once) local = fit_on(panel.window(s - window, window));
            const Fitted& fitted = c.fit_once ? *once : *local;
            // Holdings are formed on curve s; row s of the panel realizes them.
            const auto er = in_stage("optimize", [&] {
                return expected_returns_static(data.curves[static_cast<std::size_t>(s)], grid);
            });
            const NormalizedExpectations e = in_stage("optimize", [&] { return normalize_expectations(er, fitted.variances); });
            const Allocation opt = in_stage("optimize", [&] { return sum_to_one(optimize(fitted.fac, e, c.gamma, T)); });
            const Allocation bench = in_stage("benchmark", [&] { return benchmark_uncorrelated(e, T); });
            result.dates.push_back(date);
            result.optimal.push_back(12.0 * realized(opt.raw, panel, s));
            result.benchmark.push_back(12.0 * realized(bench.raw, panel, s));
        } catch (const StageError& e) {
            throw StageError(e.stage(), e.code(), "backtest month " + date + ": " + e.detail());
        }
    }
    return result;
}

namespace {

struct Flags {
    std::string config, input, out, grid, pade, format, chat_num, chat_den, expectations, e_geometric;
    std::uint64_t seed = 0;
    double gamma = 0.0, threshold = 0.0, corr_decay = 0.0, vol = 0.0, mean_reversion = 0.0;
    int trunc = 0, max_lag = 0, window = 0, dates = 0;
    bool sum_to_one = false, fit_once = false;
};

struct FlagOptions {
    CLI::Option *config, *input, *out, *grid, *pade, *format, *chat_num, *chat_den, *expectations, *e_geometric, *seed,
        *gamma, *threshold, *corr_decay, *vol, *mean_reversion, *trunc, *max_lag, *window, *dates, *sum_to_one,
        *fit_once;
};

bool given(const CLI::Option* o) { return o->count() > 0; }

RunConfig resolve_config(const Flags& f, const FlagOptions& o) {
    RunConfig c = given(o.config) ? load_config(f.config) : RunConfig{};
    if (given(o.input)) c.input = f.input;
    if (given(o.out)) c.output_dir = f.out;
    if (given(o.format)) {
        if (f.format == "csv") c.format = OutputFormat::csv;
        else if (f.format == "json") c.format = OutputFormat::json;
        else config_error("--format must be csv or json");
    }
    if (given(o.grid)) std::tie(c.grid_start, c.grid_end) = parse_grid(f.grid);
    if (given(o.pade)) c.pade = parse_pade(f.pade);
    if (given(o.trunc)) c.truncation = f.trunc;
    if (given(o.max_lag)) c.max_lag = f.max_lag;
    if (given(o.gamma)) {
        c.gamma = f.gamma;
        c.sum_to_one = false;
    }
    if (given(o.sum_to_one)) c.sum_to_one = true;
    if (given(o.threshold)) c.threshold = f.threshold;
    if (given(o.window)) c.backtest_window = f.window;
    if (given(o.fit_once)) c.fit_once = true;
    if (given(o.seed)) c.generator.seed = f.seed;
    if (given(o.dates)) c.generator.dates = f.dates;
    if (given(o.corr_decay)) c.generator.corr_decay = f.corr_decay;
    if (given(o.vol)) c.generator.vol = f.vol;
    if (given(o.mean_reversion)) c.generator.mean_reversion = f.mean_reversion;
    if (given(o.chat_num) || given(o.chat_den) || given(o.expectations) || given(o.e_geometric)) {
        ModelSettings m = c.model.value_or(ModelSettings{});
        if (given(o.chat_num)) m.chat_numerator = parse_numbers(f.chat_num, "--chat-num");
        if (given(o.chat_den)) m.chat_denominator = parse_numbers(f.chat_den, "--chat-den");
        if (given(o.expectations)) {
            m.expectations = parse_numbers(f.expectations, "--expectations");
            m.geometric_e0.reset();
        }
        if (given(o.e_geometric)) {
            const auto v = parse_numbers(f.e_geometric, "--e-geometric");
            if (v.size() != 2) config_error("--e-geometric expects E0,beta");
            m.geometric_e0 = v[0];
            m.geometric_beta = v[1];
            m.expectations.clear();
        }
        c.model = std::move(m);
    }
    return c;
}

class Runner {
public:
    Runner(const RunConfig& c, std::ostream& out) : c_(c), out_(out), writer_(c.output_dir, c.format) {}

    void generate() {
        const auto curves = in_stage("generate", [&] { return generate_curves(c_.generator, c_.grid_end); });
        const auto path = c_.output_dir / "curves.csv";
        in_stage("write", [&] {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
            write_curves(f, curves);
            if (!f) throw Error(ErrorCode::IoError, "failed writing " + path.string());
        });
        out_ << "generated " << curves.size() << " curves with " << c_.grid_end << " monthly tenors -> "
             << path.string() << "\n";
    }

    void estimate() {
        ensure_data();
        ensure_estimate_only();
        emit_panel();
        emit_correlation(std::nullopt);
        report();
    }

    void fit() {
        ensure_fit();
        emit_panel();
        emit_correlation(fit_->chat);
        emit_fit();
        report();
    }

    void factorize_cmd() {
        ensure_model(true);
        emit_upstream();
        emit_factorization();
        report();
    }

    void optimize_cmd() {
        ensure_model(true);
        emit_upstream();
        emit_factorization();
        emit_allocation();
        report();
    }

    void check_arbitrage() {
        ensure_model(false);
        emit_upstream();
        emit_symbol();
        emit_arbitrage();
        report();
    }

    void backtest() {
        ensure_data();
        emit_backtest();
        report();
    }

    void pipeline() {
        ensure_model(true);
        emit_upstream();
        emit_factorization();
        emit_allocation();
        emit_arbitrage();
        if (data_) emit_backtest();
        report();
    }

private:
    bool data_mode() const { return !c_.input.empty(); }

    void ensure_data() {
        if (!data_) data_ = load_data(c_);
    }

    void ensure_estimate_only() {
        estimate_ = in_stage("estimate", [&] { return estimate_correlation(data_->panel, c_.effective_max_lag()); });
    }

    void ensure_fit() {
        ensure_data();
        if (!fit_) fit_ = fit_correlation(data_->panel, c_);
    }

    void ensure_model(bool factor) {
        if (model_) return;
        RationalFunction chat;
        ModelStages m;
        if (data_mode()) {
            ensure_fit();
            chat = fit_->chat;
        } else {
            chat = in_stage("model", [&] { return injected_chat(*c_.model); });
        }
        m.symbol = in_stage("symbol", [&] { return build_symbol(chat, c_.truncation); });
        if (data_mode()) {
            const std::vector<int> grid = c_.grid();
            const auto er = in_stage("optimize", [&] { return expected_returns_static(data_->curves.back(), grid); });
            const auto v = in_stage("optimize", [&] { return variance_estimates(data_->panel); });
            m.expectations = in_stage("optimize", [&] { return normalize_expectations(er, v); });
            m.maturities = grid;
        } else {
            m.expectations = in_stage("model", [&] { return injected_expectations(*c_.model, c_.truncation); });
        }
        if (factor) m.factorization = in_stage("factorize", [&] { return bondopt::factorize(m.symbol); });
        model_ = std::move(m);
    }

    void emit_upstream() {
        if (!data_mode()) return;
        emit_panel();
        emit_correlation(fit_->chat);
        emit_fit();
    }

    void emit_panel() {
        const ReturnPanel& p = data_->panel;
        Table t{{"maturity_months", "mean_return", "std_return"}, {}};
        for (std::size_t j = 0; j < p.maturities.size(); ++j)
            t.rows.push_back({static_cast<long long>(p.maturities[j]), p.means[j], p.stds[j]});
        writer_.write("returns_summary", t);
        Record r;
        r.add("first_date", p.dates.front());
        r.add("last_date", p.dates.back());
        r.add("months", static_cast<long long>(p.num_dates()));
        r.add("maturities", static_cast<long long>(p.num_maturities()));
        writer_.write("panel", r);
    }

    void emit_correlation(const std::optional<RationalFunction>& chat) {
        const CorrelationEstimate& est = fit_ ? fit_->estimate : *estimate_;
        std::vector<double> fitted;
        if (chat) fitted = chat->taylor(est.max_lag + 1);
        Table t{{"lag_months", "estimate", "pairs"}, {}};
        if (chat) t.columns.push_back("fitted");
        for (int k = 0; k <= est.max_lag; ++k) {
            std::vector<Cell> row{static_cast<long long>(k), est.values[static_cast<std::size_t>(k)],
                                  static_cast<long long>(est.pair_counts[static_cast<std::size_t>(k)])};
            if (chat) row.emplace_back(fitted[static_cast<std::size_t>(k)]);
            t.rows.push_back(std::move(row));
        }
        writer_.write("correlation", t);
    }

    void emit_fit() {
        const RationalFunction& f = fit_->chat;
        const int deg = std::max(f.numerator().degree(), f.denominator().degree());
        Table t{{"power", "numerator", "denominator"}, {}};
        for (int k = 0; k <= deg; ++k) t.rows.push_back({static_cast<long long>(k), f.numerator()[k], f.denominator()[k]});
        writer_.write("fit_coefficients", t);
        writer_.write("fit_roots", roots_table({{"zero", f.numerator_roots()}, {"pole", f.denominator_roots()}}));
        Record r;
        r.add("M", static_cast<long long>(c_.pade.M));
        r.add("N", static_cast<long long>(c_.pade.N));
        r.add("K", static_cast<long long>(c_.pade.K));
        r.add("max_lag", static_cast<long long>(fit_->estimate.max_lag));
        r.add("objective", pade_objective(fit_->estimate.values, c_.pade, f));
        r.add("symbol_min", fit_->diagnostics.symbol_min);
        r.add("positive", fit_->diagnostics.positive);
        writer_.write("fit_summary", r);
    }

    void emit_symbol() {
        const SymbolSpectrum& s = model_->symbol;
        Record r;
        r.add("circle_min", s.circle_min);
        r.add("circle_max", s.circle_max);
        r.add("truncation", static_cast<long long>(s.truncation));
        r.add("scale", s.rational.scale());
        writer_.write("symbol", r);
        writer_.write("symbol_roots", roots_table({{"zero", s.rational.numerator_roots()},
                                                   {"pole", s.rational.denominator_roots()}}));
    }

    void emit_factorization() {
        emit_symbol();
        const Factorization& f = *model_->factorization;
        writer_.write("factorization_roots", roots_table({{"zero_outside", f.zeros_outside},
                                                          {"zero_inside", f.zeros_inside},
                                                          {"pole_outside", f.poles_outside},
                                                          {"pole_inside", f.poles_inside}}));
        Record r;
        r.add("a0", f.scale);
        r.add("product_identity_error", f.product_identity_error);
        writer_.write("factorization", r);
    }

    void emit_allocation() {
        const Factorization& fac = *model_->factorization;
        const NormalizedExpectations& e = model_->expectations;
        const int T = c_.truncation;
        const Allocation base = in_stage("optimize", [&] { return optimize(fac, e, c_.gamma, T); });
        const Allocation alloc = c_.sum_to_one ? in_stage("optimize", [&] { return sum_to_one(base); }) : base;
        const std::optional<Allocation> bench = in_stage("benchmark", [&]() -> std::optional<Allocation> {
            if (!data_mode()) return std::nullopt;
            return benchmark_uncorrelated(e, T);
        });
        const double q = 4.0 * c_.gamma * *base.utility;

        Table t{{"index", "maturity_months", "expected_return", "variance", "E", "Y", "X"}, {}};
        if (bench) t.columns.push_back("benchmark_X");
        for (std::size_t i = 0; i < alloc.raw.size(); ++i) {
            const int k = static_cast<int>(i);
            std::vector<Cell> row{static_cast<long long>(k),
                                  model_->maturities.empty() ? Cell{static_cast<long long>(k)}
                                                             : Cell{static_cast<long long>(model_->maturities[i])},
                                  e.expected[i], e.variances[i], e.series[k], alloc.normalized[k], alloc.raw[i]};
            if (bench) row.emplace_back(bench->raw[i]);
            t.rows.push_back(std::move(row));
        }
        writer_.write("allocation", t);

        Record r;
        r.add("mode", std::string(c_.sum_to_one ? "sum-to-one" : "gamma"));
        if (!c_.sum_to_one) {
            r.add("gamma", c_.gamma);
            r.add("utility", *base.utility);
        }
        r.add("quadratic_form", q);
        r.add("expected_return", alloc.expected_return);
        r.add("variance", alloc.variance);
        r.add("net_position", std::accumulate(alloc.raw.begin(), alloc.raw.end(), 0.0));
        if (bench) {
            r.add("benchmark_expected_return", bench->expected_return);
            r.add("benchmark_variance", portfolio_variance(model_->symbol, bench->normalized));
        }
        writer_.write("allocation_summary", r);
        if (base.utility && !c_.sum_to_one) summary_ << "utility=" << fmt(*base.utility) << " ";
        summary_ << "quadratic_form=" << fmt(q) << " ";
    }

    void emit_arbitrage() {
        const ArbitrageReport a = in_stage("arbitrage", [&] {
            return assess_arbitrage(model_->symbol, model_->expectations, c_.threshold, c_.truncation);
        });
        Record r;
        r.add("invertible", a.invertible);
        r.add("circle_min", a.circle_interval.min);
        r.add("circle_max", a.circle_interval.max);
        r.add("kernel_dimension_estimate", static_cast<long long>(a.kernel_dimension_estimate));
        r.add("classical_arbitrage", std::string(to_string(a.classical_arbitrage)));
        if (a.quadratic_form) r.add("quadratic_form", *a.quadratic_form);
        r.add("threshold", a.threshold);
        r.add("near_arbitrage", a.near_arbitrage);
        writer_.write("arbitrage", r);
        summary_ << "invertible=" << (a.invertible ? "true" : "false") << " near_arbitrage="
                 << (a.near_arbitrage ? "true" : "false") << " ";
    }

    void emit_backtest() {
        const BacktestResult b = run_backtest(*data_, c_);
        Table t{{"date", "optimal_annualized", "benchmark_annualized"}, {}};
        for (std::size_t i = 0; i < b.dates.size(); ++i) t.rows.push_back({b.dates[i], b.optimal[i], b.benchmark[i]});
        writer_.write("backtest", t);
        const SummaryStats o = summarize(b.optimal);
        const SummaryStats m = summarize(b.benchmark);
        Record r;
        r.add("mode", std::string(c_.fit_once ? "fit-once" : "walk-forward"));
        if (!c_.fit_once) r.add("window_months", static_cast<long long>(c_.backtest_window));
        r.add("months", static_cast<long long>(b.dates.size()));
        r.add("optimal_mean", o.mean);
        r.add("optimal_std", o.std);
        r.add("optimal_variance", o.variance);
        r.add("optimal_min", o.min);
        r.add("benchmark_mean", m.mean);
        r.add("benchmark_std", m.std);
        r.add("benchmark_variance", m.variance);
        r.add("benchmark_min", m.min);
        writer_.write("backtest_summary", r);
        summary_ << "backtest_std optimal=" << fmt(o.std) << " benchmark=" << fmt(m.std) << " ";
    }

    void report() {
        for (const auto& p : writer_.written()) out_ << "wrote " << p.string() << "\n";
        const std::string s = summary_.str();
        if (!s.empty()) out_ << s.substr(0, s.size() - 1) << "\n";
    }

    static std::string fmt(double v) { return format_cell(v); }

    const RunConfig& c_;
    std::ostream& out_;
    ReportWriter writer_;
    std::ostringstream summary_;
    std::optional<DataStages> data_;
    std::optional<CorrelationEstimate> estimate_;
    std::optional<FitStages> fit_;
    std::optional<ModelStages> model_;
};

Requirement requirement_for(const std::string& cmd) {
    if (cmd == "generate") return Requirement::none;
    if (cmd == "estimate" || cmd == "fit" || cmd == "backtest") return Requirement::input;
    return Requirement::input_or_model;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal bond portfolios from maturity-difference correlations", "bondopt"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    FlagOptions o{};
    o.config = app.add_option("--config", f.config, "JSON run configuration");
    o.input = app.add_option("--input", f.input, "yield-curve CSV (long or wide layout)");
    o.out = app.add_option("--out", f.out, "output directory");
    o.seed = app.add_option("--seed", f.seed, "RNG seed for generate");
    o.grid = app.add_option("--grid", f.grid, "maturity grid in months, start..end");
    o.pade = app.add_option("--pade", f.pade, "Pade order M,N,K");
    o.gamma = app.add_option("--gamma", f.gamma, "risk aversion");
    o.sum_to_one = app.add_flag("--sum-to-one", f.sum_to_one, "rescale holdings to sum to one");
    o.gamma->excludes(o.sum_to_one);
    o.threshold = app.add_option("--threshold", f.threshold, "near-arbitrage threshold on <E|A^-1 E>");
    o.trunc = app.add_option("--trunc", f.trunc, "series truncation T");
    o.format = app.add_option("--format", f.format, "csv or json");
    o.max_lag = app.add_option("--max-lag", f.max_lag, "largest correlation lag to estimate");
    o.window = app.add_option("--window", f.window, "walk-forward window in months");
    o.fit_once = app.add_flag("--fit-once", f.fit_once, "fit once on the whole panel (in-sample)");
    o.dates = app.add_option("--dates", f.dates, "number of synthetic curves");
    o.corr_decay = app.add_option("--corr-decay", f.corr_decay, "synthetic correlation decay per month");
    o.vol = app.add_option("--vol", f.vol, "synthetic monthly yield volatility");
    o.mean_reversion = app.add_option("--mean-reversion", f.mean_reversion, "synthetic curve mean reversion");
    o.chat_num = app.add_option("--chat-num", f.chat_num, "model mode: numerator of C(z), ascending");
    o.chat_den = app.add_option("--chat-den", f.chat_den, "model mode: denominator of C(z), ascending");
    o.expectations = app.add_option("--expectations", f.expectations, "model mode: E(0),E(1),...");
    o.e_geometric = app.add_option("--e-geometric", f.e_geometric, "model mode: E(t) = E0 beta^t, given as E0,beta");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"generate", "write a synthetic yield-curve panel"},
        {"estimate", "estimate the correlation function"},
        {"fit", "fit a generalized Pade approximant"},
        {"factorize", "build and factorize the symbol"},
        {"optimize", "optimal and benchmark allocations"},
        {"check-arbitrage", "arbitrage and near-arbitrage report"},
        {"backtest", "optimal vs benchmark backtest"},
        {"pipeline", "run every stage end to end"},
    };
    for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

    std::vector<const char*> argv{"bondopt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        const RunConfig config = in_stage("config", [&] {
            RunConfig c = resolve_config(f, o);
            validate(c, requirement_for(cmd));
            return c;
        });
        Runner runner(config, out);
        if (cmd == "generate") runner.generate();
        else if (cmd == "estimate") runner.estimate();
        else if (cmd == "fit") runner.fit();
        else if (cmd == "factorize") runner.factorize_cmd();
        else if (cmd == "optimize") runner.optimize_cmd();
        else if (cmd == "check-arbitrage") runner.check_arbitrage();
        else if (cmd == "backtest") runner.backtest();
        else runner.pipeline();
        return 0;
    } catch (const StageError& e) {
        err << "error " << e.what() << "\n";
        return is_validation_error(e.code()) ? 2 : 3;
    } catch (const Error& e) {
        err << "error [stage=write] " << e.what() << "\n";
        return is_validation_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error [stage=internal] " << e.what() << "\n";
        return 3;
    }
}

}  // namespace bondopt::app
