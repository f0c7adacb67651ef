#pragma once

// Subcommands and the stage-tagged pipeline behind them.

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bondopt/app/config.hpp"
#include "bondopt/app/report.hpp"
#include "bondopt/arbitrage.hpp"
#include "bondopt/corrfit.hpp"
#include "bondopt/error.hpp"
#include "bondopt/marketdata.hpp"
#include "bondopt/portfolio.hpp"
#include "bondopt/wienerhopf.hpp"

namespace bondopt::app {

/// A module error annotated with the pipeline stage that raised it.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, ErrorCode code, const std::string& message);

    const std::string& stage() const noexcept { return stage_; }
    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string stage_;
    ErrorCode code_;
    std::string detail_;
};

/// Runs f, rethrowing any bondopt::Error as a StageError for `stage`.
template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageError(stage, e.code(), e.what());
    }
}

struct DataStages {
    std::vector<YieldCurve> curves;        // as loaded
    std::vector<YieldCurve> interpolated;  // on the grid (plus the month below it)
    ReturnPanel panel;
};

struct FitStages {
    CorrelationEstimate estimate;
    RationalFunction chat;
    FitDiagnostics diagnostics;
};

struct ModelStages {
    SymbolSpectrum symbol;
    std::optional<Factorization> factorization;
    NormalizedExpectations expectations;
    std::vector<int> maturities;  // month labels of the expectation entries; empty in model mode
};

DataStages load_data(const RunConfig& config);
FitStages fit_correlation(const ReturnPanel& panel, const RunConfig& config);

/// C(z) from the config's model section, or from the fit.
RationalFunction injected_chat(const ModelSettings& model);
NormalizedExpectations injected_expectations(const ModelSettings& model, int truncation);

struct BacktestResult {
    std::vector<std::string> dates;
    std::vector<double> optimal;    // annualized (x12) monthly log returns
    std::vector<double> benchmark;
};

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;
    double variance = 0.0;
    double min = 0.0;
};

SummaryStats summarize(std::span<const double> x);

/// Walk-forward (or fit-once) backtest of the sum-to-one optimal portfolio
/// against the uncorrelated benchmark. Throws StageError.
BacktestResult run_backtest(const DataStages& data, const RunConfig& config);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 success, 2 configuration or validation error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bondopt::app
