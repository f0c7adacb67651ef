#pragma once

// Run configuration shared by every subcommand.
//
// The config file is a JSON document:
//
//   {
//     "input": "curves.csv",
//     "output_dir": "out",
//     "format": "csv",                      // or "json"
//     "grid": {"start": 1, "end": 120},     // maturities in months
//     "estimation": {"max_lag": 33},        // defaults to M + N + K
//     "pade": {"M": 0, "N": 5, "K": 28},
//     "truncation": 256,
//     "optimizer": {"gamma": 1.0, "sum_to_one": false},
//     "arbitrage": {"threshold": 2.0},
//     "backtest": {"window": 36, "fit_once": false},
//     "generate": {"seed": 42, "dates": 500, "corr_decay": 0.9, "vol": 0.001,
//                  "mean_reversion": 0.05, "start_date": "1985-08-01"},
//     "model": {"chat_numerator": [1], "chat_denominator": [1, -0.5],
//               "expectations": [...]  |  "geometric": {"e0": 1, "beta": 0.25}}
//   }
//
// Every section is optional. Command-line flags override file values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bondopt/corrfit.hpp"

namespace bondopt::app {

enum class OutputFormat { csv, json };

struct GeneratorSettings {
    std::uint64_t seed = 42;
    int dates = 500;
    double corr_decay = 0.9;
    double vol = 0.001;             // monthly yield volatility (decimal)
    double mean_reversion = 0.05;   // monthly pull of the curve toward its base shape
    std::string start_date = "1985-08-01";
};

/// Injected C(z) and E(z) that bypass estimation ("pure-model" runs).
struct ModelSettings {
    std::vector<double> chat_numerator{1.0};
    std::vector<double> chat_denominator{1.0};
    std::vector<double> expectations;      // E(0), E(1), ...
    std::optional<double> geometric_e0;    // E(t) = e0 * beta^t when set
    double geometric_beta = 0.0;
};

struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir = "out";
    OutputFormat format = OutputFormat::csv;
    int grid_start = 1;
    int grid_end = 120;
    std::optional<int> max_lag;
    PadeOrder pade{0, 5, 28};
    int truncation = 256;
    double gamma = 1.0;
    bool sum_to_one = false;
    double threshold = 2.0;
    int backtest_window = 36;
    bool fit_once = false;
    GeneratorSettings generator;
    std::optional<ModelSettings> model;

    std::vector<int> grid() const;
    int effective_max_lag() const;
};

/// Parses the JSON config document. Throws ConfigError on unknown keys or bad types.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

enum class Requirement { none, input_or_model, input };

/// Throws ConfigError when the configuration cannot run.
void validate(const RunConfig& config, Requirement requirement);

}  // namespace bondopt::app
