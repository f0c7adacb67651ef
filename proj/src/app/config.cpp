#include "bondopt/app/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bondopt/error.hpp"

namespace bondopt::app {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) config_error(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) config_error("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        config_error(where + "." + key + " has the wrong type");
    }
}

}  // namespace

std::vector<int> RunConfig::grid() const {
    std::vector<int> g;
    for (int m = grid_start; m <= grid_end; ++m) g.push_back(m);
    return g;
}

int RunConfig::effective_max_lag() const {
    const int needed = pade.M + pade.N + pade.K;
    return max_lag ? std::max(*max_lag, needed) : needed;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(doc, "config",
                 {"input", "output_dir", "format", "grid", "estimation", "pade", "truncation", "optimizer", "arbitrage",
                  "backtest", "generate", "model"});
    RunConfig c;
    std::string s;
    if (doc.contains("input")) {
        read(doc, "input", s, "config");
        c.input = s;
    }
    if (doc.contains("output_dir")) {
        read(doc, "output_dir", s, "config");
        c.output_dir = s;
    }
    if (doc.contains("format")) {
        read(doc, "format", s, "config");
        if (s == "csv") c.format = OutputFormat::csv;
        else if (s == "json") c.format = OutputFormat::json;
        else config_error("format must be csv or json");
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        require_keys(g, "grid", {"start", "end"});
        read(g, "start", c.grid_start, "grid");
        read(g, "end", c.grid_end, "grid");
    }
    if (doc.contains("estimation")) {
        const auto& e = doc["estimation"];
        require_keys(e, "estimation", {"max_lag"});
        int lag = 0;
        if (e.contains("max_lag")) {
            read(e, "max_lag", lag, "estimation");
            c.max_lag = lag;
        }
    }
    if (doc.contains("pade")) {
        const auto& p = doc["pade"];
        require_keys(p, "pade", {"M", "N", "K"});
        read(p, "M", c.pade.M, "pade");
        read(p, "N", c.pade.N, "pade");
        read(p, "K", c.pade.K, "pade");
    }
    read(doc, "truncation", c.truncation, "config");
    if (doc.contains("optimizer")) {
        const auto& o = doc["optimizer"];
        require_keys(o, "optimizer", {"gamma", "sum_to_one"});
        read(o, "gamma", c.gamma, "optimizer");
        read(o, "sum_to_one", c.sum_to_one, "optimizer");
    }
    if (doc.contains("arbitrage")) {
        const auto& a = doc["arbitrage"];
        require_keys(a, "arbitrage", {"threshold"});
        read(a, "threshold", c.threshold, "arbitrage");
    }
    if (doc.contains("backtest")) {
        const auto& b = doc["backtest"];
        require_keys(b, "backtest", {"window", "fit_once"});
        read(b, "window", c.backtest_window, "backtest");
        read(b, "fit_once", c.fit_once, "backtest");
    }
    if (doc.contains("generate")) {
        const auto& g = doc["generate"];
        require_keys(g, "generate", {"seed", "dates", "corr_decay", "vol", "mean_reversion", "start_date"});
        read(g, "seed", c.generator.seed, "generate");
        read(g, "dates", c.generator.dates, "generate");
        read(g, "corr_decay", c.generator.corr_decay, "generate");
        read(g, "vol", c.generator.vol, "generate");
        read(g, "mean_reversion", c.generator.mean_reversion, "generate");
        read(g, "start_date", c.generator.start_date, "generate");
    }
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        require_keys(m, "model", {"chat_numerator", "chat_denominator", "expectations", "geometric"});
        ModelSettings model;
        read(m, "chat_numerator", model.chat_numerator, "model");
        read(m, "chat_denominator", model.chat_denominator, "model");
        read(m, "expectations", model.expectations, "model");
        if (m.contains("geometric")) {
            const auto& g = m["geometric"];
            require_keys(g, "model.geometric", {"e0", "beta"});
            double e0 = 0.0;
            read(g, "e0", e0, "model.geometric");
            read(g, "beta", model.geometric_beta, "model.geometric");
            model.geometric_e0 = e0;
        }
        c.model = std::move(model);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c, Requirement requirement) {
    if (c.pade.M < 0 || c.pade.K < 0) config_error("Pade orders M and K must be non-negative");
    if (c.pade.N < 1) config_error("Pade denominator degree N must be at least 1");
    if (c.truncation < 4 * (c.pade.M + c.pade.N)) config_error("truncation must be at least 4 (M + N)");
    if (c.truncation < 1) config_error("truncation must be positive");
    if (!(c.gamma > 0.0)) config_error("gamma must be positive");
    if (!(c.threshold > 0.0)) config_error("near-arbitrage threshold must be positive");
    if (c.grid_start < 1 || c.grid_end < c.grid_start) config_error("grid must satisfy 1 <= start <= end");
    if (c.grid_end - c.grid_start + 1 < 2) config_error("grid needs at least two maturities");
    if (c.backtest_window < 2) config_error("backtest window must be at least 2 months");
    if (c.generator.dates < 2) config_error("generator needs at least two dates");
    if (!(c.generator.vol >= 0.0)) config_error("generator volatility must be non-negative");
    if (!(c.generator.corr_decay >= -1.0 && c.generator.corr_decay <= 1.0)) config_error("corr_decay must lie in [-1, 1]");
    if (!(c.generator.mean_reversion >= 0.0 && c.generator.mean_reversion < 1.0)) {
        config_error("mean_reversion must lie in [0, 1)");
    }
    if (c.max_lag && *c.max_lag < 0) config_error("max_lag must be non-negative");

    const bool have_model = c.model.has_value();
    const bool need_input = requirement == Requirement::input || (requirement == Requirement::input_or_model && !have_model);
    if (need_input) {
        if (c.input.empty()) config_error("an input curve file is required (--input)");
        if (!std::filesystem::exists(c.input)) config_error("input file " + c.input.string() + " does not exist");
        const int maturities = c.grid_end - c.grid_start + 1;
        if (c.effective_max_lag() + 2 > maturities) {
            config_error("Pade order needs " + std::to_string(c.effective_max_lag() + 2) +
                         " maturities on the grid, have " + std::to_string(maturities));
        }
    }
    if (have_model && requirement == Requirement::input_or_model && c.input.empty()) {
        if (c.model->chat_denominator.empty() || c.model->chat_numerator.empty()) {
            config_error("model needs chat_numerator and chat_denominator");
        }
        if (c.model->expectations.empty() && !c.model->geometric_e0) {
            config_error("model needs expectations or a geometric profile");
        }
        if (c.model->geometric_e0 && !(std::abs(c.model->geometric_beta) < 1.0)) {
            config_error("geometric beta must lie in (-1, 1)");
        }
    }
}

}  // namespace bondopt::app
