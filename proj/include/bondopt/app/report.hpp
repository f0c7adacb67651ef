#pragma once

// Tabular and key/value artifacts written as CSV or JSON.

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bondopt/app/config.hpp"

namespace bondopt::app {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Record {
    std::vector<std::pair<std::string, Cell>> fields;

    void add(std::string key, Cell value) { fields.emplace_back(std::move(key), std::move(value)); }
};

std::string format_cell(const Cell& cell);

class ReportWriter {
public:
    ReportWriter(std::filesystem::path dir, OutputFormat format);

    /// Writes <dir>/<name>.csv or .json and returns the path.
    std::filesystem::path write(const std::string& name, const Table& table);
    std::filesystem::path write(const std::string& name, const Record& record);

    const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

private:
    std::filesystem::path open_target(const std::string& name) const;

    std::filesystem::path dir_;
    OutputFormat format_;
    std::vector<std::filesystem::path> written_;
};

}  // namespace bondopt::app
