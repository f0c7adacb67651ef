#include "bondopt/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bondopt/error.hpp"

namespace bondopt::app {

namespace {

nlohmann::ordered_json to_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
            }
            return v;
        },
        cell);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.15g", v);
                return buf;
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return csv_escape(v);
            }
        },
        cell);
}

ReportWriter::ReportWriter(std::filesystem::path dir, OutputFormat format) : dir_(std::move(dir)), format_(format) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path ReportWriter::open_target(const std::string& name) const {
    return dir_ / (name + (format_ == OutputFormat::csv ? ".csv" : ".json"));
}

std::filesystem::path ReportWriter::write(const std::string& name, const Table& table) {
    const auto path = open_target(name);
    std::string content;
    if (format_ == OutputFormat::csv) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) {
            if (j) content += ',';
            content += csv_escape(table.columns[j]);
        }
        content += '\n';
        for (const auto& row : table.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (j) content += ',';
                content += format_cell(row[j]);
            }
            content += '\n';
        }
    } else {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t j = 0; j < row.size() && j < table.columns.size(); ++j) obj[table.columns[j]] = to_json(row[j]);
            arr.push_back(std::move(obj));
        }
        content = arr.dump(2) + "\n";
    }
    write_file(path, content);
    written_.push_back(path);
    return path;
}

std::filesystem::path ReportWriter::write(const std::string& name, const Record& record) {
    const auto path = open_target(name);
    std::string content;
    if (format_ == OutputFormat::csv) {
        content = "key,value\n";
        for (const auto& [k, v] : record.fields) content += csv_escape(k) + "," + format_cell(v) + "\n";
    } else {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [k, v] : record.fields) obj[k] = to_json(v);
        content = obj.dump(2) + "\n";
    }
    write_file(path, content);
    written_.push_back(path);
    return path;
}

}  // namespace bondopt::app
