#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "jpi/config.hpp"
#include "jpi/errors.hpp"
#include "jpi/runner.hpp"

namespace jpi {

namespace {

void append_number(std::string& out, double v) {
    if (std::isnan(v)) {
        out += "nan";
    } else if (std::isinf(v)) {
        out += v > 0 ? "inf" : "-inf";
    } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        out += buf;
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) out += ',';
        out += columns[k];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            append_number(out, row[k]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json RunResult::to_json(const std::string& timestamp) const {
    nlohmann::json tables_j = nlohmann::json::object();
    for (const auto& t : tables) tables_j[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
    return {{"metadata", {{"tool", "jpi"},
                          {"version", JPI_VERSION_STRING},
                          {"mode", mode},
                          {"config_hash", config::config_hash(config)},
                          {"timestamp", timestamp},
                          {"config", config}}},
            {"summary", summary},
            {"warnings", warnings},
            {"tables", tables_j}};
}

void RunResult::write(const std::string& prefix, bool csv, bool json) const {
    if (prefix.empty()) throw IoError("empty output path");
    if (csv) {
        if (tables.size() == 1) {
            write_file(prefix + ".csv", tables.front().to_csv());
        } else {
            for (const auto& t : tables) write_file(prefix + "_" + t.name + ".csv", t.to_csv());
        }
    }
    if (json) write_file(prefix + ".json", to_json(utc_timestamp()).dump(2) + "\n");
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace jpi
