#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jpi {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// CSV with a header row and 9 significant digits.
    std::string to_csv() const;
};

struct RunResult {
    std::string mode;
    nlohmann::json config;   // the normalized configuration that produced this result
    nlohmann::json summary;  // mode-specific figures
    std::vector<Table> tables;
    std::vector<std::string> warnings;

    /// Structured payload: metadata, config, summary, tables.
    nlohmann::json to_json(const std::string& timestamp) const;

    /// Writes `<prefix>.csv` (or `<prefix>_<table>.csv` when several tables
    /// exist) and/or `<prefix>.json`. Throws IoError on failure.
    void write(const std::string& prefix, bool csv, bool json) const;
};

/// Validates then executes a run configuration.
RunResult run(const nlohmann::json& config);

std::string utc_timestamp();

}  // namespace jpi
