#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jpi/jpi.h"

using nlohmann::json;

namespace {

struct Options {
    std::string config_path;
    std::string recipe;
    std::string out;
    std::string format;
    std::optional<unsigned long long> seed;
    std::vector<std::string> sets;
    int threads = 0;
    bool quiet = false;
};

struct Failure {
    jpi_status status;
    std::string field;
    std::string message;
};

int report(const Failure& f) {
    json err{{"error",
              {{"status", jpi_status_name(f.status)},
               {"code", static_cast<int>(f.status)},
               {"field", f.field},
               {"message", f.message}}}};
    std::cerr << err.dump() << "\n";
    return f.status == JPI_ERR_CONFIG ? 2 : 1;
}

json load_config(const Options& o) {
    if (!o.config_path.empty() && !o.recipe.empty())
        throw Failure{JPI_ERR_CONFIG, "--config", "give either --config or --recipe, not both"};
    std::string text;
    if (!o.recipe.empty()) {
        const char* r = jpi_recipe_json(o.recipe.c_str());
        if (!r) throw Failure{JPI_ERR_CONFIG, "--recipe", jpi_last_error()};
        text = r;
    } else if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) throw Failure{JPI_ERR_CONFIG, "--config", "cannot read '" + o.config_path + "'"};
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    } else {
        throw Failure{JPI_ERR_CONFIG, "--config", "a configuration file or recipe is required"};
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Failure{JPI_ERR_CONFIG, "<root>", std::string("malformed JSON: ") + e.what()};
    }
}

// key.path.0=value; the value is taken as JSON when it parses, else as a string.
void apply_set(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Failure{JPI_ERR_CONFIG, "--set", "expected key=value, got '" + assignment + "'"};
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    std::string pointer;
    std::stringstream ss(key);
    for (std::string part; std::getline(ss, part, '.');) pointer += "/" + part;
    try {
        cfg[json::json_pointer(pointer)] = value;
    } catch (const json::exception& e) {
        throw Failure{JPI_ERR_CONFIG, key, e.what()};
    }
}

int execute(const std::string& mode, const Options& o) {
    json cfg = load_config(o);
    if (mode != "run") cfg["mode"] = mode;
    for (const auto& s : o.sets) apply_set(cfg, s);
    if (o.seed) cfg["optimize"]["seed"] = *o.seed;
    if (o.threads > 0) setenv("JPI_THREADS", std::to_string(o.threads).c_str(), 1);

    std::string prefix = o.out;
    bool csv = true, js = true;
    if (cfg.contains("output") && cfg["output"].is_object()) {
        const auto& out = cfg["output"];
        if (prefix.empty() && out.contains("path") && out["path"].is_string()) prefix = out["path"];
        if (out.contains("formats") && out["formats"].is_array()) {
            csv = js = false;
            for (const auto& f : out["formats"]) {
                csv = csv || f == "csv";
                js = js || f == "json";
            }
        }
    }
    if (!o.format.empty()) {
        csv = js = false;
        std::stringstream ss(o.format);
        for (std::string f; std::getline(ss, f, ',');) {
            if (f == "csv") {
                csv = true;
            } else if (f == "json") {
                js = true;
            } else {
                throw Failure{JPI_ERR_CONFIG, "--format", "expected csv, json, or csv,json"};
            }
        }
    }
    if (prefix.empty()) prefix = "jpi_" + (cfg.contains("mode") && cfg["mode"].is_string()
                                               ? cfg["mode"].get<std::string>() : std::string("run"));

    jpi_result* result = nullptr;
    if (const jpi_status s = jpi_run(cfg.dump().c_str(), &result); s != JPI_OK)
        throw Failure{s, jpi_last_error_field(), jpi_last_error()};
    for (std::size_t k = 0; k < jpi_result_warning_count(result); ++k)
        std::cerr << "warning: " << jpi_result_warning(result, k) << "\n";
    const jpi_status ws = jpi_result_write(result, prefix.c_str(), csv ? 1 : 0, js ? 1 : 0);
    if (ws != JPI_OK) {
        Failure f{ws, jpi_last_error_field(), jpi_last_error()};
        jpi_result_free(result);
        throw f;
    }
    if (!o.quiet) std::cout << json::parse(jpi_result_summary_json(result)).dump(2) << "\n";
    jpi_result_free(result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation, tuning, and verification of flux-pumped SQUID isolating filters"};
    app.set_version_flag("--version", std::string(jpi_version()));
    app.require_subcommand(1);

    Options o;
    const std::vector<std::pair<std::string, std::string>> modes{
        {"synth", "Synthesize the Chebyshev filter and its SQUID-loaded netlist"},
        {"sparams", "Spectral S-parameters over a frequency grid"},
        {"sweep", "One- or two-axis parameter sweep"},
        {"optimize", "Tune the pump plan against band targets"},
        {"oracle", "Time-domain simulation and power spectra"},
        {"cascade", "Two isolators joined by an ideal diplexer"},
        {"coupled-mode", "Six-mode model of a pumped two-pole filter"},
        {"run", "Run a configuration using its own mode field"},
    };
    for (const auto& [name, desc] : modes) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", o.config_path, "JSON run configuration");
        sub->add_option("-r,--recipe", o.recipe, "Bundled recipe name (see `recipes`)");
        sub->add_option("-o,--out", o.out, "Output path prefix");
        sub->add_option("-f,--format", o.format, "csv, json, or csv,json");
        sub->add_option("--seed", o.seed, "Optimizer seed");
        sub->add_option("-s,--set", o.sets, "Override a config value: key.path=value")->take_all();
        sub->add_option("-j,--threads", o.threads, "Worker threads (sets JPI_THREADS)")->check(CLI::PositiveNumber);
        sub->add_flag("-q,--quiet", o.quiet, "Do not print the summary");
    }
    std::string recipe_name;
    auto* rec = app.add_subcommand("recipes", "List bundled recipes, or print one");
    rec->add_option("name", recipe_name, "Recipe to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (rec->parsed()) {
        if (recipe_name.empty()) {
            for (std::size_t k = 0; k < jpi_recipe_count(); ++k) std::cout << jpi_recipe_name(k) << "\n";
            return 0;
        }
        const char* text = jpi_recipe_json(recipe_name.c_str());
        if (!text) return report({JPI_ERR_CONFIG, "recipe", jpi_last_error()});
        std::cout << text;
        return 0;
    }

    std::string mode;
    for (const auto* sub : app.get_subcommands()) mode = sub->get_name();
    try {
        return execute(mode, o);
    } catch (const Failure& f) {
        return report(f);
    }
}
