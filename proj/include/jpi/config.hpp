#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jpi/coupled_mode.hpp"
#include "jpi/netlist_builder.hpp"
#include "jpi/td_oracle.hpp"
#include "jpi/tuner.hpp"

namespace jpi::config {

using Json = nlohmann::json;

inline const std::vector<std::string> kModes{"synth",  "sparams", "sweep",       "optimize",
                                             "oracle", "cascade", "coupled-mode"};

// Typed field access; every failure is a ConfigError naming the JSON path.
const Json& require(const Json& obj, const std::string& key, const std::string& path);
double number(const Json& obj, const std::string& key, const std::string& path);
double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback);
int integer_or(const Json& obj, const std::string& key, const std::string& path, int fallback);
bool boolean_or(const Json& obj, const std::string& key, const std::string& path, bool fallback);
std::string string_or(const Json& obj, const std::string& key, const std::string& path,
                      const std::string& fallback);
std::vector<double> numbers(const Json& obj, const std::string& key, const std::string& path);

/// Rejects keys outside `allowed` so misspelled fields are reported.
void only_keys(const Json& obj, const std::string& path, const std::vector<std::string>& allowed);

std::string join(const std::string& path, const std::string& key);

FilterSpec parse_filter(const Json& j, const std::string& path);
IsolatorDesign parse_design(const Json& root, const std::string& path);

/// Pump block: either a uniform {alpha_pi, pump_freq_hz, phases_deg} form or
/// an explicit {tones: [{alpha_pi, pump_freq_hz, phase_deg}]} list.
PumpPlan parse_pumps(const Json& j, const std::string& path, std::size_t squid_count);

/// Explicit netlist {z0_ohm, n_sidebands, squids: [...], elements: [...]}.
spectral_network::IsolatorNetlist parse_netlist(const Json& j, const std::string& path);

/// Netlist of a stage object holding filter/network/netlist/pumps blocks.
spectral_network::IsolatorNetlist stage_netlist(const Json& stage, const std::string& path);

struct Grid {
    double start_hz;
    double stop_hz;
    int points;
    std::vector<double> freqs_hz() const;
    std::vector<double> omegas() const;
};

/// Default grid spans [fc - BW, fc + BW] with 201 points.
Grid parse_grid(const Json& root, const FilterSpec& filter);

tuner::TuneObjective parse_objective(const Json& j, const std::string& path, const FilterSpec& filter);
tuner::OptimizerOptions parse_optimizer(const Json& j, const std::string& path);

squid::SquidParams parse_squid(const Json& j, const std::string& path);

/// Validates every block the mode needs before any computation.
void validate(const Json& root);

/// 64-bit FNV-1a of the compact serialization, as 16 hex digits.
std::string config_hash(const Json& root);

}  // namespace jpi::config
