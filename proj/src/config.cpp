#include "jpi/config.hpp"

#include <algorithm>
#include <cstdio>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi::config {

namespace sn = spectral_network;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) throw ConfigError(join(path, key), "required field is missing");
    return *it;
}

namespace {

double as_number(const Json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

bool has(const Json& obj, const std::string& key) {
    return obj.is_object() && obj.contains(key) && !obj.at(key).is_null();
}

void positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

}  // namespace

double number(const Json& obj, const std::string& key, const std::string& path) {
    return as_number(require(obj, key, path), join(path, key));
}

double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback) {
    return has(obj, key) ? number(obj, key, path) : fallback;
}

int integer_or(const Json& obj, const std::string& key, const std::string& path, int fallback) {
    if (!has(obj, key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
    return v.get<int>();
}

bool boolean_or(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
    if (!has(obj, key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
    return v.get<bool>();
}

std::string string_or(const Json& obj, const std::string& key, const std::string& path,
                      const std::string& fallback) {
    if (!has(obj, key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    const std::string field = join(path, key);
    if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out.push_back(as_number(v[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

void only_keys(const Json& obj, const std::string& path, const std::vector<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ConfigError(join(path, it.key()), "unknown field");
}

FilterSpec parse_filter(const Json& j, const std::string& path) {
    only_keys(j, path, {"order", "center_freq_hz", "bandwidth_hz", "ripple_db", "z0_ohm"});
    FilterSpec f;
    f.order = integer_or(j, "order", path, -1);
    if (f.order == -1) throw ConfigError(join(path, "order"), "required field is missing");
    if (f.order < 2) throw ConfigError(join(path, "order"), "must be at least 2");
    f.center_freq = number(j, "center_freq_hz", path);
    f.bandwidth = number(j, "bandwidth_hz", path);
    f.ripple_db = number(j, "ripple_db", path);
    f.z0 = number_or(j, "z0_ohm", path, 50.0);
    positive(f.center_freq, join(path, "center_freq_hz"));
    positive(f.bandwidth, join(path, "bandwidth_hz"));
    positive(f.ripple_db, join(path, "ripple_db"));
    positive(f.z0, join(path, "z0_ohm"));
    if (f.bandwidth >= 2.0 * f.center_freq)
        throw ConfigError(join(path, "bandwidth_hz"), "must be below twice the center frequency");
    return f;
}

IsolatorDesign parse_design(const Json& root, const std::string& path) {
    IsolatorDesign d;
    d.filter = parse_filter(require(root, "filter", path), join(path, "filter"));
    if (has(root, "network")) {
        const std::string np = join(path, "network");
        const Json& n = root.at("network");
        only_keys(n, np, {"pole_impedances_ohm", "inverters", "squid_fraction", "beta_pi", "n_sidebands"});
        if (has(n, "pole_impedances_ohm")) {
            d.pole_impedances = numbers(n, "pole_impedances_ohm", np);
            if (static_cast<int>(d.pole_impedances.size()) != d.filter.order)
                throw ConfigError(join(np, "pole_impedances_ohm"), "needs one impedance per pole");
            for (double z : d.pole_impedances) positive(z, join(np, "pole_impedances_ohm"));
        }
        const std::string inv = string_or(n, "inverters", np, "ideal");
        if (inv == "ideal") {
            d.realization = InverterRealization::Ideal;
        } else if (inv == "quarter_wave") {
            d.realization = InverterRealization::QuarterWave;
        } else if (inv == "capacitive_pi") {
            d.realization = InverterRealization::CapacitivePi;
        } else {
            throw ConfigError(join(np, "inverters"), "expected ideal, quarter_wave, or capacitive_pi");
        }
        d.squid_fraction = number_or(n, "squid_fraction", np, 1.0);
        if (!(d.squid_fraction > 0.0 && d.squid_fraction <= 1.0))
            throw ConfigError(join(np, "squid_fraction"), "must lie in (0, 1]");
        d.beta = number_or(n, "beta_pi", np, 0.3) * kPi;
        if (!(std::abs(d.beta) < kPi / 2)) throw ConfigError(join(np, "beta_pi"), "must satisfy |beta_pi| < 0.5");
        d.n_sidebands = integer_or(n, "n_sidebands", np, 2);
        if (d.n_sidebands < 0 || d.n_sidebands > 16)
            throw ConfigError(join(np, "n_sidebands"), "must lie in [0, 16]");
    }
    return d;
}

PumpPlan parse_pumps(const Json& j, const std::string& path, std::size_t squid_count) {
    PumpPlan p;
    if (has(j, "tones")) {
        only_keys(j, path, {"tones", "shared_freq"});
        const Json& t = j.at("tones");
        const std::string tp = join(path, "tones");
        if (!t.is_array()) throw ConfigError(tp, "expected an array");
        for (std::size_t k = 0; k < t.size(); ++k) {
            const std::string ep = tp + "[" + std::to_string(k) + "]";
            only_keys(t[k], ep, {"alpha_pi", "pump_freq_hz", "phase_deg"});
            p.tones.push_back({number(t[k], "alpha_pi", ep) * kPi, hz_to_rad(number(t[k], "pump_freq_hz", ep)),
                               deg_to_rad(number(t[k], "phase_deg", ep))});
        }
        p.shared_freq = boolean_or(j, "shared_freq", path, true);
    } else {
        only_keys(j, path, {"alpha_pi", "pump_freq_hz", "phases_deg"});
        const double a = number(j, "alpha_pi", path) * kPi;
        const double f = hz_to_rad(number(j, "pump_freq_hz", path));
        for (double ph : numbers(j, "phases_deg", path)) p.tones.push_back({a, f, deg_to_rad(ph)});
    }
    if (p.tones.size() != squid_count)
        throw ConfigError(join(path, has(j, "tones") ? "tones" : "phases_deg"),
                          "expected " + std::to_string(squid_count) + " entries, one per SQUID");
    for (std::size_t k = 0; k < p.tones.size(); ++k) {
        if (p.tones[k].alpha < 0.0) throw ConfigError(path, "alpha_pi must be non-negative");
        if (p.tones[k].pump_freq < 0.0) throw ConfigError(path, "pump_freq_hz must be non-negative");
    }
    try {
        p.validate();
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return p;
}

squid::SquidParams parse_squid(const Json& j, const std::string& path) {
    only_keys(j, path, {"ic0_a", "beta_pi", "alpha_pi", "pump_freq_hz", "phase_deg"});
    squid::SquidParams s;
    s.ic0 = number_or(j, "ic0_a", path, 5e-6);
    s.beta = number_or(j, "beta_pi", path, 0.0) * kPi;
    s.alpha = number_or(j, "alpha_pi", path, 0.0) * kPi;
    s.pump_freq = hz_to_rad(number_or(j, "pump_freq_hz", path, 0.0));
    s.pump_phase = deg_to_rad(number_or(j, "phase_deg", path, 0.0));
    try {
        squid::validate(s);
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return s;
}

sn::IsolatorNetlist parse_netlist(const Json& j, const std::string& path) {
    only_keys(j, path, {"z0_ohm", "n_sidebands", "squids", "elements"});
    sn::IsolatorNetlist net;
    net.z0 = number_or(j, "z0_ohm", path, 50.0);
    net.n_sidebands = integer_or(j, "n_sidebands", path, 2);
    if (has(j, "squids")) {
        const Json& s = j.at("squids");
        if (!s.is_array()) throw ConfigError(join(path, "squids"), "expected an array");
        for (std::size_t k = 0; k < s.size(); ++k)
            net.squids.push_back(parse_squid(s[k], join(path, "squids") + "[" + std::to_string(k) + "]"));
    }
    const Json& els = require(j, "elements", path);
    const std::string ep = join(path, "elements");
    if (!els.is_array() || els.empty()) throw ConfigError(ep, "expected a non-empty array");
    for (std::size_t k = 0; k < els.size(); ++k) {
        const Json& e = els[k];
        const std::string p = ep + "[" + std::to_string(k) + "]";
        const std::string type = string_or(e, "type", p, "");
        if (type == "series_capacitor") {
            only_keys(e, p, {"type", "c_f"});
            net.elements.push_back(sn::SeriesCapacitor{number(e, "c_f", p)});
        } else if (type == "series_inductor") {
            only_keys(e, p, {"type", "l_h"});
            net.elements.push_back(sn::SeriesInductor{number(e, "l_h", p)});
        } else if (type == "series_resistor") {
            only_keys(e, p, {"type", "r_ohm"});
            net.elements.push_back(sn::SeriesResistor{number(e, "r_ohm", p)});
        } else if (type == "shunt_capacitor") {
            only_keys(e, p, {"type", "c_f"});
            net.elements.push_back(sn::ShuntCapacitor{number(e, "c_f", p)});
        } else if (type == "shunt_inductor") {
            only_keys(e, p, {"type", "l_h"});
            net.elements.push_back(sn::ShuntInductor{number(e, "l_h", p)});
        } else if (type == "shunt_resistor") {
            only_keys(e, p, {"type", "r_ohm"});
            net.elements.push_back(sn::ShuntResistor{number(e, "r_ohm", p)});
        } else if (type == "transmission_line") {
            only_keys(e, p, {"type", "z_ohm", "electrical_length_deg", "ref_freq_hz"});
            net.elements.push_back(sn::TransmissionLine{number(e, "z_ohm", p),
                                                        deg_to_rad(number(e, "electrical_length_deg", p)),
                                                        hz_to_rad(number(e, "ref_freq_hz", p))});
        } else if (type == "ideal_inverter") {
            only_keys(e, p, {"type", "j_s"});
            net.elements.push_back(sn::IdealInverter{number(e, "j_s", p)});
        } else if (type == "shunt_pole") {
            only_keys(e, p, {"type", "c_f", "l_h", "squid"});
            net.elements.push_back(sn::ShuntPole{number_or(e, "c_f", p, 0.0), number_or(e, "l_h", p, 0.0),
                                                 integer_or(e, "squid", p, -1)});
        } else {
            throw ConfigError(join(p, "type"),
                              "expected one of series_capacitor, series_inductor, series_resistor, "
                              "shunt_capacitor, shunt_inductor, shunt_resistor, transmission_line, "
                              "ideal_inverter, shunt_pole");
        }
    }
    try {
        net.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return net;
}

sn::IsolatorNetlist stage_netlist(const Json& stage, const std::string& path) {
    sn::IsolatorNetlist net;
    if (has(stage, "netlist")) {
        net = parse_netlist(stage.at("netlist"), join(path, "netlist"));
    } else {
        const auto d = parse_design(stage, path);
        try {
            net = build_isolator(d);
        } catch (const Error& e) {
            throw ConfigError(join(path, "network"), e.what());
        }
    }
    if (has(stage, "pumps")) {
        const auto plan = parse_pumps(stage.at("pumps"), join(path, "pumps"), net.squids.size());
        apply_pump_plan(plan, net);
        try {
            net.validate();
        } catch (const Error& e) {
            throw ConfigError(join(path, "pumps"), e.what());
        }
    }
    return net;
}

std::vector<double> Grid::freqs_hz() const { return sn::linspace(start_hz, stop_hz, points); }

std::vector<double> Grid::omegas() const {
    auto f = freqs_hz();
    for (auto& v : f) v = hz_to_rad(v);
    return f;
}

Grid parse_grid(const Json& root, const FilterSpec& filter) {
    Grid g{filter.center_freq - filter.bandwidth, filter.center_freq + filter.bandwidth, 201};
    if (!has(root, "grid")) return g;
    const Json& j = root.at("grid");
    only_keys(j, "grid", {"start_hz", "stop_hz", "points"});
    g.start_hz = number_or(j, "start_hz", "grid", g.start_hz);
    g.stop_hz = number_or(j, "stop_hz", "grid", g.stop_hz);
    g.points = integer_or(j, "points", "grid", g.points);
    positive(g.start_hz, "grid.start_hz");
    if (g.stop_hz < g.start_hz) throw ConfigError("grid.stop_hz", "must not be below grid.start_hz");
    if (g.points < 1 || g.points > 100000) throw ConfigError("grid.points", "must lie in [1, 100000]");
    return g;
}

tuner::TuneObjective parse_objective(const Json& j, const std::string& path, const FilterSpec& filter) {
    only_keys(j, path, {"center_hz", "iso_bw_hz", "filter_bw_hz", "min_directionality_db",
                        "max_insertion_loss_db", "min_return_loss_db", "band_points", "il_weight",
                        "rl_weight"});
    tuner::TuneObjective o;
    o.band.center = hz_to_rad(number_or(j, "center_hz", path, filter.center_freq));
    o.band.iso_bw = hz_to_rad(number_or(j, "iso_bw_hz", path, 400e6));
    o.band.filter_bw = hz_to_rad(number_or(j, "filter_bw_hz", path, filter.bandwidth));
    o.min_directionality_db = number_or(j, "min_directionality_db", path, 15.0);
    o.max_insertion_loss_db = number_or(j, "max_insertion_loss_db", path, 5.0);
    o.min_return_loss_db = number_or(j, "min_return_loss_db", path, 10.0);
    o.band_points = integer_or(j, "band_points", path, 17);
    o.il_weight = number_or(j, "il_weight", path, 2.0);
    o.rl_weight = number_or(j, "rl_weight", path, 2.0);
    try {
        o.validate();
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return o;
}

tuner::OptimizerOptions parse_optimizer(const Json& j, const std::string& path) {
    tuner::OptimizerOptions o;
    o.restarts = integer_or(j, "restarts", path, 8);
    o.evals_per_restart = integer_or(j, "evals_per_restart", path, 200);
    if (has(j, "seed")) {
        const Json& s = j.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError(join(path, "seed"), "expected a non-negative integer");
        o.seed = s.get<std::uint64_t>();
    }
    o.tune_amplitude = boolean_or(j, "tune_amplitude", path, true);
    o.tune_frequency = boolean_or(j, "tune_frequency", path, true);
    o.alpha_min = number_or(j, "alpha_min_pi", path, 0.0) * kPi;
    o.alpha_max = number_or(j, "alpha_max_pi", path, 0.15) * kPi;
    o.freq_min = hz_to_rad(number_or(j, "pump_freq_min_hz", path, 0.0));
    o.freq_max = hz_to_rad(number_or(j, "pump_freq_max_hz", path, 0.0));
    if (o.restarts < 1) throw ConfigError(join(path, "restarts"), "must be at least 1");
    if (o.evals_per_restart < 0) throw ConfigError(join(path, "evals_per_restart"), "must be non-negative");
    if (!(o.alpha_max > o.alpha_min) || o.alpha_min < 0.0)
        throw ConfigError(join(path, "alpha_max_pi"), "alpha bounds must satisfy 0 <= min < max");
    return o;
}

namespace {

void validate_output(const Json& root) {
    if (!has(root, "output")) return;
    const Json& o = root.at("output");
    only_keys(o, "output", {"path", "formats"});
    string_or(o, "path", "output", "");
    if (has(o, "formats")) {
        const Json& f = o.at("formats");
        if (!f.is_array()) throw ConfigError("output.formats", "expected an array");
        for (const auto& v : f)
            if (!v.is_string() || (v != "csv" && v != "json"))
                throw ConfigError("output.formats", "entries must be \"csv\" or \"json\"");
    }
}

}  // namespace

void validate(const Json& root) {
    only_keys(root, "", {"mode", "description", "filter", "network", "netlist", "pumps", "grid", "output",
                         "coupled_mode", "sweep", "two_squid", "optimize", "oracle", "cascade"});
    const std::string mode = string_or(root, "mode", "", "");
    if (mode.empty()) throw ConfigError("mode", "required field is missing");
    if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end())
        throw ConfigError("mode", "unknown mode '" + mode + "'");
    validate_output(root);
    // Mode-specific checks are done by the runner's parse stage, which
    // completes before any computation starts.
}

std::string config_hash(const Json& root) {
    const std::string s = root.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace jpi::config
