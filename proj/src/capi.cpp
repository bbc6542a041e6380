#include "jpi/jpi.h"

#include <memory>
#include <new>
#include <string>

#include "jpi/config.hpp"
#include "jpi/coupled_mode.hpp"
#include "jpi/errors.hpp"
#include "jpi/recipes.hpp"
#include "jpi/runner.hpp"

struct jpi_result {
    jpi::RunResult result;
    std::string summary;
    std::string payload;
    std::string hash;
    std::vector<std::string> csv;
};

struct jpi_network {
    jpi::spectral_network::IsolatorNetlist net;
};

struct jpi_sparams {
    jpi::spectral_network::SpectralSParams sp;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

jpi_status fail(jpi_status s, const std::string& msg, const std::string& field = {}) {
    g_error = msg;
    g_field = field;
    return s;
}

template <class F>
jpi_status guarded(F&& f) {
    g_error.clear();
    g_field.clear();
    try {
        f();
        return JPI_OK;
    } catch (const jpi::ConfigError& e) {
        return fail(JPI_ERR_CONFIG, e.what(), e.field());
    } catch (const jpi::SingularNetwork& e) {
        std::string msg = e.what();
        if (e.omega() > 0.0) msg += " (signal " + std::to_string(e.omega() / (2.0 * 3.141592653589793)) + " Hz)";
        return fail(JPI_ERR_SINGULAR_NETWORK, msg);
    } catch (const jpi::Error& e) {
        return fail(static_cast<jpi_status>(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(JPI_ERR_CONFIG, e.what(), "<root>");
    } catch (const std::bad_alloc&) {
        return fail(JPI_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(JPI_ERR_INTERNAL, e.what());
    }
}

nlohmann::json parse(const char* text) {
    if (!text) throw jpi::ConfigError("<root>", "null configuration text");
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw jpi::ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

extern "C" {

const char* jpi_version(void) { return JPI_VERSION_STRING; }

const char* jpi_status_name(jpi_status status) {
    if (status == JPI_OK) return "ok";
    return jpi::error_code_name(static_cast<jpi::ErrorCode>(status));
}

const char* jpi_last_error(void) { return g_error.c_str(); }
const char* jpi_last_error_field(void) { return g_field.c_str(); }

jpi_status jpi_run(const char* config_json, jpi_result** out) {
    if (!out) return fail(JPI_ERR_INVALID_PARAMETER, "null output pointer");
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<jpi_result>();
        r->result = jpi::run(parse(config_json));
        r->summary = r->result.summary.dump();
        r->hash = jpi::config::config_hash(r->result.config);
        r->csv.resize(r->result.tables.size());
        *out = r.release();
    });
}

void jpi_result_free(jpi_result* result) { delete result; }

const char* jpi_result_mode(const jpi_result* result) { return result ? result->result.mode.c_str() : ""; }

const char* jpi_result_summary_json(const jpi_result* result) { return result ? result->summary.c_str() : ""; }

const char* jpi_result_json(jpi_result* result) {
    if (!result) return "";
    result->payload = result->result.to_json(jpi::utc_timestamp()).dump(2);
    return result->payload.c_str();
}

const char* jpi_result_config_hash(const jpi_result* result) { return result ? result->hash.c_str() : ""; }

size_t jpi_result_table_count(const jpi_result* result) { return result ? result->result.tables.size() : 0; }

const char* jpi_result_table_name(const jpi_result* result, size_t index) {
    if (!result || index >= result->result.tables.size()) return nullptr;
    return result->result.tables[index].name.c_str();
}

const char* jpi_result_table_csv(jpi_result* result, size_t index) {
    if (!result || index >= result->result.tables.size()) return nullptr;
    if (result->csv[index].empty()) result->csv[index] = result->result.tables[index].to_csv();
    return result->csv[index].c_str();
}

size_t jpi_result_warning_count(const jpi_result* result) { return result ? result->result.warnings.size() : 0; }

const char* jpi_result_warning(const jpi_result* result, size_t index) {
    if (!result || index >= result->result.warnings.size()) return nullptr;
    return result->result.warnings[index].c_str();
}

jpi_status jpi_result_write(const jpi_result* result, const char* prefix, int csv, int json) {
    if (!result || !prefix) return fail(JPI_ERR_INVALID_PARAMETER, "null argument");
    return guarded([&] { result->result.write(prefix, csv != 0, json != 0); });
}

size_t jpi_recipe_count(void) { return jpi::recipes::names().size(); }

const char* jpi_recipe_name(size_t index) {
    static const auto names = jpi::recipes::names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

const char* jpi_recipe_json(const char* name) {
    const char* text = nullptr;
    guarded([&] {
        if (!name) throw jpi::ConfigError("recipe", "null name");
        text = jpi::recipes::get(name).c_str();
    });
    return text;
}

jpi_status jpi_squid_inductance(double ic0, double flux_phase, double* inductance) {
    if (!inductance) return fail(JPI_ERR_INVALID_PARAMETER, "null output pointer");
    return guarded([&] {
        if (!(ic0 > 0.0)) throw jpi::InvalidParameter("ic0 must be positive");
        *inductance = jpi::squid::squid_inductance(ic0, flux_phase);
    });
}

jpi_status jpi_directionality_closed_form(double beta_c, double beta_p, double a, double phi, double* d_linear) {
    if (!d_linear) return fail(JPI_ERR_INVALID_PARAMETER, "null output pointer");
    return guarded([&] { *d_linear = jpi::coupled_mode::directionality_closed_form(beta_c, beta_p, a, phi).D; });
}

jpi_status jpi_network_create(const char* stage_json, jpi_network** out) {
    if (!out) return fail(JPI_ERR_INVALID_PARAMETER, "null output pointer");
    *out = nullptr;
    return guarded([&] {
        const auto j = parse(stage_json);
        jpi::config::only_keys(j, "", {"filter", "network", "netlist", "pumps"});
        *out = new jpi_network{jpi::config::stage_netlist(j, "")};
    });
}

void jpi_network_free(jpi_network* network) { delete network; }

int jpi_network_sidebands(const jpi_network* network) { return network ? network->net.n_sidebands : -1; }

jpi_status jpi_network_evaluate(const jpi_network* network, double freq_hz, jpi_sparams** out) {
    if (!network || !out) return fail(JPI_ERR_INVALID_PARAMETER, "null argument");
    *out = nullptr;
    return guarded([&] {
        if (!(freq_hz > 0.0)) throw jpi::InvalidParameter("frequency must be positive");
        *out = new jpi_sparams{jpi::spectral_network::network_sparams(network->net, 2.0 * 3.141592653589793 * freq_hz)};
    });
}

void jpi_sparams_free(jpi_sparams* sparams) { delete sparams; }

jpi_status jpi_sparams_get(const jpi_sparams* sparams, int port_out, int port_in, int n, int p, double* re,
                           double* im) {
    if (!sparams || !re || !im) return fail(JPI_ERR_INVALID_PARAMETER, "null argument");
    const int N = sparams->sp.sidebands();
    if (n < -N || n > N || p < -N || p > N) return fail(JPI_ERR_DIMENSION_MISMATCH, "sideband index out of range");
    const jpi::SpectralMatrix* m = nullptr;
    if (port_out == 1 && port_in == 1) m = &sparams->sp.s11;
    if (port_out == 2 && port_in == 1) m = &sparams->sp.s21;
    if (port_out == 1 && port_in == 2) m = &sparams->sp.s12;
    if (port_out == 2 && port_in == 2) m = &sparams->sp.s22;
    if (!m) return fail(JPI_ERR_INVALID_PARAMETER, "ports must be 1 or 2");
    const auto z = m->at(n, p);
    *re = z.real();
    *im = z.imag();
    g_error.clear();
    g_field.clear();
    return JPI_OK;
}

}  // extern "C"
