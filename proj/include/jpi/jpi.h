#ifndef JPI_JPI_H
#define JPI_JPI_H

#include <stddef.h>

#if defined(JPI_BUILDING_LIBRARY)
#define JPI_API __attribute__((visibility("default")))
#else
#define JPI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jpi_status {
    JPI_OK = 0,
    JPI_ERR_INVALID_PARAMETER = 1,
    JPI_ERR_DIVERGENT_INDUCTANCE = 2,
    JPI_ERR_SINGULAR_NETWORK = 3,
    JPI_ERR_INFEASIBLE = 4,
    JPI_ERR_CONFIG = 5,
    JPI_ERR_IO = 6,
    JPI_ERR_NUMERICAL = 7,
    JPI_ERR_DIMENSION_MISMATCH = 8,
    JPI_ERR_INTERNAL = 99
} jpi_status;

typedef struct jpi_result jpi_result;
typedef struct jpi_network jpi_network;
typedef struct jpi_sparams jpi_sparams;

JPI_API const char* jpi_version(void);
JPI_API const char* jpi_status_name(jpi_status status);

/* Message and JSON path of the last failure on the calling thread. The
   field is empty unless the failure was a configuration error. */
JPI_API const char* jpi_last_error(void);
JPI_API const char* jpi_last_error_field(void);

/* Runs a JSON configuration. On success *out owns the result. */
JPI_API jpi_status jpi_run(const char* config_json, jpi_result** out);
JPI_API void jpi_result_free(jpi_result* result);

JPI_API const char* jpi_result_mode(const jpi_result* result);
JPI_API const char* jpi_result_summary_json(const jpi_result* result);
/* Full structured payload with metadata; valid until the result is freed. */
JPI_API const char* jpi_result_json(jpi_result* result);
JPI_API const char* jpi_result_config_hash(const jpi_result* result);
JPI_API size_t jpi_result_table_count(const jpi_result* result);
JPI_API const char* jpi_result_table_name(const jpi_result* result, size_t index);
JPI_API const char* jpi_result_table_csv(jpi_result* result, size_t index);
JPI_API size_t jpi_result_warning_count(const jpi_result* result);
JPI_API const char* jpi_result_warning(const jpi_result* result, size_t index);
JPI_API jpi_status jpi_result_write(const jpi_result* result, const char* prefix, int csv, int json);

JPI_API size_t jpi_recipe_count(void);
JPI_API const char* jpi_recipe_name(size_t index);
/* NULL with JPI_ERR_CONFIG recorded when the name is unknown. */
JPI_API const char* jpi_recipe_json(const char* name);

JPI_API jpi_status jpi_squid_inductance(double ic0, double flux_phase, double* inductance);
JPI_API jpi_status jpi_directionality_closed_form(double beta_c, double beta_p, double a, double phi,
                                                  double* d_linear);

/* A netlist built from a stage object ({filter, network, pumps} or
   {netlist, pumps}). */
JPI_API jpi_status jpi_network_create(const char* stage_json, jpi_network** out);
JPI_API void jpi_network_free(jpi_network* network);
JPI_API int jpi_network_sidebands(const jpi_network* network);
JPI_API jpi_status jpi_network_evaluate(const jpi_network* network, double freq_hz, jpi_sparams** out);
JPI_API void jpi_sparams_free(jpi_sparams* sparams);
/* S_{out,in}^{n,p} for ports 1..2 and sideband offsets in [-N, N]. */
JPI_API jpi_status jpi_sparams_get(const jpi_sparams* sparams, int port_out, int port_in, int n, int p,
                                   double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
