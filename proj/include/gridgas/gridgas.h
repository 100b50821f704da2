#ifndef GRIDGAS_H
#define GRIDGAS_H

/* C interface to the gridgas library.
 *
 * A model is an opaque handle holding a parsed configuration. Experiment calls take an
 * optional JSON object of run options (the keys of a config file's "run" object), which
 * override the model's own run settings. Returned strings are owned by the caller and
 * released with gg_string_free. On failure the thread's last error message is set. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GG_API __declspec(dllexport)
#else
#define GG_API __attribute__((visibility("default")))
#endif

typedef struct gg_model gg_model;

typedef enum gg_status {
  GG_OK = 0,
  GG_CHECK_FAILED = 2, /* the experiment ran, a statistical check in its report failed */
  GG_CONFIG_ERROR = 3,
  GG_NUMERIC_ERROR = 4, /* numerical failure or component orbit cap exceeded */
  GG_INVALID_ARGUMENT = 5,
  GG_INTERNAL_ERROR = 6
} gg_status;

GG_API const char* gg_version(void);
GG_API int gg_schema_version(void);

/* Message for the most recent failed call on this thread ("" if none). */
GG_API const char* gg_last_error(void);

GG_API gg_status gg_model_load(const char* config_json, gg_model** out);
GG_API gg_status gg_model_load_file(const char* path, gg_model** out);
GG_API void gg_model_free(gg_model* model);

/* Canonical presentation of the model as JSON (loadable again with gg_model_load). */
GG_API gg_status gg_model_presentation(const gg_model* model, char** json_out);

/* Each call writes a JSON report; csv_out (may be NULL) receives the sample stream. */
GG_API gg_status gg_analyze(const gg_model* model, const char* options_json, char** report_out);
GG_API gg_status gg_simulate(const gg_model* model, const char* options_json, char** report_out, char** csv_out);
GG_API gg_status gg_limit_tail(const gg_model* model, const char* options_json, char** report_out, char** csv_out);
GG_API gg_status gg_flight(const gg_model* model, const char* options_json, char** report_out, char** csv_out);
GG_API gg_status gg_siegel_check(const gg_model* model, const char* options_json, char** report_out);
GG_API gg_status gg_compare(const gg_model* model, const char* options_json, char** report_out);

GG_API void gg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
