/* C interface of the tsxfer library. All functions return a tsx_status; on
 * failure tsx_last_error() describes the problem for the calling thread. */
#ifndef TSXFER_H
#define TSXFER_H

#include <stddef.h>
#include <stdint.h>

#if defined(TSX_BUILDING_LIBRARY)
#define TSX_API __attribute__((visibility("default")))
#else
#define TSX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsx_status {
    TSX_OK = 0,
    TSX_ERR_USAGE = 1,   /* bad configuration or argument */
    TSX_ERR_DATA = 2,    /* malformed, missing or insufficient data */
    TSX_ERR_NUMERIC = 3, /* degenerate numerical input */
    TSX_ERR_INTERNAL = 4
} tsx_status;

typedef struct tsx_config tsx_config;
typedef struct tsx_dataset tsx_dataset;

typedef struct tsx_ols_result {
    double slope;
    double intercept;
    double p_value;
    int exact_fit;
} tsx_ols_result;

TSX_API const char* tsx_version(void);

/* Message of the last failure on this thread ("" if none). */
TSX_API const char* tsx_last_error(void);
/* Symbolic code of the last failure, e.g. "UpstreamMissing" ("" if none). */
TSX_API const char* tsx_last_error_code(void);

/* ---- configuration and commands ---- */

TSX_API tsx_status tsx_config_load(const char* path, tsx_config** out);
TSX_API void tsx_config_free(tsx_config* config);
TSX_API tsx_status tsx_config_set_output(tsx_config* config, const char* dir);
TSX_API tsx_status tsx_config_set_seed(tsx_config* config, uint64_t seed);
/* "basic10", "catch24" or "both". */
TSX_API tsx_status tsx_config_set_features(tsx_config* config, const char* sets);
/* "zero_shot" or "fine_tuned"; restricts the relate command. */
TSX_API tsx_status tsx_config_set_mode(tsx_config* config, const char* mode);
/* Comma-separated source names; NULL leaves the list unchanged. */
TSX_API tsx_status tsx_config_set_source_filter(tsx_config* config, const char* include, const char* exclude);

/* Runs "features", "similarity", "diversity", "pca", "evaluate", "relate",
 * "report" or "all". Warnings of the run are available afterwards. */
TSX_API tsx_status tsx_run(tsx_config* config, const char* command);
TSX_API size_t tsx_warning_count(const tsx_config* config);
TSX_API const char* tsx_warning(const tsx_config* config, size_t index);
TSX_API size_t tsx_output_count(const tsx_config* config);
TSX_API const char* tsx_output(const tsx_config* config, size_t index);

/* Writes the synthetic study (data, forecasts, config.toml) into dir. */
TSX_API tsx_status tsx_write_fixtures(const char* dir, uint64_t seed);

/* ---- data ---- */

/* role: "source" or "target". */
TSX_API tsx_status tsx_dataset_load(const char* path, const char* role, tsx_dataset** out);
TSX_API void tsx_dataset_free(tsx_dataset* dataset);
TSX_API size_t tsx_dataset_series_count(const tsx_dataset* dataset);
TSX_API size_t tsx_dataset_series_length(const tsx_dataset* dataset, size_t index);
TSX_API const double* tsx_dataset_series_values(const tsx_dataset* dataset, size_t index);

/* ---- numerical building blocks ---- */

/* Number of features in a set ("basic10" or "catch24"), 0 if unknown. */
TSX_API size_t tsx_feature_count(const char* set);
TSX_API const char* tsx_feature_name(const char* set, size_t index);
/* Fills out[0..tsx_feature_count(set)); capacity must be large enough. */
TSX_API tsx_status tsx_features(const double* values, size_t n, const char* set, double* out, size_t capacity);

TSX_API tsx_status tsx_dtw_distance(const double* a, size_t na, const double* b, size_t nb, double* out);
TSX_API tsx_status tsx_ols_fit(const double* x, const double* y, size_t n, tsx_ols_result* out);
TSX_API tsx_status tsx_plan_origins(size_t train_len, size_t test_len, size_t horizon, size_t* count);
TSX_API tsx_status tsx_naive_rmse_past(const double* y, size_t n, size_t t_r, double* out);

#ifdef __cplusplus
}
#endif

#endif
