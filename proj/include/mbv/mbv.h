/* mbv — market-based portfolio variance, C API.
 *
 * All functions return mbv_status; MBV_OK means success. On failure,
 * mbv_last_error() returns a thread-local description of the most recent
 * error. Objects are opaque handles created and destroyed through this API;
 * strings returned as `const char*` stay owned by the handle they came from
 * and remain valid until it is freed. Strings returned through `char**` are
 * released with mbv_string_free().
 */
#ifndef MBV_H
#define MBV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MBV_API __declspec(dllexport)
#else
#define MBV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mbv_status {
    MBV_OK = 0,
    MBV_ERR_INVALID_ARGUMENT,
    MBV_ERR_NONPOSITIVE_FIELD,
    MBV_ERR_UNSORTED_INPUT,
    MBV_ERR_EMPTY_BUCKET,
    MBV_ERR_DEGENERATE_SERIES,
    MBV_ERR_ZERO_TOTAL_VOLUME,
    MBV_ERR_UNKNOWN_SECURITY,
    MBV_ERR_MISMATCHED_LENGTH,
    MBV_ERR_EMPTY_LIST,
    MBV_ERR_ZERO_WEIGHT_SUM,
    MBV_ERR_WEIGHT_SUM,
    MBV_ERR_DOMAIN,
    MBV_ERR_INFEASIBLE_TARGETS,
    MBV_ERR_IO,
    MBV_ERR_PARSE,
    MBV_ERR_INTERNAL
} mbv_status;

MBV_API const char* mbv_status_name(mbv_status status);
MBV_API const char* mbv_last_error(void);
MBV_API const char* mbv_version(void);
MBV_API void mbv_string_free(char* text);

/* Epoch seconds from a number or an ISO-8601 timestamp. */
MBV_API mbv_status mbv_parse_time(const char* text, double* out);
/* Seconds from a number with an optional s/m/h/d suffix. */
MBV_API mbv_status mbv_parse_duration(const char* text, double* out);

/* ---- trades ---------------------------------------------------------- */

typedef struct mbv_ticks mbv_ticks;

MBV_API mbv_status mbv_ticks_create(mbv_ticks** out);
MBV_API void mbv_ticks_free(mbv_ticks* ticks);
MBV_API mbv_status mbv_ticks_append(mbv_ticks* ticks, double time,
                                    const char* security, double value,
                                    double volume);
/* CSV (`time,security,value|price,volume`) or JSONL, sniffed from content. */
MBV_API mbv_status mbv_ticks_load(mbv_ticks** out, const char* path);
MBV_API size_t mbv_ticks_count(const mbv_ticks* ticks);

/* ---- portfolio -------------------------------------------------------- */

typedef struct mbv_portfolio mbv_portfolio;

MBV_API mbv_status mbv_portfolio_create(mbv_portfolio** out,
                                        double composition_time);
MBV_API void mbv_portfolio_free(mbv_portfolio* portfolio);
MBV_API mbv_status mbv_portfolio_add(mbv_portfolio* portfolio,
                                     const char* security, double shares,
                                     double reference_price);
MBV_API mbv_status mbv_portfolio_load(mbv_portfolio** out, const char* path);
MBV_API size_t mbv_portfolio_size(const mbv_portfolio* portfolio);

/* ---- analysis --------------------------------------------------------- */

typedef struct mbv_window {
    double center;
    double width;       /* seconds */
    int32_t buckets;    /* N >= 2 */
    int32_t lenient;    /* nonzero: merge empty buckets leftward */
    int32_t whole_series; /* nonzero: span all ticks, ignore center/width */
} mbv_window;

typedef struct mbv_report mbv_report;

MBV_API mbv_status mbv_analyze(const mbv_ticks* ticks,
                               const mbv_portfolio* portfolio,
                               const mbv_window* window, mbv_report** out);
MBV_API mbv_status mbv_analyze_files(const char* trades_path,
                                     const char* portfolio_path,
                                     const mbv_window* window,
                                     mbv_report** out);
MBV_API void mbv_report_free(mbv_report* report);

/* Canonical JSON document (deterministic byte-for-byte). */
MBV_API const char* mbv_report_json(const mbv_report* report);
/* Numeric field lookup by JSON pointer, e.g. "/variance/theta_weighted". */
MBV_API mbv_status mbv_report_number(const mbv_report* report,
                                     const char* json_pointer, double* out);
/* format: "json" or "csv" (flat tables). */
MBV_API mbv_status mbv_report_write(const mbv_report* report, const char* path,
                                    const char* format);

/* ---- synthetic data and regime sweeps --------------------------------- */

/* chi sweep over synthetic series; regime is HIGH_PSI0, LOW_PSI0 or
 * ZERO_COV. Pass NaN for a/psi0 to keep the regime preset. The CSV table
 * lands in *out_csv. */
MBV_API mbv_status mbv_sweep_csv(const char* regime, const double* chis,
                                 size_t chi_count, double a, double psi0,
                                 int32_t buckets, uint64_t seed,
                                 char** out_csv);

/* Generator spec is a JSON file (see README). Writes a trades CSV and a
 * portfolio file. */
MBV_API mbv_status mbv_generate_files(const char* spec_json_path,
                                      const char* trades_out_path,
                                      const char* portfolio_out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MBV_H */
