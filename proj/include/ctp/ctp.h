/* ctp.h - C interface to the CTP daily gold/bitcoin trading engine.
 *
 * All handles are opaque; every *_free tolerates NULL. Functions return
 * CTP_OK (0) on success or a ctp_status error code; ctp_last_error()
 * returns a thread-local message describing the most recent failure.
 * Strings written into caller buffers are NUL-terminated and truncated to
 * the given capacity.
 */

#ifndef CTP_H
#define CTP_H

#include <stddef.h>

#if defined(_WIN32)
#define CTP_API __declspec(dllexport)
#else
#define CTP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctp_status {
    CTP_OK = 0,
    CTP_ERROR_INVALID = 1,  /* bad arguments or misuse */
    CTP_ERROR_DATA = 2,     /* unreadable or malformed input data */
    CTP_ERROR_NUMERIC = 3,  /* a numerical procedure failed */
    CTP_ERROR_INTERNAL = 4
} ctp_status;

typedef enum ctp_asset {
    CTP_ASSET_GOLD = 0,
    CTP_ASSET_BITCOIN = 1
} ctp_asset;

typedef struct ctp_series ctp_series;     /* dated daily price series */
typedef struct ctp_calendar ctp_calendar; /* per-asset tradability calendar */
typedef struct ctp_config ctp_config;     /* run configuration (key-value) */
typedef struct ctp_report ctp_report;     /* backtest result */

CTP_API const char* ctp_version(void);

/* Message for the most recent error on this thread; empty string if none. */
CTP_API const char* ctp_last_error(void);

/* ---- price series ---------------------------------------------------- */

/* Loads a (date, price) CSV with a single header line; date format is
 * auto-detected (M/D/YY or YYYY-MM-DD). Rows with empty or non-positive
 * prices are dropped; *dropped_rows (optional) receives the count. */
CTP_API int ctp_series_load_csv(const char* path, ctp_asset asset, ctp_series** out,
                                long long* dropped_rows);

/* Fills every missing calendar day with a shape-preserving piecewise cubic
 * Hermite value, tagged interpolated. Needs at least 3 observed points. */
CTP_API int ctp_series_hermite_fill(const ctp_series* in, ctp_series** out);

/* Truncates both gap-filled series to their common date range and derives
 * the trading calendar (gold trades only on its observed days). */
CTP_API int ctp_series_align(const ctp_series* gold, const ctp_series* btc,
                             ctp_series** gold_out, ctp_series** btc_out,
                             ctp_calendar** calendar_out);

/* Writes "date,price,source" rows; numbers round-trip exactly. */
CTP_API int ctp_series_export_csv(const ctp_series* series, const char* path);

CTP_API long long ctp_series_size(const ctp_series* series);

/* Reads one point. Any output pointer may be NULL. date_buf wants at least
 * 11 bytes for "YYYY-MM-DD". */
CTP_API int ctp_series_point(const ctp_series* series, long long index, char* date_buf,
                             size_t date_buf_len, double* price, int* interpolated);

CTP_API void ctp_series_free(ctp_series* series);

/* ---- trading calendar ------------------------------------------------ */

CTP_API int ctp_calendar_is_tradable(const ctp_calendar* calendar, ctp_asset asset,
                                     const char* date, int* tradable);

CTP_API void ctp_calendar_free(ctp_calendar* calendar);

/* ---- configuration --------------------------------------------------- */

/* A fresh configuration with every key at its default. */
CTP_API int ctp_config_create(ctp_config** out);

/* Merges "key = value" lines ('#' comments allowed); unknown keys fail. */
CTP_API int ctp_config_load_file(ctp_config* config, const char* path);

CTP_API int ctp_config_set(ctp_config* config, const char* key, const char* value);

CTP_API int ctp_config_get(const ctp_config* config, const char* key, char* buf,
                           size_t buf_len);

CTP_API void ctp_config_free(ctp_config* config);

/* ---- forecasting ----------------------------------------------------- */

/* Fits ARIMA(p,d,q) on the trailing window ending at `date` and predicts
 * `horizon` days ahead. window_length is the fixed trailing length; with
 * adaptive != 0 it is the starting point of a hill-climb instead. Optional
 * outputs: points (horizon doubles), sigma (std of the predicted points),
 * r2 (in-sample fit), white_noise_pass (Ljung-Box at 0.05), chosen_window. */
CTP_API int ctp_forecast_at(const ctp_series* series, const char* date, int p, int d, int q,
                            int window_length, int adaptive, int horizon, double* points,
                            double* sigma, double* r2, int* white_noise_pass,
                            int* chosen_window);

/* Writes correlogram.csv, fit.csv and residual_correlogram.csv for the same
 * trailing window into out_dir. */
CTP_API int ctp_forecast_diagnostics(const ctp_series* series, const char* date, int p, int d,
                                     int q, int window_length, int adaptive,
                                     const char* out_dir);

/* ---- backtesting ----------------------------------------------------- */

/* The PSO-optimized daily strategy over [start_date, end_date). */
CTP_API int ctp_backtest_run(const ctp_series* gold, const ctp_series* btc,
                             const ctp_calendar* calendar, const ctp_config* config,
                             ctp_report** out);

/* The mean-variance grid-sweep baseline on the same loop. */
CTP_API int ctp_backtest_run_markowitz(const ctp_series* gold, const ctp_series* btc,
                                       const ctp_calendar* calendar, const ctp_config* config,
                                       ctp_report** out);

CTP_API int ctp_report_final_value(const ctp_report* report, double* value);
CTP_API long long ctp_report_days(const ctp_report* report);
CTP_API int ctp_report_fallback_days(const ctp_report* report);

/* Reads one day's committed decision and settled value. */
CTP_API int ctp_report_day(const ctp_report* report, long long index, char* date_buf,
                           size_t date_buf_len, double* x, double* y, double* value_after);

CTP_API int ctp_report_export_csv(const ctp_report* report, const char* path);
CTP_API int ctp_report_export_json(const ctp_report* report, const char* path);

/* Re-reads a report CSV produced by ctp_report_export_csv. */
CTP_API int ctp_report_load_csv(const char* path, ctp_report** out);

CTP_API void ctp_report_free(ctp_report* report);

/* ---- sensitivity harnesses ------------------------------------------- */

/* Replays the report's committed schedule with multiplicative 1-3% (per
 * config) perturbations and writes trial,final_value rows to out_csv.
 * baseline (optional) receives the unperturbed replayed final value. */
CTP_API int ctp_sensitivity_scheme(const ctp_report* report, const ctp_series* gold,
                                   const ctp_series* btc, const ctp_calendar* calendar,
                                   const ctp_config* config, const char* out_csv,
                                   double* baseline);

/* Reruns the backtest once per +0%, +0.1%V0, +/-0.1%alpha, +/-0.1%beta
 * delta and writes label,final_value rows to out_csv. */
CTP_API int ctp_sensitivity_params(const ctp_series* gold, const ctp_series* btc,
                                   const ctp_calendar* calendar, const ctp_config* config,
                                   int use_markowitz, const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* CTP_H */
