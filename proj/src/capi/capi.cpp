#include "ctp/ctp.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "backtest.hpp"
#include "config.hpp"
#include "dates.hpp"
#include "forecaster.hpp"
#include "market_data.hpp"
#include "sensitivity.hpp"
#include "util.hpp"

struct ctp_series {
    ctp::market_data::PriceSeries series;
};
struct ctp_calendar {
    ctp::market_data::TradingCalendar calendar;
};
struct ctp_config {
    ctp::config::Config config;
};
struct ctp_report {
    ctp::backtest::BacktestReport report;
};

namespace {

namespace md = ctp::market_data;
namespace fc = ctp::forecaster;

thread_local std::string g_last_error;

struct BadArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return CTP_OK;
    } catch (const BadArgument& e) {
        g_last_error = e.what();
        return CTP_ERROR_INVALID;
    } catch (const ctp::util::DataError& e) {
        g_last_error = e.what();
        return CTP_ERROR_DATA;
    } catch (const ctp::util::NumericError& e) {
        g_last_error = e.what();
        return CTP_ERROR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CTP_ERROR_INVALID;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CTP_ERROR_INTERNAL;
    }
}

template <typename T>
void require(const T* p, const char* name) {
    if (p == nullptr) throw BadArgument(std::string(name) + " must not be NULL");
}

md::Asset to_asset(ctp_asset a) {
    if (a == CTP_ASSET_GOLD) return md::Asset::Gold;
    if (a == CTP_ASSET_BITCOIN) return md::Asset::Bitcoin;
    throw BadArgument("unknown asset id");
}

void copy_string(const std::string& s, char* buf, size_t len) {
    if (buf == nullptr || len == 0) return;
    const size_t n = std::min(len - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

// Trailing prices ending at `date` plus the fit at the requested (or
// adaptively chosen) window; shared by the forecast entry points.
struct ForecastContext {
    std::vector<double> window;
    std::vector<ctp::dates::Date> window_dates;
    fc::ArimaFit fit;
    int chosen_window = 0;
    double r2 = 0.0;
};

ForecastContext prepare_forecast(const md::PriceSeries& series, const char* date_text, int p,
                                 int d, int q, int window_length, bool adaptive) {
    fc::ArimaSpec spec{p, d, q};
    const ctp::dates::Date date = ctp::dates::parse_date(date_text);
    const std::size_t idx = series.index_of(date);

    std::vector<double> history;
    history.reserve(idx + 1);
    for (std::size_t i = 0; i <= idx; ++i) history.push_back(series.points[i].price);

    int window = window_length;
    if (adaptive) {
        if (static_cast<int>(history.size()) < spec.min_sample())
            throw ctp::util::DataError("insufficient history before the requested date");
        window = fc::adaptive_window(history, spec, window_length).length;
    } else if (static_cast<int>(history.size()) < window) {
        throw ctp::util::DataError("insufficient history before the requested date");
    }
    window = std::min<int>(window, static_cast<int>(history.size()));

    ForecastContext out;
    out.chosen_window = window;
    out.window.assign(history.end() - window, history.end());
    for (std::size_t i = idx + 1 - window; i <= idx; ++i)
        out.window_dates.push_back(series.points[i].date);
    out.fit = fc::fit(out.window, spec);
    std::vector<double> actual(out.window.begin() + out.fit.fitted_offset, out.window.end());
    out.r2 = fc::r_squared(actual, out.fit.fitted);
    return out;
}

}  // namespace

extern "C" {

const char* ctp_version(void) { return "0.1.0"; }

const char* ctp_last_error(void) { return g_last_error.c_str(); }

int ctp_series_load_csv(const char* path, ctp_asset asset, ctp_series** out,
                        long long* dropped_rows) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto loaded = md::load_price_csv(path, to_asset(asset));
        if (dropped_rows != nullptr)
            *dropped_rows = static_cast<long long>(loaded.dropped_rows);
        *out = new ctp_series{std::move(loaded.series)};
    });
}

int ctp_series_hermite_fill(const ctp_series* in, ctp_series** out) {
    return guarded([&] {
        require(in, "in");
        require(out, "out");
        *out = new ctp_series{md::hermite_fill(in->series)};
    });
}

int ctp_series_align(const ctp_series* gold, const ctp_series* btc, ctp_series** gold_out,
                     ctp_series** btc_out, ctp_calendar** calendar_out) {
    return guarded([&] {
        require(gold, "gold");
        require(btc, "btc");
        require(gold_out, "gold_out");
        require(btc_out, "btc_out");
        require(calendar_out, "calendar_out");
        auto aligned = md::align(gold->series, btc->series);
        *gold_out = new ctp_series{std::move(aligned.gold)};
        *btc_out = new ctp_series{std::move(aligned.btc)};
        *calendar_out = new ctp_calendar{std::move(aligned.calendar)};
    });
}

int ctp_series_export_csv(const ctp_series* series, const char* path) {
    return guarded([&] {
        require(series, "series");
        require(path, "path");
        md::export_series_csv(series->series, path);
    });
}

long long ctp_series_size(const ctp_series* series) {
    return series == nullptr ? 0 : static_cast<long long>(series->series.size());
}

int ctp_series_point(const ctp_series* series, long long index, char* date_buf,
                     size_t date_buf_len, double* price, int* interpolated) {
    return guarded([&] {
        require(series, "series");
        if (index < 0 || index >= static_cast<long long>(series->series.size()))
            throw BadArgument("point index out of range");
        const auto& p = series->series.points[static_cast<std::size_t>(index)];
        copy_string(ctp::dates::to_string(p.date), date_buf, date_buf_len);
        if (price != nullptr) *price = p.price;
        if (interpolated != nullptr)
            *interpolated = p.source == md::PointSource::Interpolated ? 1 : 0;
    });
}

void ctp_series_free(ctp_series* series) { delete series; }

int ctp_calendar_is_tradable(const ctp_calendar* calendar, ctp_asset asset, const char* date,
                             int* tradable) {
    return guarded([&] {
        require(calendar, "calendar");
        require(date, "date");
        require(tradable, "tradable");
        *tradable =
            calendar->calendar.is_tradable(to_asset(asset), ctp::dates::parse_date(date)) ? 1
                                                                                          : 0;
    });
}

void ctp_calendar_free(ctp_calendar* calendar) { delete calendar; }

int ctp_config_create(ctp_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new ctp_config{};
    });
}

int ctp_config_load_file(ctp_config* config, const char* path) {
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        config->config.load_file(path);
    });
}

int ctp_config_set(ctp_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->config.set(key, value);
    });
}

int ctp_config_get(const ctp_config* config, const char* key, char* buf, size_t buf_len) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        copy_string(config->config.get(key), buf, buf_len);
    });
}

void ctp_config_free(ctp_config* config) { delete config; }

int ctp_forecast_at(const ctp_series* series, const char* date, int p, int d, int q,
                    int window_length, int adaptive, int horizon, double* points, double* sigma,
                    double* r2, int* white_noise_pass, int* chosen_window) {
    return guarded([&] {
        require(series, "series");
        require(date, "date");
        if (horizon < 1) throw BadArgument("horizon must be >= 1");
        auto ctx = prepare_forecast(series->series, date, p, d, q, window_length,
                                    adaptive != 0);
        auto prediction = fc::forecast(ctx.fit, ctx.window, horizon);
        if (points != nullptr)
            std::copy(prediction.points.begin(), prediction.points.end(), points);
        if (sigma != nullptr) *sigma = prediction.sigma;
        if (r2 != nullptr) *r2 = ctx.r2;
        if (chosen_window != nullptr) *chosen_window = ctx.chosen_window;
        if (white_noise_pass != nullptr) {
            std::vector<double> resid(ctx.fit.residuals.begin() + ctx.fit.spec.p,
                                      ctx.fit.residuals.end());
            const int lags = std::min<int>(20, static_cast<int>(resid.size()) - 1);
            auto rep = fc::white_noise_check(resid, lags, p + q);
            *white_noise_pass = rep.pass ? 1 : 0;
        }
    });
}

int ctp_forecast_diagnostics(const ctp_series* series, const char* date, int p, int d, int q,
                             int window_length, int adaptive, const char* out_dir) {
    return guarded([&] {
        require(series, "series");
        require(date, "date");
        require(out_dir, "out_dir");
        auto ctx = prepare_forecast(series->series, date, p, d, q, window_length,
                                    adaptive != 0);

        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);

        auto z = fc::difference(ctx.window, d);
        const int lags = std::min<int>(20, static_cast<int>(z.size()) - 1);
        fc::export_correlogram_csv((dir / "correlogram.csv").string(), fc::acf(z, lags),
                                   fc::pacf(z, lags));

        std::vector<std::string> labels;
        std::vector<double> actual;
        for (std::size_t i = ctx.fit.fitted_offset; i < ctx.window.size(); ++i) {
            labels.push_back(ctp::dates::to_string(ctx.window_dates[i]));
            actual.push_back(ctx.window[i]);
        }
        std::vector<double> resid(ctx.fit.residuals.begin() + ctx.fit.spec.p,
                                  ctx.fit.residuals.end());
        fc::export_fit_csv((dir / "fit.csv").string(), labels, actual, ctx.fit.fitted, resid);

        const int rlags = std::min<int>(20, static_cast<int>(resid.size()) - 1);
        fc::export_correlogram_csv((dir / "residual_correlogram.csv").string(),
                                   fc::acf(resid, rlags), fc::pacf(resid, rlags));
    });
}

int ctp_backtest_run(const ctp_series* gold, const ctp_series* btc,
                     const ctp_calendar* calendar, const ctp_config* config,
                     ctp_report** out) {
    return guarded([&] {
        require(gold, "gold");
        require(btc, "btc");
        require(calendar, "calendar");
        require(config, "config");
        require(out, "out");
        auto cfg = config->config.to_backtest();
        *out = new ctp_report{
            ctp::backtest::run(gold->series, btc->series, calendar->calendar, cfg)};
    });
}

int ctp_backtest_run_markowitz(const ctp_series* gold, const ctp_series* btc,
                               const ctp_calendar* calendar, const ctp_config* config,
                               ctp_report** out) {
    return guarded([&] {
        require(gold, "gold");
        require(btc, "btc");
        require(calendar, "calendar");
        require(config, "config");
        require(out, "out");
        auto cfg = config->config.to_backtest();
        *out = new ctp_report{
            ctp::backtest::run_markowitz(gold->series, btc->series, calendar->calendar, cfg)};
    });
}

int ctp_report_final_value(const ctp_report* report, double* value) {
    return guarded([&] {
        require(report, "report");
        require(value, "value");
        *value = report->report.final_value;
    });
}

long long ctp_report_days(const ctp_report* report) {
    return report == nullptr ? 0 : static_cast<long long>(report->report.records.size());
}

int ctp_report_fallback_days(const ctp_report* report) {
    return report == nullptr ? 0 : report->report.fallback_days;
}

int ctp_report_day(const ctp_report* report, long long index, char* date_buf,
                   size_t date_buf_len, double* x, double* y, double* value_after) {
    return guarded([&] {
        require(report, "report");
        if (index < 0 || index >= static_cast<long long>(report->report.records.size()))
            throw BadArgument("record index out of range");
        const auto& r = report->report.records[static_cast<std::size_t>(index)];
        copy_string(ctp::dates::to_string(r.date), date_buf, date_buf_len);
        if (x != nullptr) *x = r.decision.x;
        if (y != nullptr) *y = r.decision.y;
        if (value_after != nullptr) *value_after = r.value_after;
    });
}

int ctp_report_export_csv(const ctp_report* report, const char* path) {
    return guarded([&] {
        require(report, "report");
        require(path, "path");
        ctp::backtest::export_report_csv(report->report, path);
    });
}

int ctp_report_export_json(const ctp_report* report, const char* path) {
    return guarded([&] {
        require(report, "report");
        require(path, "path");
        ctp::backtest::export_report_json(report->report, path);
    });
}

int ctp_report_load_csv(const char* path, ctp_report** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new ctp_report{ctp::backtest::load_report_csv(path)};
    });
}

void ctp_report_free(ctp_report* report) { delete report; }

int ctp_sensitivity_scheme(const ctp_report* report, const ctp_series* gold,
                           const ctp_series* btc, const ctp_calendar* calendar,
                           const ctp_config* config, const char* out_csv, double* baseline) {
    return guarded([&] {
        require(report, "report");
        require(gold, "gold");
        require(btc, "btc");
        require(calendar, "calendar");
        require(config, "config");
        require(out_csv, "out_csv");

        ctp::backtest::BacktestConfig cfg;
        cfg.initial_cash = config->config.get_double("initial_cash");
        cfg.rates.alpha = config->config.get_double("alpha");
        cfg.rates.beta = config->config.get_double("beta");
        cfg.rates.symmetric = config->config.get_bool("symmetric_commissions");
        cfg.risk.delta = config->config.get_double("delta");

        auto result = ctp::sensitivity::perturb_schedule(
            report->report, gold->series, btc->series, calendar->calendar, cfg,
            config->config.to_perturbation());
        ctp::sensitivity::export_trials_csv(out_csv, result);
        if (baseline != nullptr) *baseline = result.baseline;
    });
}

int ctp_sensitivity_params(const ctp_series* gold, const ctp_series* btc,
                           const ctp_calendar* calendar, const ctp_config* config,
                           int use_markowitz, const char* out_csv) {
    return guarded([&] {
        require(gold, "gold");
        require(btc, "btc");
        require(calendar, "calendar");
        require(config, "config");
        require(out_csv, "out_csv");
        auto cfg = config->config.to_backtest();
        auto deltas = ctp::sensitivity::default_deltas(
            config->config.get_bool("sensitivity_absolute"));
        auto rows = ctp::sensitivity::parameter_sensitivity(
            gold->series, btc->series, calendar->calendar, cfg, deltas, use_markowitz != 0);
        ctp::sensitivity::export_rows_csv(out_csv, rows);
    });
}

}  // extern "C"
