#include "backtest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "numeric.hpp"
#include "util.hpp"

namespace ctp::backtest {

using market_data::Asset;
using portfolio::TradeDecision;
using util::DataError;
using util::NumericError;

namespace {

constexpr int kPlannedDays = 3;

struct Engine {
    const BacktestConfig& cfg;
    const TradingCalendar& calendar;
    Date data_first{};
    Date data_last{};
    std::vector<double> gold_px;
    std::vector<double> btc_px;

    Engine(const PriceSeries& gold, const PriceSeries& btc, const TradingCalendar& cal,
           const BacktestConfig& config)
        : cfg(config), calendar(cal) {
        if (gold.empty() || btc.empty()) throw DataError("empty price series");
        if (!gold.contiguous() || !btc.contiguous())
            throw DataError("backtest expects gap-filled series");
        if (gold.first_date() != btc.first_date() || gold.last_date() != btc.last_date())
            throw DataError("series must be aligned to a common range");
        data_first = gold.first_date();
        data_last = gold.last_date();
        for (const auto& p : gold.points) gold_px.push_back(p.price);
        for (const auto& p : btc.points) btc_px.push_back(p.price);

        if (!(cfg.start < cfg.end)) throw DataError("start must precede end");
        if (!(cfg.initial_cash > 0.0)) throw DataError("initial cash must be positive");
        if (cfg.end > data_last) throw DataError("end date beyond available data");
        if (cfg.window.length < cfg.arima.min_sample())
            throw DataError("window shorter than the minimum identifiable ARIMA sample");
        const int need = cfg.window.length;
        if (cfg.start - (need - 1) < data_first)
            throw DataError("not enough history before the start date for the window");
    }

    int offset(Date d) const { return d - data_first; }

    bool gold_tradable(Date d) const { return calendar.is_tradable(Asset::Gold, d); }

    std::vector<double> window_slice(const std::vector<double>& px, Date day, int len) const {
        const int end = offset(day) + 1;
        const int begin = std::max(0, end - len);
        return std::vector<double>(px.begin() + begin, px.begin() + end);
    }
};

struct DayForecast {
    bool ok = false;
    std::array<double, 3> gold_points{};
    std::array<double, 3> btc_points{};
    double gold_sigma = 0.0;
    double btc_sigma = 0.0;
    double gold_error_std = 0.0;
    double btc_error_std = 0.0;
    std::array<double, 3> gold_returns{};  // forecast-implied simple returns per planned day
    std::array<double, 3> btc_returns{};
};

DayForecast make_forecast(const Engine& eng, Date day, int gold_window, int btc_window) {
    DayForecast out;
    try {
        auto gw = eng.window_slice(eng.gold_px, day, gold_window);
        auto bw = eng.window_slice(eng.btc_px, day, btc_window);
        auto gf = forecaster::fit(gw, eng.cfg.arima);
        auto bf = forecaster::fit(bw, eng.cfg.arima);
        auto gfc = forecaster::forecast(gf, gw, kPlannedDays);
        auto bfc = forecaster::forecast(bf, bw, kPlannedDays);
        double prev_g = gw.back(), prev_b = bw.back();
        for (int k = 0; k < kPlannedDays; ++k) {
            double pg = gfc.points[k], pb = bfc.points[k];
            if (!std::isfinite(pg) || !std::isfinite(pb) || pg <= 0.0 || pb <= 0.0) return out;
            out.gold_points[k] = pg;
            out.btc_points[k] = pb;
            out.gold_returns[k] = pg / prev_g - 1.0;
            out.btc_returns[k] = pb / prev_b - 1.0;
            prev_g = pg;
            prev_b = pb;
        }
        out.gold_sigma = gfc.sigma;
        out.btc_sigma = bfc.sigma;
        out.gold_error_std = gfc.error_std;
        out.btc_error_std = bfc.error_std;
        out.ok = true;
    } catch (const std::exception&) {
        out.ok = false;
    }
    return out;
}

// Pushes a planned six-vector through the forecast trajectory. With
// `repair` set every day's pair is projected onto the feasible set; without
// it an infeasible day aborts.
struct Propagation {
    bool feasible = false;
    std::array<double, 6> plan{};
    std::array<double, 4> values{};  // V_i .. V_{i+3} under forecast prices
    double end_gold_value = 0.0;     // dollar exposures after the planned days
    double end_btc_value = 0.0;
};

Propagation propagate_plan(const portfolio::PortfolioState& state, const DayForecast& fc,
                           const std::array<bool, 3>& gold_ok, const BacktestConfig& cfg,
                           const std::array<double, 6>& plan, bool repair) {
    Propagation out;
    out.plan = plan;
    out.values[0] = state.value;
    portfolio::PortfolioState s = state;
    for (int k = 0; k < kPlannedDays; ++k) {
        TradeDecision d{out.plan[2 * k], out.plan[2 * k + 1]};
        if (repair) {
            d = portfolio::clamp_to_feasible(s, d, cfg.rates, gold_ok[k], cfg.risk.delta);
            out.plan[2 * k] = d.x;
            out.plan[2 * k + 1] = d.y;
        } else if (!portfolio::feasible(s, d, cfg.rates, gold_ok[k], cfg.risk.delta)) {
            return out;
        }
        portfolio::DayReturns r{fc.gold_returns[k], fc.btc_returns[k]};
        s = portfolio::state_step(s, d, r, cfg.rates);
        out.values[k + 1] = s.value;
    }
    out.end_gold_value = s.g * s.value;
    out.end_btc_value = s.b * s.value;
    out.feasible = true;
    return out;
}

std::map<std::string, std::string> echo_config(const BacktestConfig& cfg,
                                               const std::string& mode) {
    std::map<std::string, std::string> m;
    m["start_date"] = dates::to_string(cfg.start);
    m["end_date"] = dates::to_string(cfg.end);
    m["initial_cash"] = util::format_double(cfg.initial_cash);
    m["alpha"] = util::format_double(cfg.rates.alpha);
    m["beta"] = util::format_double(cfg.rates.beta);
    m["symmetric_commissions"] = cfg.rates.symmetric ? "true" : "false";
    m["delta"] = util::format_double(cfg.risk.delta);
    m["risk_free"] = util::format_double(cfg.risk.risk_free);
    m["golden"] = util::format_double(cfg.risk.golden);
    m["personality"] = risk::personality_name(cfg.risk.personality);
    m["window_policy"] = cfg.window.adaptive ? "adaptive" : "fixed";
    m["window_length"] = std::to_string(cfg.window.length);
    m["arima_p"] = std::to_string(cfg.arima.p);
    m["arima_d"] = std::to_string(cfg.arima.d);
    m["arima_q"] = std::to_string(cfg.arima.q);
    m["pso_particles"] = std::to_string(cfg.pso.n_particles);
    m["pso_iters"] = std::to_string(cfg.pso.max_iters);
    m["pso_omega_start"] = util::format_double(cfg.pso.omega_start);
    m["pso_omega_end"] = util::format_double(cfg.pso.omega_end);
    m["pso_c1"] = util::format_double(cfg.pso.c1);
    m["pso_c2"] = util::format_double(cfg.pso.c2);
    m["markowitz_lambda"] = util::format_double(cfg.markowitz_lambda);
    m["markowitz_grid"] = util::format_double(cfg.markowitz_grid);
    m["seed"] = std::to_string(cfg.seed);
    m["mode"] = mode;
    return m;
}

// Shared daily loop; `decide` fills the plan for one day from the state
// and forecast, or leaves it at zeros.
template <typename Decide>
BacktestReport run_loop(const PriceSeries& gold, const PriceSeries& btc,
                        const TradingCalendar& calendar, const BacktestConfig& cfg,
                        const std::string& mode, const AuditHook& audit, Decide decide) {
    Engine eng(gold, btc, calendar, cfg);

    BacktestReport report;
    report.personality = cfg.risk.personality;
    report.seed = cfg.seed;
    report.mode = mode;
    report.config_echo = echo_config(cfg, mode);

    portfolio::PortfolioState state;
    state.c = 1.0;
    state.g = 0.0;
    state.b = 0.0;
    state.value = cfg.initial_cash;

    int gold_window = cfg.window.length;
    int btc_window = cfg.window.length;
    std::optional<std::array<double, 6>> prev_plan;

    for (Date day = cfg.start; day < cfg.end; ++day) {
        const int i = eng.offset(day);

        if (cfg.window.adaptive) {
            std::vector<double> gh(eng.gold_px.begin(), eng.gold_px.begin() + i + 1);
            std::vector<double> bh(eng.btc_px.begin(), eng.btc_px.begin() + i + 1);
            gold_window = forecaster::adaptive_window(gh, cfg.arima, gold_window).length;
            btc_window = forecaster::adaptive_window(bh, cfg.arima, btc_window).length;
        }

        if (audit) audit(day, day);  // optimizer inputs end at the decision day

        DailyRecord rec;
        rec.date = day;
        rec.state_before = state;

        DayForecast fc = make_forecast(eng, day, gold_window, btc_window);
        std::array<bool, 3> gold_ok{};
        for (int k = 0; k < kPlannedDays; ++k) gold_ok[k] = eng.gold_tradable(day + k);

        if (!fc.ok) {
            rec.fallback = true;
            ++report.fallback_days;
            rec.gold_forecast.fill(std::numeric_limits<double>::quiet_NaN());
            rec.btc_forecast.fill(std::numeric_limits<double>::quiet_NaN());
            rec.gold_sigma = rec.btc_sigma = std::numeric_limits<double>::quiet_NaN();
            rec.planned.fill(0.0);
        } else {
            rec.gold_forecast = fc.gold_points;
            rec.btc_forecast = fc.btc_points;
            rec.gold_sigma = fc.gold_sigma;
            rec.btc_sigma = fc.btc_sigma;
            const std::array<double, 6>* warm = prev_plan ? &*prev_plan : nullptr;
            rec.planned = decide(state, fc, gold_ok, day, warm);
        }

        rec.decision = TradeDecision{rec.planned[0], rec.planned[1]};
        if (!portfolio::feasible(state, rec.decision, cfg.rates, gold_ok[0], cfg.risk.delta))
            throw NumericError("optimizer committed an infeasible decision on " +
                               dates::to_string(day));

        portfolio::DayReturns realized{eng.gold_px[i + 1] / eng.gold_px[i] - 1.0,
                                       eng.btc_px[i + 1] / eng.btc_px[i] - 1.0};
        state = portfolio::state_step(state, rec.decision, realized, cfg.rates);
        rec.value_after = state.value;

        if (!rec.fallback) {
            prev_plan = std::array<double, 6>{rec.planned[2], rec.planned[3], rec.planned[4],
                                              rec.planned[5], 0.0, 0.0};
        } else {
            prev_plan.reset();
        }
        report.records.push_back(rec);
    }

    report.final_value = state.value;
    return report;
}

}  // namespace

BacktestReport run(const PriceSeries& gold, const PriceSeries& btc,
                   const TradingCalendar& calendar, const BacktestConfig& config,
                   const AuditHook& audit) {
    auto decide = [&config](const portfolio::PortfolioState& state, const DayForecast& fc,
                            const std::array<bool, 3>& gold_ok, Date day,
                            const std::array<double, 6>* warm) {
        pso::Bounds bounds;
        bounds.lo.assign(6, -1.0);
        bounds.hi.assign(6, 1.0);

        auto repair_fn = [&](const std::vector<double>& v) {
            std::array<double, 6> plan;
            std::copy_n(v.begin(), 6, plan.begin());
            auto prop = propagate_plan(state, fc, gold_ok, config, plan, true);
            return std::vector<double>(prop.plan.begin(), prop.plan.end());
        };
        auto feasible_fn = [&](const std::vector<double>& v) {
            std::array<double, 6> plan;
            std::copy_n(v.begin(), 6, plan.begin());
            return propagate_plan(state, fc, gold_ok, config, plan, false).feasible;
        };
        auto objective_fn = [&](const std::vector<double>& v) {
            std::array<double, 6> plan;
            std::copy_n(v.begin(), 6, plan.begin());
            auto prop = propagate_plan(state, fc, gold_ok, config, plan, false);
            if (!prop.feasible) return -std::numeric_limits<double>::infinity();
            // Risk assessment of the plan: dollar exposure held at the end
            // of the horizon, weighted by each asset's forecast uncertainty.
            const double sigma =
                prop.end_gold_value / fc.gold_points[2] * fc.gold_error_std +
                prop.end_btc_value / fc.btc_points[2] * fc.btc_error_std;
            return risk::objective(config.risk, prop.values, sigma);
        };

        pso::PsoConfig day_pso = config.pso;
        day_pso.seed = util::substream(config.seed,
                                       static_cast<std::uint64_t>(day - config.start));
        std::vector<double> warm_vec;
        const std::vector<double>* warm_ptr = nullptr;
        if (warm) {
            warm_vec.assign(warm->begin(), warm->end());
            warm_ptr = &warm_vec;
        }
        auto result =
            pso::optimize(objective_fn, feasible_fn, repair_fn, bounds, day_pso, warm_ptr);

        std::array<double, 6> plan{};
        std::copy_n(result.best_position.begin(), 6, plan.begin());
        return plan;
    };
    return run_loop(gold, btc, calendar, config, "pso", audit, decide);
}

BacktestReport run_markowitz(const PriceSeries& gold, const PriceSeries& btc,
                             const TradingCalendar& calendar, const BacktestConfig& config,
                             const AuditHook& audit) {
    auto decide = [&config](const portfolio::PortfolioState& state, const DayForecast& fc,
                            const std::array<bool, 3>& gold_ok, Date /*day*/,
                            const std::array<double, 6>* /*warm*/) {
        const double grid = config.markowitz_grid;
        if (!(grid > 0.0 && grid <= 1.0)) throw std::invalid_argument("bad markowitz grid");
        const int steps = static_cast<int>(std::lround(2.0 / grid));

        std::array<double, 6> best{};
        double best_score = -std::numeric_limits<double>::infinity();
        for (int jy = 0; jy <= steps; ++jy) {
            const double y = 1.0 - jy * grid;  // top down
            for (int jx = 0; jx <= steps; ++jx) {
                const double x = -1.0 + jx * grid;  // bottom up
                if (!portfolio::feasible(state, {x, y}, config.rates, gold_ok[0],
                                         config.risk.delta))
                    continue;
                std::array<double, 6> plan{x, y, 0, 0, 0, 0};
                auto prop = propagate_plan(state, fc, gold_ok, config, plan, false);
                if (!prop.feasible) continue;
                std::vector<double> r(kPlannedDays);
                for (int k = 0; k < kPlannedDays; ++k)
                    r[k] = prop.values[k + 1] / prop.values[k] - 1.0;
                const double score =
                    numeric::mean(r) - config.markowitz_lambda * numeric::variance(r);
                if (score > best_score) {
                    best_score = score;
                    best = plan;
                }
            }
        }
        if (!std::isfinite(best_score))
            throw NumericError("markowitz sweep found no feasible decision");
        return best;
    };
    return run_loop(gold, btc, calendar, config, "markowitz", audit, decide);
}

ReplayResult replay_schedule(const PriceSeries& gold, const PriceSeries& btc,
                             const TradingCalendar& calendar,
                             const portfolio::CommissionRates& rates, double delta,
                             double initial_cash, Date start,
                             const std::vector<TradeDecision>& decisions, bool repair) {
    if (gold.empty() || !gold.contiguous() || !btc.contiguous())
        throw DataError("replay expects gap-filled series");
    if (start < gold.first_date() ||
        start + static_cast<int>(decisions.size()) > gold.last_date())
        throw DataError("schedule extends beyond the available prices");

    ReplayResult out;
    portfolio::PortfolioState state{1.0, 0.0, 0.0, initial_cash};
    for (std::size_t k = 0; k < decisions.size(); ++k) {
        const Date day = start + static_cast<int>(k);
        const bool gold_ok = calendar.is_tradable(Asset::Gold, day);
        TradeDecision d = decisions[k];
        if (repair) {
            TradeDecision fixed = portfolio::clamp_to_feasible(state, d, rates, gold_ok, delta);
            if (std::abs(fixed.x - d.x) > 1e-12 || std::abs(fixed.y - d.y) > 1e-12)
                ++out.repaired_days;
            d = fixed;
        } else if (!portfolio::feasible(state, d, rates, gold_ok, delta)) {
            throw NumericError("infeasible decision in replay on " + dates::to_string(day));
        }
        const double pg0 = gold.at(day).price, pg1 = gold.at(day + 1).price;
        const double pb0 = btc.at(day).price, pb1 = btc.at(day + 1).price;
        portfolio::DayReturns r{pg1 / pg0 - 1.0, pb1 / pb0 - 1.0};
        state = portfolio::state_step(state, d, r, rates);
        out.values.push_back(state.value);
    }
    out.final_value = state.value;
    return out;
}

void export_report_csv(const BacktestReport& report, const std::string& path) {
    std::ostringstream body;
    body << "date,c,g,b,V,x,y,gold_forecast_1,gold_forecast_2,gold_forecast_3,"
            "btc_forecast_1,btc_forecast_2,btc_forecast_3,fallback\n";
    for (const auto& r : report.records) {
        body << dates::to_string(r.date) << ',' << util::format_double(r.state_before.c) << ','
             << util::format_double(r.state_before.g) << ','
             << util::format_double(r.state_before.b) << ','
             << util::format_double(r.value_after) << ','
             << util::format_double(r.decision.x) << ',' << util::format_double(r.decision.y);
        for (double v : r.gold_forecast) body << ',' << util::format_double(v);
        for (double v : r.btc_forecast) body << ',' << util::format_double(v);
        body << ',' << (r.fallback ? 1 : 0) << '\n';
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << body.str();
}

void export_report_json(const BacktestReport& report, const std::string& path) {
    nlohmann::ordered_json j;
    j["final_value"] = report.final_value;
    j["personality"] = risk::personality_name(report.personality);
    j["mode"] = report.mode;
    j["seed"] = report.seed;
    j["days"] = report.records.size();
    j["fallback_days"] = report.fallback_days;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : report.config_echo) cfg[k] = v;
    j["config"] = cfg;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

BacktestReport load_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty report");

    BacktestReport report;
    while (std::getline(in, line)) {
        if (util::trim(line).empty()) continue;
        auto f = util::split(line, ',');
        if (f.size() != 14) throw DataError(path + ": malformed report row");
        DailyRecord r;
        r.date = dates::parse_date(f[0]);
        r.state_before.c = util::parse_double(f[1]);
        r.state_before.g = util::parse_double(f[2]);
        r.state_before.b = util::parse_double(f[3]);
        r.state_before.value = std::numeric_limits<double>::quiet_NaN();
        r.value_after = util::parse_double(f[4]);
        r.decision.x = util::parse_double(f[5]);
        r.decision.y = util::parse_double(f[6]);
        for (int k = 0; k < 3; ++k) r.gold_forecast[k] = util::parse_double(f[7 + k]);
        for (int k = 0; k < 3; ++k) r.btc_forecast[k] = util::parse_double(f[10 + k]);
        r.fallback = f[13] == "1";
        r.planned = {r.decision.x, r.decision.y, 0, 0, 0, 0};
        report.records.push_back(r);
    }
    if (report.records.empty()) throw DataError(path + ": no report rows");
    report.final_value = report.records.back().value_after;
    return report;
}

}  // namespace ctp::backtest
