#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "forecaster.hpp"
#include "market_data.hpp"
#include "portfolio.hpp"
#include "pso.hpp"
#include "risk.hpp"

namespace ctp::backtest {

using dates::Date;
using market_data::PriceSeries;
using market_data::TradingCalendar;

/// Forecaster window policy: a fixed trailing length, or a per-day
/// adaptive hill-climb seeded from the previous day's choice.
struct WindowPolicy {
    bool adaptive = false;
    int length = 60;
};

struct BacktestConfig {
    Date start{};
    Date end{};  // decision days run over [start, end); the end price settles the last trade
    double initial_cash = 1000.0;
    portfolio::CommissionRates rates;
    risk::RiskParams risk;
    WindowPolicy window;
    pso::PsoConfig pso;
    forecaster::ArimaSpec arima;
    double markowitz_lambda = 1.0;
    double markowitz_grid = 0.05;
    std::uint64_t seed = 0;
};

struct DailyRecord {
    Date date{};
    portfolio::PortfolioState state_before;  // normalized state at the day's open
    portfolio::TradeDecision decision;       // the committed first planned day
    std::array<double, 3> gold_forecast{};
    std::array<double, 3> btc_forecast{};
    double gold_sigma = 0.0;
    double btc_sigma = 0.0;
    std::array<double, 6> planned{};  // [x_i, y_i, x_i+1, y_i+1, x_i+2, y_i+2]
    double value_after = 0.0;         // V_{i+1}, settled at realized next-day prices
    bool fallback = false;            // forecaster failed; day held at (0, 0)
};

struct BacktestReport {
    std::vector<DailyRecord> records;
    double final_value = 0.0;
    risk::Personality personality = risk::Personality::Middle;
    std::uint64_t seed = 0;
    std::string mode;  // "pso" or "markowitz"
    int fallback_days = 0;
    std::map<std::string, std::string> config_echo;
};

/// Called once per decision day with the latest price date the optimizer
/// was allowed to see; lets callers audit the no-lookahead contract.
using AuditHook = std::function<void(Date decision_day, Date latest_visible)>;

/// The daily loop: fit ARIMA per asset on the trailing window, forecast
/// three days, maximize the personality objective over the planned
/// six-vector with PSO (feasibility propagated through the forecast
/// trajectory, gold frozen on halted days), then settle the committed
/// (x, y) against realized next-day prices.
BacktestReport run(const PriceSeries& gold, const PriceSeries& btc,
                   const TradingCalendar& calendar, const BacktestConfig& config,
                   const AuditHook& audit = {});

/// Mean-variance baseline: per day, sweep y from its top down and x
/// upward over a grid, score each feasible pair by mean minus
/// lambda * variance of the forecast trajectory's daily returns, commit
/// the best.
BacktestReport run_markowitz(const PriceSeries& gold, const PriceSeries& btc,
                             const TradingCalendar& calendar, const BacktestConfig& config,
                             const AuditHook& audit = {});

struct ReplayResult {
    std::vector<double> values;  // V after each day's settlement
    double final_value = 0.0;
    int repaired_days = 0;  // days whose decision needed projection back to feasibility
};

/// Applies a fixed (x, y) schedule against realized prices, starting from
/// all-cash `initial_cash` on `start`. With `repair` set, infeasible
/// decisions are projected onto the feasible set first; otherwise they
/// raise util::NumericError.
ReplayResult replay_schedule(const PriceSeries& gold, const PriceSeries& btc,
                             const TradingCalendar& calendar,
                             const portfolio::CommissionRates& rates, double delta,
                             double initial_cash, Date start,
                             const std::vector<portfolio::TradeDecision>& decisions,
                             bool repair);

void export_report_csv(const BacktestReport& report, const std::string& path);
void export_report_json(const BacktestReport& report, const std::string& path);

/// Re-reads an exported report CSV (dates, states, decisions, values).
BacktestReport load_report_csv(const std::string& path);

}  // namespace ctp::backtest
