#pragma once

// Shared test fixtures and independent oracles. Everything here is
// deliberately written from the raw definitions (holdings arithmetic,
// direct ARMA simulation) rather than through the engine's own formulas.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "backtest.hpp"
#include "market_data.hpp"
#include "portfolio.hpp"

namespace ctp::testsupport {

// Transition oracle in raw holdings space: build holdings at explicit
// prices, apply the traded amounts and the commission cash flow, then
// revalue at next-day prices.
struct OracleState {
    double value;
    double c, g, b;
};

inline OracleState holdings_oracle(const portfolio::PortfolioState& s,
                                   const portfolio::TradeDecision& d,
                                   const portfolio::DayReturns& r,
                                   const portfolio::CommissionRates& rates,
                                   double gold_price = 1234.5, double btc_price = 678.25) {
    const double V = s.value;
    const double C = s.c * V;
    const double G = s.g * V / gold_price;
    const double B = s.b * V / btc_price;

    const double dG = d.x * V / gold_price;
    const double dB = d.y * V / btc_price;
    double dC;
    if (rates.symmetric) {
        dC = -(gold_price * dG + std::abs(gold_price * dG) * rates.alpha) -
             (btc_price * dB + std::abs(btc_price * dB) * rates.beta);
    } else {
        dC = -gold_price * dG * (1.0 + rates.alpha) - btc_price * dB * (1.0 + rates.beta);
    }

    const double C2 = C + dC;
    const double G2 = G + dG;
    const double B2 = B + dB;
    const double gold_next = gold_price * (1.0 + r.gold);
    const double btc_next = btc_price * (1.0 + r.bitcoin);
    const double V2 = C2 + G2 * gold_next + B2 * btc_next;
    return {V2, C2 / V2, G2 * gold_next / V2, B2 * btc_next / V2};
}

// Draws a random normalized state (fractions on the simplex, value in
// [100, 10000]).
inline portfolio::PortfolioState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double a, b, c, sum;
    do {
        a = unit(rng);
        b = unit(rng);
        c = unit(rng);
        sum = a + b + c;
    } while (sum < 1e-3);
    portfolio::PortfolioState s;
    s.c = a / sum;
    s.g = b / sum;
    s.b = c / sum;
    s.value = 100.0 + 9900.0 * unit(rng);
    return s;
}

// Draws a decision feasible for `s` by construction: sells bounded by the
// held fractions, buys scaled into the remaining cash.
inline portfolio::TradeDecision random_feasible_decision(const portfolio::PortfolioState& s,
                                                         const portfolio::CommissionRates& rates,
                                                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    portfolio::TradeDecision d;
    d.x = -s.g + unit(rng) * (s.g + 1.0);
    d.y = -s.b + unit(rng) * (s.b + 1.0);
    return portfolio::clamp_to_feasible(s, d, rates, true, 0.0);
}

// Direct ARIMA(1,1,1) sample path: z_t = phi z_{t-1} + e_t + theta e_{t-1},
// prices integrate z from y0. Innovations are standard normal.
inline std::vector<double> simulate_arima111(double phi, double theta, int n,
                                             std::uint64_t seed, double y0 = 500.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    double z = 0.0, e_prev = 0.0;
    for (int t = 0; t < 100; ++t) {  // burn-in
        double e = noise(rng);
        z = phi * z + e + theta * e_prev;
        e_prev = e;
    }
    std::vector<double> y{y0};
    for (int t = 1; t < n; ++t) {
        double e = noise(rng);
        z = phi * z + e + theta * e_prev;
        e_prev = e;
        y.push_back(y.back() + z);
    }
    return y;
}

struct Dataset {
    market_data::PriceSeries gold;
    market_data::PriceSeries btc;
    market_data::TradingCalendar calendar;
};

// Gap-filled, aligned synthetic pair over [start, end]. Gold quotes skip
// weekends before filling, as in the real input files.
inline Dataset make_dataset(dates::Date start, dates::Date end, std::uint64_t seed,
                            double gold_drift = 0.00017, double gold_vol = 0.009,
                            double btc_drift = 0.0024, double btc_vol = 0.04) {
    using namespace market_data;
    auto gold_raw = synthetic_gbm_series(Asset::Gold, start, end, 1324.6, gold_drift, gold_vol,
                                         seed, true);
    auto btc_raw = synthetic_gbm_series(Asset::Bitcoin, start, end, 609.67, btc_drift, btc_vol,
                                        seed + 1, false);
    auto aligned = align(hermite_fill(gold_raw), hermite_fill(btc_raw));
    return {std::move(aligned.gold), std::move(aligned.btc), std::move(aligned.calendar)};
}

// The bundled sample world: regime-cycled prices shaped like the real
// 2016-2021 markets (see market_data::sample_market_series).
inline Dataset make_sample_world(dates::Date start, dates::Date end, std::uint64_t seed) {
    using namespace market_data;
    auto gold_raw = sample_market_series(Asset::Gold, start, end, seed);
    auto btc_raw = sample_market_series(Asset::Bitcoin, start, end, seed);
    auto aligned = align(hermite_fill(gold_raw), hermite_fill(btc_raw));
    return {std::move(aligned.gold), std::move(aligned.btc), std::move(aligned.calendar)};
}

// Constant prices everywhere (gold weekday-observed, weekends filled).
inline Dataset make_flat_dataset(dates::Date start, dates::Date end, double gold_price = 1300.0,
                                 double btc_price = 600.0) {
    using namespace market_data;
    PriceSeries gold_raw, btc_raw;
    gold_raw.asset = Asset::Gold;
    btc_raw.asset = Asset::Bitcoin;
    for (dates::Date d = start; d <= end; ++d) {
        if (!dates::is_weekend(d))
            gold_raw.points.push_back({d, gold_price, PointSource::Observed});
        btc_raw.points.push_back({d, btc_price, PointSource::Observed});
    }
    auto aligned = align(hermite_fill(gold_raw), hermite_fill(btc_raw));
    return {std::move(aligned.gold), std::move(aligned.btc), std::move(aligned.calendar)};
}

// A fast-but-honest engine configuration for unit tests; acceptance runs
// use the real defaults.
inline backtest::BacktestConfig small_config(dates::Date start, dates::Date end,
                                             risk::Personality personality,
                                             std::uint64_t seed = 1) {
    backtest::BacktestConfig cfg;
    cfg.start = start;
    cfg.end = end;
    cfg.risk.personality = personality;
    cfg.window.length = 30;
    cfg.pso.n_particles = 24;
    cfg.pso.max_iters = 40;
    cfg.seed = seed;
    return cfg;
}

}  // namespace ctp::testsupport
