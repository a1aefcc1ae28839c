#include "portfolio.hpp"

#include <algorithm>
#include <cmath>

#include "util.hpp"

namespace ctp::portfolio {

using util::NumericError;

namespace {

constexpr double kSlack = 1e-12;

// Cash spent by moving fraction `x` at the given rate; negative x is a
// sale and returns cash.
double cash_charge(double x, double rate, bool symmetric) {
    if (x >= 0.0 || !symmetric) return x * (1.0 + rate);
    return x * (1.0 - rate);
}

}  // namespace

PortfolioState normalize(const Holdings& holdings, double gold_price, double btc_price) {
    if (!(gold_price > 0.0) || !(btc_price > 0.0))
        throw NumericError("prices must be positive");
    if (holdings.cash < 0.0 || holdings.gold < 0.0 || holdings.bitcoin < 0.0)
        throw NumericError("holdings must be non-negative");
    const double value = holdings.cash + holdings.gold * gold_price + holdings.bitcoin * btc_price;
    if (!(value > 0.0)) throw NumericError("zero total portfolio value");
    PortfolioState s;
    s.value = value;
    s.c = holdings.cash / value;
    s.g = holdings.gold * gold_price / value;
    s.b = holdings.bitcoin * btc_price / value;
    return s;
}

double value_step(const PortfolioState& state, const TradeDecision& decision,
                  const DayReturns& returns, const CommissionRates& rates) {
    double growth;
    if (rates.symmetric) {
        growth = 1.0 + returns.gold * decision.x - rates.alpha * std::abs(decision.x) +
                 returns.bitcoin * decision.y - rates.beta * std::abs(decision.y) +
                 returns.gold * state.g + returns.bitcoin * state.b;
    } else {
        growth = 1.0 + (returns.gold - rates.alpha) * decision.x +
                 (returns.bitcoin - rates.beta) * decision.y + returns.gold * state.g +
                 returns.bitcoin * state.b;
    }
    const double next = state.value * growth;
    if (!std::isfinite(next) || !(next > 0.0))
        throw NumericError("value step produced a non-positive or non-finite value");
    return next;
}

PortfolioState state_step(const PortfolioState& state, const TradeDecision& decision,
                          const DayReturns& returns, const CommissionRates& rates) {
    const double next_value = value_step(state, decision, returns, rates);
    const double ratio = state.value / next_value;

    const double cash_after = state.c - cash_charge(decision.x, rates.alpha, rates.symmetric) -
                              cash_charge(decision.y, rates.beta, rates.symmetric);
    PortfolioState out;
    out.value = next_value;
    out.c = ratio * cash_after;
    out.g = ratio * (1.0 + returns.gold) * (decision.x + state.g);
    out.b = ratio * (1.0 + returns.bitcoin) * (decision.y + state.b);

    if (out.c < -kSlack || out.g < -kSlack || out.b < -kSlack)
        throw NumericError("state step produced a negative fraction (infeasible decision)");
    out.c = std::max(out.c, 0.0);
    out.g = std::max(out.g, 0.0);
    out.b = std::max(out.b, 0.0);
    return out;
}

bool feasible(const PortfolioState& state, const TradeDecision& decision,
              const CommissionRates& rates, bool gold_tradable, double delta) {
    if (!std::isfinite(decision.x) || !std::isfinite(decision.y)) return false;
    if (!gold_tradable && std::abs(decision.x) > kSlack) return false;
    if (decision.x + state.g < -kSlack) return false;
    if (decision.y + state.b < -kSlack) return false;
    const double cash_after = state.c - cash_charge(decision.x, rates.alpha, rates.symmetric) -
                              cash_charge(decision.y, rates.beta, rates.symmetric);
    return cash_after >= delta - kSlack;
}

TradeDecision clamp_to_feasible(const PortfolioState& state, const TradeDecision& decision,
                                const CommissionRates& rates, bool gold_tradable, double delta) {
    TradeDecision d = decision;
    if (!std::isfinite(d.x)) d.x = 0.0;
    if (!std::isfinite(d.y)) d.y = 0.0;
    if (!gold_tradable) d.x = 0.0;
    d.x = std::max(d.x, -state.g);
    d.y = std::max(d.y, -state.b);

    const double charge_g = cash_charge(d.x, rates.alpha, rates.symmetric);
    const double charge_b = cash_charge(d.y, rates.beta, rates.symmetric);
    const double total = charge_g + charge_b;
    if (total > state.c - delta) {
        const double pos = std::max(charge_g, 0.0) + std::max(charge_b, 0.0);
        const double neg = std::min(charge_g, 0.0) + std::min(charge_b, 0.0);
        double f = 0.0;
        if (pos > 0.0) f = std::clamp((state.c - delta - neg) / pos, 0.0, 1.0);
        if (d.x > 0.0) d.x *= f;
        if (d.y > 0.0) d.y *= f;
    }
    return d;
}

}  // namespace ctp::portfolio
