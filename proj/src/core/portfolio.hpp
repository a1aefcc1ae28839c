#pragma once

namespace ctp::portfolio {

/// Proportional transaction costs. alpha applies to gold trades, beta to
/// bitcoin trades.
struct CommissionRates {
    double alpha = 0.01;
    double beta = 0.02;
    /// Literal cost model credits (1+rate) on sales the same way it
    /// charges it on buys, so a sale nets more cash per unit than a buy
    /// spends. Setting symmetric charges |trade| * rate on either side.
    bool symmetric = false;
};

/// Raw positions: cash in USD, gold in troy ounces, bitcoin in coins.
struct Holdings {
    double cash = 0.0;
    double gold = 0.0;
    double bitcoin = 0.0;
};

/// Scale-free portfolio state: fractions of total value held in cash,
/// gold and bitcoin (c + g + b == 1), plus the total value itself.
struct PortfolioState {
    double c = 1.0;
    double g = 0.0;
    double b = 0.0;
    double value = 0.0;
};

/// Fractions of current total value moved into gold (x) and bitcoin (y)
/// on one day; negative means sell.
struct TradeDecision {
    double x = 0.0;
    double y = 0.0;
};

/// One-day simple returns r = P_next / P - 1 for both assets.
struct DayReturns {
    double gold = 0.0;
    double bitcoin = 0.0;
};

/// Builds a normalized state from raw holdings and prices.
/// Throws util::NumericError when the total value is zero.
PortfolioState normalize(const Holdings& holdings, double gold_price, double btc_price);

/// Next-day total value for a feasible decision:
///   V' = V * [1 + (r_g - alpha)x + (r_b - beta)y + r_g*g + r_b*b]
/// (symmetric commissions replace the x, y cost terms by |x|, |y|).
double value_step(const PortfolioState& state, const TradeDecision& decision,
                  const DayReturns& returns, const CommissionRates& rates);

/// Next-day normalized state; fractions re-weight by the realized price
/// moves and the traded amounts. Throws util::NumericError if an output
/// fraction dips below -1e-12 (an infeasible decision slipped through).
PortfolioState state_step(const PortfolioState& state, const TradeDecision& decision,
                          const DayReturns& returns, const CommissionRates& rates);

/// True iff the decision satisfies the cash floor, the no-negative-holdings
/// constraints and the gold trading halt, with 1e-12 absolute slack:
///   c - x(1+alpha) - y(1+beta) >= delta,  x + g >= 0,  y + b >= 0,
///   and x == 0 when gold is not tradable.
bool feasible(const PortfolioState& state, const TradeDecision& decision,
              const CommissionRates& rates, bool gold_tradable, double delta);

/// Deterministic projection of an arbitrary decision onto the feasible
/// set: sells are clamped to the held amounts, gold trades are zeroed on
/// halted days, then buys are scaled down uniformly until the cash floor
/// holds.
TradeDecision clamp_to_feasible(const PortfolioState& state, const TradeDecision& decision,
                                const CommissionRates& rates, bool gold_tradable, double delta);

}  // namespace ctp::portfolio
