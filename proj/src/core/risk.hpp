#pragma once

#include <span>
#include <string>
#include <vector>

namespace ctp::risk {

enum class Personality { Crazy, Stable, Middle };

const char* personality_name(Personality p);
Personality personality_from_name(const std::string& name);

/// Daily objective parameters: cash floor delta, risk-free daily return,
/// and the Middle personality's risk weight.
struct RiskParams {
    double delta = 0.0;
    double risk_free = 0.0;
    double golden = 0.618;
    Personality personality = Personality::Middle;
};

/// Long-only allocation fractions over (cash, gold, bitcoin).
struct AllocationWeights {
    double cash = 1.0;
    double gold = 0.0;
    double bitcoin = 0.0;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

struct FrontierPoint {
    AllocationWeights weights;
    double mean = 0.0;
    double variance = 0.0;
};

/// Portfolio mean and variance, w' mu and w' Sigma w with the full
/// covariance (population moments). Rows of `returns` are per-asset
/// samples in (cash, gold, bitcoin) order.
Moments portfolio_moments(const std::vector<std::vector<double>>& returns,
                          const AllocationWeights& weights);

/// Enumerates long-only weight compositions at the given grid step and
/// keeps the Pareto-nondominated set under (max mean, min variance),
/// sorted by variance.
std::vector<FrontierPoint> markowitz_sweep(const std::vector<std::vector<double>>& returns,
                                           double grid_step);

/// (mean - risk_free) / population std. A zero-variance sample maps to 0
/// when the excess mean is zero and to +-1e12 otherwise.
double sharpe_ratio(std::span<const double> returns, double risk_free);

/// The per-day objective over a planned 4-point value path V_i..V_{i+3}:
///   Crazy  -> V_{i+3}
///   Stable -> Sharpe ratio of the three daily returns
///   Middle -> (V_{i+3} - V_i) - golden * sigma
double objective(const RiskParams& params, std::span<const double> trajectory, double sigma);

inline double sharpe_ratio(std::initializer_list<double> returns, double risk_free) {
    return sharpe_ratio(std::span<const double>(returns.begin(), returns.size()), risk_free);
}

inline double objective(const RiskParams& params, std::initializer_list<double> trajectory,
                        double sigma) {
    return objective(params, std::span<const double>(trajectory.begin(), trajectory.size()),
                     sigma);
}

void export_frontier_csv(const std::string& path, const std::vector<FrontierPoint>& frontier);

}  // namespace ctp::risk
