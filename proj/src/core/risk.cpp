#include "risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "numeric.hpp"
#include "util.hpp"

namespace ctp::risk {

const char* personality_name(Personality p) {
    switch (p) {
        case Personality::Crazy: return "crazy";
        case Personality::Stable: return "stable";
        case Personality::Middle: return "middle";
    }
    return "?";
}

Personality personality_from_name(const std::string& name) {
    if (name == "crazy") return Personality::Crazy;
    if (name == "stable") return Personality::Stable;
    if (name == "middle") return Personality::Middle;
    throw std::invalid_argument("unknown personality '" + name + "'");
}

Moments portfolio_moments(const std::vector<std::vector<double>>& returns,
                          const AllocationWeights& weights) {
    if (returns.size() != 3) throw std::invalid_argument("expected 3 return rows");
    const std::size_t n = returns[0].size();
    if (n < 2) throw std::invalid_argument("need at least 2 samples per asset");
    for (const auto& row : returns)
        if (row.size() != n) throw std::invalid_argument("mismatched sample lengths");

    const double w[3] = {weights.cash, weights.gold, weights.bitcoin};
    double mu[3];
    for (int i = 0; i < 3; ++i) mu[i] = numeric::mean(returns[i]);

    Moments out;
    for (int i = 0; i < 3; ++i) out.mean += w[i] * mu[i];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double cov = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                cov += (returns[i][t] - mu[i]) * (returns[j][t] - mu[j]);
            cov /= static_cast<double>(n);
            out.variance += w[i] * w[j] * cov;
        }
    }
    return out;
}

std::vector<FrontierPoint> markowitz_sweep(const std::vector<std::vector<double>>& returns,
                                           double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.5))
        throw std::invalid_argument("grid_step must be in (0, 0.5]");
    const int steps = static_cast<int>(std::lround(1.0 / grid_step));

    std::vector<FrontierPoint> candidates;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j + i <= steps; ++j) {
            AllocationWeights w;
            w.cash = i * grid_step;
            w.gold = j * grid_step;
            w.bitcoin = 1.0 - w.cash - w.gold;
            if (w.bitcoin < -1e-12) continue;
            w.bitcoin = std::max(w.bitcoin, 0.0);
            Moments m = portfolio_moments(returns, w);
            candidates.push_back({w, m.mean, m.variance});
        }
    }

    std::vector<FrontierPoint> frontier;
    for (const auto& c : candidates) {
        bool dominated = false;
        for (const auto& other : candidates) {
            bool at_least_as_good =
                other.mean >= c.mean && other.variance <= c.variance;
            bool strictly_better = other.mean > c.mean || other.variance < c.variance;
            if (at_least_as_good && strictly_better) {
                dominated = true;
                break;
            }
        }
        if (!dominated) frontier.push_back(c);
    }
    std::sort(frontier.begin(), frontier.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
        if (a.variance != b.variance) return a.variance < b.variance;
        return a.mean < b.mean;
    });
    // Duplicate (mean, variance) points add nothing to the frontier.
    frontier.erase(std::unique(frontier.begin(), frontier.end(),
                               [](const FrontierPoint& a, const FrontierPoint& b) {
                                   return a.mean == b.mean && a.variance == b.variance;
                               }),
                   frontier.end());
    return frontier;
}

double sharpe_ratio(std::span<const double> returns, double risk_free) {
    if (returns.size() < 2) throw std::invalid_argument("sharpe_ratio needs >= 2 samples");
    double m = 0.0;
    for (double r : returns) m += r;
    m /= static_cast<double>(returns.size());
    double var = 0.0;
    for (double r : returns) var += (r - m) * (r - m);
    const double sd = std::sqrt(var / static_cast<double>(returns.size()));
    const double excess = m - risk_free;
    if (sd < 1e-12) {
        if (std::abs(excess) < 1e-12) return 0.0;
        return excess > 0.0 ? 1e12 : -1e12;
    }
    return excess / sd;
}

double objective(const RiskParams& params, std::span<const double> trajectory, double sigma) {
    if (trajectory.size() != 4) throw std::invalid_argument("trajectory must have 4 values");
    for (double v : trajectory)
        if (!(v > 0.0)) throw util::NumericError("non-positive value in trajectory");

    switch (params.personality) {
        case Personality::Crazy:
            return trajectory[3];
        case Personality::Stable: {
            double r[3];
            for (int k = 0; k < 3; ++k) r[k] = trajectory[k + 1] / trajectory[k] - 1.0;
            return sharpe_ratio(r, params.risk_free);
        }
        case Personality::Middle:
            return (trajectory[3] - trajectory[0]) - params.golden * sigma;
    }
    return 0.0;
}

void export_frontier_csv(const std::string& path, const std::vector<FrontierPoint>& frontier) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "w_cash,w_gold,w_btc,mean,variance\n";
    for (const auto& p : frontier)
        out << util::format_double(p.weights.cash) << ',' << util::format_double(p.weights.gold)
            << ',' << util::format_double(p.weights.bitcoin) << ','
            << util::format_double(p.mean) << ',' << util::format_double(p.variance) << '\n';
}

}  // namespace ctp::risk
