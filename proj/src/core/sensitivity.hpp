#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "backtest.hpp"

namespace ctp::sensitivity {

/// Multiplicative perturbation of a committed trading schedule: every
/// (x, y) component is scaled by (1 +/- u) with u uniform in [lo, hi] and
/// a random sign, then the schedule is replayed with repair.
struct PerturbationSpec {
    double lo = 0.01;
    double hi = 0.03;
    int trials = 5;
    std::uint64_t seed = 0;
};

struct PerturbResult {
    double baseline = 0.0;               // unperturbed replayed final value
    std::vector<double> trial_values;    // one final value per trial
    std::vector<int> repaired_days;      // repair interventions per trial
};

PerturbResult perturb_schedule(const backtest::BacktestReport& report,
                               const market_data::PriceSeries& gold,
                               const market_data::PriceSeries& btc,
                               const market_data::TradingCalendar& calendar,
                               const backtest::BacktestConfig& config,
                               const PerturbationSpec& spec);

/// One labeled single-parameter change for a sensitivity rerun.
struct ParamDelta {
    std::string label;
    enum class Target { None, InitialCash, Alpha, Beta } target = Target::None;
    double factor = 1.0;  // multiplicative scale
    double shift = 0.0;   // additive change, applied after the scale
};

/// The +0%, +0.1%V0, +/-0.1% alpha, +/-0.1% beta set. Relative deltas
/// scale the parameter by 1 +/- 0.001; the absolute reading adds/removes
/// 0.001 instead.
std::vector<ParamDelta> default_deltas(bool absolute);

struct SensitivityRow {
    std::string label;
    double final_value = 0.0;
};

/// Reruns the full backtest once per delta (fresh optimization each time)
/// and reports final values next to the "+0%" baseline.
std::vector<SensitivityRow> parameter_sensitivity(const market_data::PriceSeries& gold,
                                                  const market_data::PriceSeries& btc,
                                                  const market_data::TradingCalendar& calendar,
                                                  const backtest::BacktestConfig& base,
                                                  const std::vector<ParamDelta>& deltas,
                                                  bool markowitz = false);

void export_trials_csv(const std::string& path, const PerturbResult& result);
void export_rows_csv(const std::string& path, const std::vector<SensitivityRow>& rows);

}  // namespace ctp::sensitivity
