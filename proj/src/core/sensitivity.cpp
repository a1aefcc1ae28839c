#include "sensitivity.hpp"

#include <fstream>
#include <random>

#include "util.hpp"

namespace ctp::sensitivity {

using portfolio::TradeDecision;

PerturbResult perturb_schedule(const backtest::BacktestReport& report,
                               const market_data::PriceSeries& gold,
                               const market_data::PriceSeries& btc,
                               const market_data::TradingCalendar& calendar,
                               const backtest::BacktestConfig& config,
                               const PerturbationSpec& spec) {
    if (report.records.empty()) throw util::DataError("empty report");
    if (!(spec.lo >= 0.0 && spec.lo <= spec.hi && spec.hi < 1.0))
        throw std::invalid_argument("perturbation range must satisfy 0 <= lo <= hi < 1");
    if (spec.trials < 1) throw std::invalid_argument("need at least one trial");

    const dates::Date start = report.records.front().date;
    std::vector<TradeDecision> schedule;
    schedule.reserve(report.records.size());
    for (const auto& r : report.records) schedule.push_back(r.decision);

    PerturbResult out;
    out.baseline = backtest::replay_schedule(gold, btc, calendar, config.rates,
                                             config.risk.delta, config.initial_cash, start,
                                             schedule, false)
                       .final_value;

    for (int t = 0; t < spec.trials; ++t) {
        std::mt19937_64 rng(util::substream(spec.seed, static_cast<std::uint64_t>(t)));
        std::uniform_real_distribution<double> mag(spec.lo, spec.hi);
        std::bernoulli_distribution flip(0.5);

        std::vector<TradeDecision> perturbed = schedule;
        for (auto& d : perturbed) {
            d.x *= 1.0 + (flip(rng) ? 1.0 : -1.0) * mag(rng);
            d.y *= 1.0 + (flip(rng) ? 1.0 : -1.0) * mag(rng);
        }
        auto replayed = backtest::replay_schedule(gold, btc, calendar, config.rates,
                                                  config.risk.delta, config.initial_cash,
                                                  start, perturbed, true);
        out.trial_values.push_back(replayed.final_value);
        out.repaired_days.push_back(replayed.repaired_days);
    }
    return out;
}

std::vector<ParamDelta> default_deltas(bool absolute) {
    using T = ParamDelta::Target;
    if (absolute) {
        return {{"+0%", T::None, 1.0, 0.0},
                {"+0.1%V0", T::InitialCash, 1.001, 0.0},
                {"+0.1%a", T::Alpha, 1.0, 0.001},
                {"+0.1%b", T::Beta, 1.0, 0.001},
                {"-0.1%a", T::Alpha, 1.0, -0.001},
                {"-0.1%b", T::Beta, 1.0, -0.001}};
    }
    return {{"+0%", T::None, 1.0, 0.0},
            {"+0.1%V0", T::InitialCash, 1.001, 0.0},
            {"+0.1%a", T::Alpha, 1.001, 0.0},
            {"+0.1%b", T::Beta, 1.001, 0.0},
            {"-0.1%a", T::Alpha, 0.999, 0.0},
            {"-0.1%b", T::Beta, 0.999, 0.0}};
}

std::vector<SensitivityRow> parameter_sensitivity(const market_data::PriceSeries& gold,
                                                  const market_data::PriceSeries& btc,
                                                  const market_data::TradingCalendar& calendar,
                                                  const backtest::BacktestConfig& base,
                                                  const std::vector<ParamDelta>& deltas,
                                                  bool markowitz) {
    if (deltas.empty()) throw std::invalid_argument("no deltas to run");
    std::vector<SensitivityRow> rows;
    for (const auto& delta : deltas) {
        backtest::BacktestConfig cfg = base;
        switch (delta.target) {
            case ParamDelta::Target::None: break;
            case ParamDelta::Target::InitialCash:
                cfg.initial_cash = cfg.initial_cash * delta.factor + delta.shift;
                break;
            case ParamDelta::Target::Alpha:
                cfg.rates.alpha = cfg.rates.alpha * delta.factor + delta.shift;
                break;
            case ParamDelta::Target::Beta:
                cfg.rates.beta = cfg.rates.beta * delta.factor + delta.shift;
                break;
        }
        auto report = markowitz ? backtest::run_markowitz(gold, btc, calendar, cfg)
                                : backtest::run(gold, btc, calendar, cfg);
        rows.push_back({delta.label, report.final_value});
    }
    return rows;
}

void export_trials_csv(const std::string& path, const PerturbResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "trial,final_value,repaired_days\n";
    out << "baseline," << util::format_double(result.baseline) << ",0\n";
    for (std::size_t t = 0; t < result.trial_values.size(); ++t)
        out << (t + 1) << ',' << util::format_double(result.trial_values[t]) << ','
            << result.repaired_days[t] << '\n';
}

void export_rows_csv(const std::string& path, const std::vector<SensitivityRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "label,final_value\n";
    for (const auto& r : rows)
        out << r.label << ',' << util::format_double(r.final_value) << '\n';
}

}  // namespace ctp::sensitivity
