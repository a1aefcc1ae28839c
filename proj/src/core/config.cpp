#include "config.hpp"

#include <charconv>
#include <fstream>

#include "util.hpp"

namespace ctp::config {

using util::DataError;

Config::Config() {
    values_ = {
        {"start_date", ""},
        {"end_date", ""},
        {"initial_cash", "1000"},
        {"alpha", "0.01"},
        {"beta", "0.02"},
        {"symmetric_commissions", "false"},
        {"delta", "0"},
        {"risk_free", "0"},
        {"golden", "0.618"},
        {"personality", "middle"},
        {"window_policy", "fixed"},
        {"window_length", "60"},
        {"arima_p", "1"},
        {"arima_d", "1"},
        {"arima_q", "1"},
        {"pso_particles", "100"},
        {"pso_iters", "200"},
        {"pso_omega_start", "0.9"},
        {"pso_omega_end", "0.4"},
        {"pso_c1", "2"},
        {"pso_c2", "2"},
        {"markowitz_lambda", "1"},
        {"markowitz_grid", "0.05"},
        {"seed", "0"},
        {"perturb_lo", "0.01"},
        {"perturb_hi", "0.03"},
        {"perturb_trials", "5"},
        {"sensitivity_absolute", "false"},
    };
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = util::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected key = value");
        set(util::trim(t.substr(0, eq)), util::trim(t.substr(eq + 1)));
    }
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw DataError("unknown config key '" + key + "'");
    it->second = value;
}

const std::string& Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw DataError("unknown config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const { return util::parse_double(get(key)); }

int Config::get_int(const std::string& key) const {
    const std::string& s = get(key);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("config key '" + key + "' is not an integer: " + s);
    return v;
}

std::uint64_t Config::get_uint64(const std::string& key) const {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("config key '" + key + "' is not an unsigned integer: " + s);
    return v;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw DataError("config key '" + key + "' is not a boolean: " + s);
}

backtest::BacktestConfig Config::to_backtest() const {
    backtest::BacktestConfig cfg;
    if (get("start_date").empty() || get("end_date").empty())
        throw DataError("config must set start_date and end_date");
    cfg.start = dates::parse_date(get("start_date"));
    cfg.end = dates::parse_date(get("end_date"));
    cfg.initial_cash = get_double("initial_cash");
    cfg.rates.alpha = get_double("alpha");
    cfg.rates.beta = get_double("beta");
    cfg.rates.symmetric = get_bool("symmetric_commissions");
    cfg.risk.delta = get_double("delta");
    cfg.risk.risk_free = get_double("risk_free");
    cfg.risk.golden = get_double("golden");
    cfg.risk.personality = risk::personality_from_name(get("personality"));
    const std::string& policy = get("window_policy");
    if (policy == "fixed")
        cfg.window.adaptive = false;
    else if (policy == "adaptive")
        cfg.window.adaptive = true;
    else
        throw DataError("window_policy must be 'fixed' or 'adaptive'");
    cfg.window.length = get_int("window_length");
    cfg.arima.p = get_int("arima_p");
    cfg.arima.d = get_int("arima_d");
    cfg.arima.q = get_int("arima_q");
    cfg.pso.n_particles = get_int("pso_particles");
    cfg.pso.max_iters = get_int("pso_iters");
    cfg.pso.omega_start = get_double("pso_omega_start");
    cfg.pso.omega_end = get_double("pso_omega_end");
    cfg.pso.c1 = get_double("pso_c1");
    cfg.pso.c2 = get_double("pso_c2");
    cfg.markowitz_lambda = get_double("markowitz_lambda");
    cfg.markowitz_grid = get_double("markowitz_grid");
    cfg.seed = get_uint64("seed");
    return cfg;
}

sensitivity::PerturbationSpec Config::to_perturbation() const {
    sensitivity::PerturbationSpec spec;
    spec.lo = get_double("perturb_lo");
    spec.hi = get_double("perturb_hi");
    spec.trials = get_int("perturb_trials");
    spec.seed = get_uint64("seed");
    return spec;
}

}  // namespace ctp::config
