// ctp - command-line front end for the CTP trading engine.
//
// Subcommands: interpolate, forecast, backtest, sensitivity. Everything
// engine-side goes through the C API in ctp/ctp.h; this file only parses
// arguments, moves files around and prints results.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctp/ctp.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(int status) {
    switch (status) {
        case CTP_OK: return kExitOk;
        case CTP_ERROR_INVALID: return kExitUsage;
        case CTP_ERROR_DATA: return kExitData;
        default: return kExitNumeric;
    }
}

// Fails the whole command on the first engine error.
struct CommandError {
    int exit_code;
};

void check(int status) {
    if (status != CTP_OK) {
        std::cerr << "error: " << ctp_last_error() << "\n";
        throw CommandError{exit_code_for(status)};
    }
}

using SeriesPtr = std::unique_ptr<ctp_series, decltype(&ctp_series_free)>;
using CalendarPtr = std::unique_ptr<ctp_calendar, decltype(&ctp_calendar_free)>;
using ConfigPtr = std::unique_ptr<ctp_config, decltype(&ctp_config_free)>;
using ReportPtr = std::unique_ptr<ctp_report, decltype(&ctp_report_free)>;

SeriesPtr load_series(const std::string& path, ctp_asset asset, long long* dropped = nullptr) {
    ctp_series* raw = nullptr;
    check(ctp_series_load_csv(path.c_str(), asset, &raw, dropped));
    return SeriesPtr(raw, ctp_series_free);
}

SeriesPtr fill_series(const SeriesPtr& in) {
    ctp_series* raw = nullptr;
    check(ctp_series_hermite_fill(in.get(), &raw));
    return SeriesPtr(raw, ctp_series_free);
}

struct AlignedData {
    SeriesPtr gold{nullptr, ctp_series_free};
    SeriesPtr btc{nullptr, ctp_series_free};
    CalendarPtr calendar{nullptr, ctp_calendar_free};
};

AlignedData load_aligned(const std::string& gold_path, const std::string& btc_path) {
    AlignedData out;
    SeriesPtr gold_raw = load_series(gold_path, CTP_ASSET_GOLD);
    SeriesPtr btc_raw = load_series(btc_path, CTP_ASSET_BITCOIN);
    SeriesPtr gold_filled = fill_series(gold_raw);
    SeriesPtr btc_filled = fill_series(btc_raw);
    ctp_series* g = nullptr;
    ctp_series* b = nullptr;
    ctp_calendar* c = nullptr;
    check(ctp_series_align(gold_filled.get(), btc_filled.get(), &g, &b, &c));
    out.gold = SeriesPtr(g, ctp_series_free);
    out.btc = SeriesPtr(b, ctp_series_free);
    out.calendar = CalendarPtr(c, ctp_calendar_free);
    return out;
}

std::string config_value(const ConfigPtr& cfg, const std::string& key) {
    char buf[256];
    check(ctp_config_get(cfg.get(), key.c_str(), buf, sizeof(buf)));
    return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const std::string& config_path, const std::vector<std::string>& inputs,
                    const std::string& seed) {
    nlohmann::ordered_json j;
    j["tool"] = "ctp";
    j["tool_version"] = ctp_version();
    j["subcommand"] = subcommand;
    j["config"] = config_path;
    j["inputs"] = inputs;
    j["output_dir"] = out_dir.string();
    j["seed"] = seed;
    std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
    if (!out) {
        std::cerr << "error: cannot write manifest in " << out_dir << "\n";
        throw CommandError{kExitData};
    }
    out << j.dump(2) << '\n';
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << dir << "\n";
        throw CommandError{kExitData};
    }
}

// Seed precedence: CTP_SEED env, then --seed, then the config file.
void apply_seed_override(const ConfigPtr& cfg, const std::string& flag_seed) {
    if (!flag_seed.empty()) check(ctp_config_set(cfg.get(), "seed", flag_seed.c_str()));
    if (const char* env = std::getenv("CTP_SEED"); env != nullptr && *env != '\0')
        check(ctp_config_set(cfg.get(), "seed", env));
}

int cmd_interpolate(const std::string& gold_path, const fs::path& out_dir) {
    long long dropped = 0;
    SeriesPtr raw = load_series(gold_path, CTP_ASSET_GOLD, &dropped);
    SeriesPtr filled = fill_series(raw);

    ensure_out_dir(out_dir);
    const fs::path out_csv = out_dir / "gold_filled.csv";
    check(ctp_series_export_csv(filled.get(), out_csv.string().c_str()));
    write_manifest(out_dir, "interpolate", "", {gold_path}, "");

    const long long observed = ctp_series_size(raw.get());
    const long long total = ctp_series_size(filled.get());
    std::printf("observed points: %lld\n", observed);
    std::printf("interpolated points: %lld\n", total - observed);
    std::printf("dropped rows: %lld\n", dropped);
    std::printf("wrote %s\n", out_csv.string().c_str());
    return kExitOk;
}

int cmd_forecast(const std::string& csv_path, ctp_asset asset, const std::string& date,
                 const std::vector<std::string>& window_args, int p, int d, int q, int horizon,
                 bool diagnostics, const fs::path& out_dir) {
    int window_length = 60;
    int adaptive = 0;
    if (window_args.empty() || window_args[0] == "adaptive") {
        adaptive = 1;
        if (window_args.size() > 1) window_length = std::stoi(window_args[1]);
    } else if (window_args[0] == "fixed") {
        if (window_args.size() < 2) {
            std::cerr << "error: --window fixed needs a length\n";
            return kExitUsage;
        }
        window_length = std::stoi(window_args[1]);
    } else {
        std::cerr << "error: --window expects 'fixed N' or 'adaptive'\n";
        return kExitUsage;
    }

    SeriesPtr raw = load_series(csv_path, asset);
    SeriesPtr filled = fill_series(raw);

    std::vector<double> points(static_cast<std::size_t>(horizon));
    double sigma = 0.0, r2 = 0.0;
    int wn_pass = 0, chosen = 0;
    check(ctp_forecast_at(filled.get(), date.c_str(), p, d, q, window_length, adaptive,
                          horizon, points.data(), &sigma, &r2, &wn_pass, &chosen));

    std::printf("asset: %s\n", asset == CTP_ASSET_GOLD ? "gold" : "bitcoin");
    std::printf("window: %d%s\n", chosen, adaptive ? " (adaptive)" : "");
    for (int k = 0; k < horizon; ++k)
        std::printf("forecast day +%d: %.6f\n", k + 1, points[static_cast<std::size_t>(k)]);
    std::printf("sigma: %.6f\n", sigma);
    std::printf("r2: %.6f\n", r2);
    std::printf("residual white noise: %s\n", wn_pass ? "pass" : "fail");

    if (diagnostics) {
        ensure_out_dir(out_dir);
        check(ctp_forecast_diagnostics(filled.get(), date.c_str(), p, d, q, window_length,
                                       adaptive, out_dir.string().c_str()));
        write_manifest(out_dir, "forecast", "", {csv_path}, "");
        std::printf("diagnostics written to %s\n", out_dir.string().c_str());
    }
    return kExitOk;
}

int cmd_backtest(const std::string& config_path, const std::string& gold_path,
                 const std::string& btc_path, const std::string& baseline,
                 const std::string& personality, const std::string& seed,
                 const std::vector<std::string>& overrides, const fs::path& out_dir) {
    ctp_config* cfg_raw = nullptr;
    check(ctp_config_create(&cfg_raw));
    ConfigPtr cfg(cfg_raw, ctp_config_free);
    check(ctp_config_load_file(cfg.get(), config_path.c_str()));
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
            return kExitUsage;
        }
        check(ctp_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (!personality.empty())
        check(ctp_config_set(cfg.get(), "personality", personality.c_str()));
    apply_seed_override(cfg, seed);

    AlignedData data = load_aligned(gold_path, btc_path);

    ctp_report* report_raw = nullptr;
    if (baseline == "markowitz") {
        check(ctp_backtest_run_markowitz(data.gold.get(), data.btc.get(), data.calendar.get(),
                                         cfg.get(), &report_raw));
    } else if (baseline.empty()) {
        check(ctp_backtest_run(data.gold.get(), data.btc.get(), data.calendar.get(), cfg.get(),
                               &report_raw));
    } else {
        std::cerr << "error: unknown baseline '" << baseline << "'\n";
        return kExitUsage;
    }
    ReportPtr report(report_raw, ctp_report_free);

    ensure_out_dir(out_dir);
    check(ctp_report_export_csv(report.get(), (out_dir / "report.csv").string().c_str()));
    check(ctp_report_export_json(report.get(), (out_dir / "summary.json").string().c_str()));
    write_manifest(out_dir, "backtest", config_path, {gold_path, btc_path},
                   config_value(cfg, "seed"));

    double final_value = 0.0;
    check(ctp_report_final_value(report.get(), &final_value));
    std::printf("days: %lld\n", ctp_report_days(report.get()));
    std::printf("fallback days: %d\n", ctp_report_fallback_days(report.get()));
    std::printf("final value: %.2f\n", final_value);
    return kExitOk;
}

int cmd_sensitivity(const std::string& mode, const std::string& config_path,
                    const std::string& gold_path, const std::string& btc_path,
                    const std::string& report_path, const std::string& baseline,
                    const std::string& trials, const std::string& seed,
                    const fs::path& out_dir) {
    ctp_config* cfg_raw = nullptr;
    check(ctp_config_create(&cfg_raw));
    ConfigPtr cfg(cfg_raw, ctp_config_free);
    check(ctp_config_load_file(cfg.get(), config_path.c_str()));
    if (!trials.empty()) check(ctp_config_set(cfg.get(), "perturb_trials", trials.c_str()));
    apply_seed_override(cfg, seed);

    AlignedData data = load_aligned(gold_path, btc_path);
    ensure_out_dir(out_dir);

    if (mode == "scheme") {
        if (report_path.empty()) {
            std::cerr << "error: --mode scheme needs --report <report.csv>\n";
            return kExitUsage;
        }
        ctp_report* report_raw = nullptr;
        check(ctp_report_load_csv(report_path.c_str(), &report_raw));
        ReportPtr report(report_raw, ctp_report_free);

        const fs::path out_csv = out_dir / "scheme_trials.csv";
        double baseline_value = 0.0;
        check(ctp_sensitivity_scheme(report.get(), data.gold.get(), data.btc.get(),
                                     data.calendar.get(), cfg.get(),
                                     out_csv.string().c_str(), &baseline_value));
        write_manifest(out_dir, "sensitivity", config_path,
                       {gold_path, btc_path, report_path}, config_value(cfg, "seed"));
        std::printf("baseline final value: %.4f\n", baseline_value);
        std::printf("wrote %s\n", out_csv.string().c_str());
        return kExitOk;
    }
    if (mode == "params") {
        const fs::path out_csv = out_dir / "param_sensitivity.csv";
        check(ctp_sensitivity_params(data.gold.get(), data.btc.get(), data.calendar.get(),
                                     cfg.get(), baseline == "markowitz" ? 1 : 0,
                                     out_csv.string().c_str()));
        write_manifest(out_dir, "sensitivity", config_path, {gold_path, btc_path},
                       config_value(cfg, "seed"));
        std::printf("wrote %s\n", out_csv.string().c_str());
        return kExitOk;
    }
    std::cerr << "error: --mode must be 'scheme' or 'params'\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CTP daily gold/bitcoin trading model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ctp_version());

    // interpolate
    auto* interp = app.add_subcommand("interpolate", "Gap-fill a gold price CSV");
    std::string in_gold;
    std::string in_out_dir = ".";
    interp->add_option("--gold", in_gold, "gold price CSV")->required();
    interp->add_option("--out-dir", in_out_dir, "output directory");

    // forecast
    auto* fcst = app.add_subcommand("forecast", "Fit ARIMA and predict the next days");
    std::string fc_csv, fc_asset = "bitcoin", fc_date;
    std::vector<std::string> fc_window{"fixed", "60"};
    int fc_p = 1, fc_d = 1, fc_q = 1, fc_horizon = 3;
    bool fc_diag = false;
    std::string fc_out_dir = ".";
    fcst->add_option("--csv", fc_csv, "price CSV")->required();
    fcst->add_option("--asset", fc_asset, "gold or bitcoin")
        ->check(CLI::IsMember({"gold", "bitcoin"}))
        ->required();
    fcst->add_option("--date", fc_date, "forecast origin date")->required();
    fcst->add_option("--window", fc_window, "'fixed N' or 'adaptive'")
        ->expected(1, 2)
        ->required();
    fcst->add_option("--p", fc_p, "AR order");
    fcst->add_option("--d", fc_d, "differencing order");
    fcst->add_option("--q", fc_q, "MA order");
    fcst->add_option("--horizon", fc_horizon, "days ahead");
    fcst->add_flag("--diagnostics", fc_diag, "write ACF/PACF/residual CSVs");
    fcst->add_option("--out-dir", fc_out_dir, "diagnostics directory");

    // backtest
    auto* bt = app.add_subcommand("backtest", "Run the daily trading loop");
    std::string bt_config, bt_gold, bt_btc, bt_baseline, bt_personality, bt_seed;
    std::vector<std::string> bt_set;
    std::string bt_out_dir = ".";
    bt->add_option("--config", bt_config, "run configuration file")->required();
    bt->add_option("--gold", bt_gold, "gold price CSV")->required();
    bt->add_option("--btc", bt_btc, "bitcoin price CSV")->required();
    bt->add_option("--baseline", bt_baseline, "use a baseline strategy (markowitz)");
    bt->add_option("--personality", bt_personality, "crazy, stable or middle")
        ->check(CLI::IsMember({"crazy", "stable", "middle"}));
    bt->add_option("--seed", bt_seed, "RNG seed override");
    bt->add_option("--set", bt_set, "config override key=value (repeatable)");
    bt->add_option("--out-dir", bt_out_dir, "output directory");

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity", "Perturbation and parameter harnesses");
    std::string se_mode, se_config, se_gold, se_btc, se_report, se_baseline, se_trials, se_seed;
    std::string se_out_dir = ".";
    sens->add_option("--mode", se_mode, "scheme or params")->required();
    sens->add_option("--config", se_config, "run configuration file")->required();
    sens->add_option("--gold", se_gold, "gold price CSV")->required();
    sens->add_option("--btc", se_btc, "bitcoin price CSV")->required();
    sens->add_option("--report", se_report, "prior report.csv (scheme mode)");
    sens->add_option("--baseline", se_baseline, "rerun with a baseline (markowitz)");
    sens->add_option("--trials", se_trials, "number of perturbation trials");
    sens->add_option("--seed", se_seed, "RNG seed override");
    sens->add_option("--out-dir", se_out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (interp->parsed()) return cmd_interpolate(in_gold, in_out_dir);
        if (fcst->parsed())
            return cmd_forecast(fc_csv,
                                fc_asset == "gold" ? CTP_ASSET_GOLD : CTP_ASSET_BITCOIN,
                                fc_date, fc_window, fc_p, fc_d, fc_q, fc_horizon, fc_diag,
                                fc_out_dir);
        if (bt->parsed())
            return cmd_backtest(bt_config, bt_gold, bt_btc, bt_baseline, bt_personality,
                                bt_seed, bt_set, bt_out_dir);
        if (sens->parsed())
            return cmd_sensitivity(se_mode, se_config, se_gold, se_btc, se_report, se_baseline,
                                   se_trials, se_seed, se_out_dir);
    } catch (const CommandError& e) {
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
