// ctp-datagen - writes deterministic sample gold/bitcoin price CSVs.
//
// The generated files mimic the shape of real inputs: bitcoin quotes every
// calendar day, gold only on weekdays, both following seeded geometric
// Brownian motion. Handy for demos and for exercising the pipeline without
// shipping a historical dataset.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "dates.hpp"
#include "market_data.hpp"
#include "util.hpp"

namespace md = ctp::market_data;

namespace {

void write_raw_csv(const md::PriceSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ctp::util::DataError("cannot write " + path);
    out << "date,price\n";
    for (const auto& p : series.points)
        out << ctp::dates::to_string(p.date) << ',' << ctp::util::format_double(p.price)
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate sample gold/bitcoin price CSVs"};
    std::string out_dir = ".";
    std::string start = "2016-09-11";
    std::string end = "2021-09-10";
    std::string profile = "market";
    unsigned long long seed = 7;
    double gold_price = 1324.6, gold_drift = 0.00017, gold_vol = 0.009;
    double btc_price = 609.67, btc_drift = 0.0024, btc_vol = 0.04;
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--start", start, "first date (YYYY-MM-DD)");
    app.add_option("--end", end, "last date (YYYY-MM-DD)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--profile", profile, "market (regime cycles) or gbm (constant drift)")
        ->check(CLI::IsMember({"market", "gbm"}));
    app.add_option("--gold-price", gold_price, "initial gold price (gbm)");
    app.add_option("--gold-drift", gold_drift, "gold daily log drift (gbm)");
    app.add_option("--gold-vol", gold_vol, "gold daily log volatility (gbm)");
    app.add_option("--btc-price", btc_price, "initial bitcoin price (gbm)");
    app.add_option("--btc-drift", btc_drift, "bitcoin daily log drift (gbm)");
    app.add_option("--btc-vol", btc_vol, "bitcoin daily log volatility (gbm)");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto first = ctp::dates::parse_date(start);
        const auto last = ctp::dates::parse_date(end);
        std::filesystem::create_directories(out_dir);

        md::PriceSeries gold, btc;
        if (profile == "market") {
            gold = md::sample_market_series(md::Asset::Gold, first, last, seed);
            btc = md::sample_market_series(md::Asset::Bitcoin, first, last, seed);
        } else {
            gold = md::synthetic_gbm_series(md::Asset::Gold, first, last, gold_price,
                                            gold_drift, gold_vol, seed, true);
            btc = md::synthetic_gbm_series(md::Asset::Bitcoin, first, last, btc_price,
                                           btc_drift, btc_vol, seed + 1, false);
        }

        const std::string gold_path = out_dir + "/gold.csv";
        const std::string btc_path = out_dir + "/btc.csv";
        write_raw_csv(gold, gold_path);
        write_raw_csv(btc, btc_path);
        std::printf("wrote %s (%zu rows)\n", gold_path.c_str(), gold.size());
        std::printf("wrote %s (%zu rows)\n", btc_path.c_str(), btc.size());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
