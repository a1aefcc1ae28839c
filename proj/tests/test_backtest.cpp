#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "backtest.hpp"
#include "support/fixtures.hpp"
#include "util.hpp"

using namespace ctp;
using namespace ctp::backtest;
using testsupport::make_dataset;
using testsupport::make_flat_dataset;
using testsupport::small_config;
namespace fs = std::filesystem;

namespace {

const auto kStart = dates::parse_date("2020-03-02");
const auto kHistoryStart = dates::parse_date("2019-11-01");

}  // namespace

TEST_CASE("flat market: every personality holds and keeps exactly the initial cash") {
    auto data = make_flat_dataset(kHistoryStart, dates::parse_date("2020-03-20"));
    for (auto p : {risk::Personality::Crazy, risk::Personality::Stable,
                   risk::Personality::Middle}) {
        auto cfg = small_config(kStart, kStart + 10, p);
        auto report = run(data.gold, data.btc, data.calendar, cfg);
        REQUIRE(report.records.size() == 10);
        CHECK(std::abs(report.final_value - 1000.0) < 1e-6);
        for (const auto& r : report.records) {
            CHECK(r.decision.x == 0.0);
            CHECK(r.decision.y == 0.0);
        }
    }
}

TEST_CASE("a one-day range produces exactly one record") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-01"), 3);
    auto cfg = small_config(kStart, kStart + 1, risk::Personality::Middle);
    auto report = run(data.gold, data.btc, data.calendar, cfg);
    CHECK(report.records.size() == 1);
    CHECK(report.final_value == report.records.back().value_after);
}

TEST_CASE("value chain is consistent and decisions are feasible on their dates") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-05-01"), 11);
    auto cfg = small_config(kStart, kStart + 30, risk::Personality::Crazy, 5);
    auto report = run(data.gold, data.btc, data.calendar, cfg);

    double v = cfg.initial_cash;
    portfolio::PortfolioState s{1.0, 0.0, 0.0, v};
    for (const auto& r : report.records) {
        const bool gold_ok = data.calendar.is_tradable(market_data::Asset::Gold, r.date);
        CHECK(portfolio::feasible(r.state_before, r.decision, cfg.rates, gold_ok,
                                  cfg.risk.delta));
        // Fold the committed decisions over realized returns.
        double pg0 = data.gold.at(r.date).price, pg1 = data.gold.at(r.date + 1).price;
        double pb0 = data.btc.at(r.date).price, pb1 = data.btc.at(r.date + 1).price;
        s = portfolio::state_step(s, r.decision, {pg1 / pg0 - 1.0, pb1 / pb0 - 1.0},
                                  cfg.rates);
        CHECK(std::abs(s.value - r.value_after) <= 1e-9 * s.value);
        CHECK(std::abs(s.c + s.g + s.b - 1.0) < 1e-9);
        CHECK(r.decision.x == r.planned[0]);
        CHECK(r.decision.y == r.planned[1]);
    }
    CHECK(std::abs(s.value - report.final_value) <= 1e-6 * report.final_value);
}

TEST_CASE("gold decisions freeze on non-tradable days") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-05-01"), 13);
    auto cfg = small_config(kStart, kStart + 21, risk::Personality::Crazy, 9);
    auto report = run(data.gold, data.btc, data.calendar, cfg);
    int weekend_days = 0;
    for (const auto& r : report.records) {
        if (!data.calendar.is_tradable(market_data::Asset::Gold, r.date)) {
            CHECK(r.decision.x == 0.0);
            ++weekend_days;
        }
    }
    CHECK(weekend_days >= 6);  // three weekends in three weeks
}

TEST_CASE("identical config and seed reproduce the report exactly") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-15"), 21);
    auto cfg = small_config(kStart, kStart + 8, risk::Personality::Middle, 1234);
    auto a = run(data.gold, data.btc, data.calendar, cfg);
    auto b = run(data.gold, data.btc, data.calendar, cfg);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.final_value == b.final_value);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].decision.x == b.records[i].decision.x);
        CHECK(a.records[i].decision.y == b.records[i].decision.y);
        CHECK(a.records[i].value_after == b.records[i].value_after);
    }
}

TEST_CASE("no lookahead: truncating future data leaves earlier decisions unchanged") {
    auto full = make_dataset(kHistoryStart, dates::parse_date("2020-06-01"), 31);

    // Rebuild the same world truncated three weeks earlier.
    auto cut = dates::parse_date("2020-05-11");
    testsupport::Dataset truncated;
    truncated.gold.asset = market_data::Asset::Gold;
    truncated.btc.asset = market_data::Asset::Bitcoin;
    for (const auto& p : full.gold.points)
        if (p.date <= cut) truncated.gold.points.push_back(p);
    for (const auto& p : full.btc.points)
        if (p.date <= cut) truncated.btc.points.push_back(p);
    auto aligned = market_data::align(truncated.gold, truncated.btc);

    auto cfg_full = small_config(kStart, dates::parse_date("2020-05-30"),
                                 risk::Personality::Crazy, 77);
    auto cfg_cut = cfg_full;
    cfg_cut.end = cut;

    auto a = run(full.gold, full.btc, full.calendar, cfg_full);
    auto b = run(aligned.gold, aligned.btc, aligned.calendar, cfg_cut);

    REQUIRE(b.records.size() <= a.records.size());
    for (std::size_t i = 0; i < b.records.size(); ++i) {
        CHECK(a.records[i].decision.x == b.records[i].decision.x);
        CHECK(a.records[i].decision.y == b.records[i].decision.y);
        CHECK(a.records[i].value_after == b.records[i].value_after);
    }
}

TEST_CASE("audit hook sees only the decision day as the latest visible date") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-10"), 41);
    auto cfg = small_config(kStart, kStart + 5, risk::Personality::Middle, 3);
    int calls = 0;
    auto report = run(data.gold, data.btc, data.calendar, cfg,
                      [&](Date day, Date latest) {
                          CHECK(latest <= day);
                          ++calls;
                      });
    CHECK(calls == 5);
    CHECK(report.records.size() == 5);
}

TEST_CASE("markowitz: flat market holds, grid containment, feasibility") {
    auto flat = make_flat_dataset(kHistoryStart, dates::parse_date("2020-03-20"));
    auto cfg = small_config(kStart, kStart + 10, risk::Personality::Middle);
    auto report = run_markowitz(flat.gold, flat.btc, flat.calendar, cfg);
    CHECK(std::abs(report.final_value - 1000.0) < 1e-6);

    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-20"), 51);
    cfg.markowitz_grid = 0.5;
    auto r2 = run_markowitz(data.gold, data.btc, data.calendar, cfg);
    for (const auto& r : r2.records) {
        // Committed decisions live on the enumerated grid.
        double sx = r.decision.x / 0.5, sy = r.decision.y / 0.5;
        CHECK(std::abs(sx - std::round(sx)) < 1e-9);
        CHECK(std::abs(sy - std::round(sy)) < 1e-9);
        CHECK(portfolio::feasible(r.state_before, r.decision, cfg.rates,
                                  data.calendar.is_tradable(market_data::Asset::Gold, r.date),
                                  cfg.risk.delta));
    }
}

TEST_CASE("replay_schedule reproduces a report's value path and scales linearly") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-20"), 61);
    auto cfg = small_config(kStart, kStart + 12, risk::Personality::Crazy, 8);
    auto report = run(data.gold, data.btc, data.calendar, cfg);

    std::vector<portfolio::TradeDecision> schedule;
    for (const auto& r : report.records) schedule.push_back(r.decision);

    auto replay = replay_schedule(data.gold, data.btc, data.calendar, cfg.rates,
                                  cfg.risk.delta, cfg.initial_cash, kStart, schedule, false);
    CHECK(replay.final_value == doctest::Approx(report.final_value).epsilon(1e-12));

    auto scaled = replay_schedule(data.gold, data.btc, data.calendar, cfg.rates,
                                  cfg.risk.delta, 1.001 * cfg.initial_cash, kStart, schedule,
                                  false);
    CHECK(std::abs(scaled.final_value - 1.001 * replay.final_value) <=
          1e-9 * scaled.final_value);
}

TEST_CASE("report CSV export round-trips the value sequence bit-identically") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-10"), 71);
    auto cfg = small_config(kStart, kStart + 6, risk::Personality::Middle, 15);
    auto report = run(data.gold, data.btc, data.calendar, cfg);

    fs::path csv = fs::temp_directory_path() / "ctp_report_roundtrip.csv";
    export_report_csv(report, csv.string());
    auto loaded = load_report_csv(csv.string());

    REQUIRE(loaded.records.size() == report.records.size());
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        CHECK(loaded.records[i].value_after == report.records[i].value_after);
        CHECK(loaded.records[i].decision.x == report.records[i].decision.x);
        CHECK(loaded.records[i].decision.y == report.records[i].decision.y);
        CHECK(loaded.records[i].date == report.records[i].date);
    }
    CHECK(loaded.final_value == report.final_value);
}

TEST_CASE("export_report_json echoes the final value and config") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-10"), 81);
    auto cfg = small_config(kStart, kStart + 3, risk::Personality::Stable, 2);
    auto report = run(data.gold, data.btc, data.calendar, cfg);

    fs::path path = fs::temp_directory_path() / "ctp_summary.json";
    export_report_json(report, path.string());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("\"final_value\"") != std::string::npos);
    CHECK(text.find("\"stable\"") != std::string::npos);
    CHECK(text.find(util::format_double(report.final_value)) != std::string::npos);
}

TEST_CASE("preconditions: bad ranges and missing history are rejected") {
    auto data = make_dataset(kHistoryStart, dates::parse_date("2020-04-10"), 91);
    auto cfg = small_config(kStart, kStart, risk::Personality::Middle);
    CHECK_THROWS_AS(run(data.gold, data.btc, data.calendar, cfg), util::DataError);

    auto cfg2 = small_config(kHistoryStart + 5, kHistoryStart + 10, risk::Personality::Middle);
    CHECK_THROWS_AS(run(data.gold, data.btc, data.calendar, cfg2), util::DataError);

    auto cfg3 = small_config(kStart, dates::parse_date("2021-01-01"), risk::Personality::Middle);
    CHECK_THROWS_AS(run(data.gold, data.btc, data.calendar, cfg3), util::DataError);
}
