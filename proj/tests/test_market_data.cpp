#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hermite.hpp"
#include "market_data.hpp"
#include "util.hpp"

using namespace ctp;
using namespace ctp::market_data;
namespace fs = std::filesystem;

namespace {

fs::path write_temp_csv(const std::string& name, const std::string& body) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::trunc);
    out << body;
    return p;
}

}  // namespace

TEST_CASE("load_price_csv reads slash dates and keeps row order by date") {
    auto p = write_temp_csv("ctp_load1.csv", "Date,Value\n9/11/16,1324.6\n9/12/16,1327.5\n");
    auto r = load_price_csv(p.string(), Asset::Gold);
    REQUIRE(r.series.size() == 2);
    CHECK(r.dropped_rows == 0);
    CHECK(dates::to_string(r.series.points[0].date) == "2016-09-11");
    CHECK(r.series.points[0].price == doctest::Approx(1324.6));
    CHECK(r.series.points[1].source == PointSource::Observed);
}

TEST_CASE("load_price_csv drops empty and non-positive prices, counts them") {
    std::string body = "date,price\n";
    for (int k = 1; k <= 10; ++k)
        body += "2020-01-" + std::string(k < 10 ? "0" : "") + std::to_string(k) +
                (k == 4 ? ",\n" : ",100.5\n");
    auto p = write_temp_csv("ctp_load2.csv", body);
    auto r = load_price_csv(p.string(), Asset::Bitcoin);
    CHECK(r.series.size() == 9);
    CHECK(r.dropped_rows == 1);

    auto p2 = write_temp_csv("ctp_load3.csv", "date,price\n2020-01-01,-5\n2020-01-02,7\n");
    auto r2 = load_price_csv(p2.string(), Asset::Bitcoin);
    CHECK(r2.series.size() == 1);
    CHECK(r2.dropped_rows == 1);
}

TEST_CASE("load_price_csv sorts out-of-order rows ascending") {
    auto p = write_temp_csv("ctp_load4.csv", "date,price\n9/12/16,2\n9/11/16,1\n");
    auto r = load_price_csv(p.string(), Asset::Gold);
    CHECK(dates::to_string(r.series.points[0].date) == "2016-09-11");
    CHECK(dates::to_string(r.series.points[1].date) == "2016-09-12");
}

TEST_CASE("load_price_csv error paths") {
    CHECK_THROWS_AS(load_price_csv("/nonexistent/file.csv", Asset::Gold), util::DataError);
    auto bad = write_temp_csv("ctp_load5.csv", "date,price\nnot-a-date,3\n");
    CHECK_THROWS_AS(load_price_csv(bad.string(), Asset::Gold), util::DataError);
    auto dup = write_temp_csv("ctp_load6.csv", "date,price\n9/11/16,1\n2016-09-11,2\n");
    CHECK_THROWS_AS(load_price_csv(dup.string(), Asset::Gold), util::DataError);
}

TEST_CASE("hermite_fill covers every day and passes through knots") {
    PriceSeries s;
    s.asset = Asset::Gold;
    auto add = [&](const char* d, double v) {
        s.points.push_back({dates::parse_date(d), v, PointSource::Observed});
    };
    add("2020-01-01", 10.0);
    add("2020-01-02", 11.0);
    add("2020-01-05", 12.5);  // 2-day gap
    add("2020-01-06", 13.0);

    auto filled = hermite_fill(s);
    CHECK(filled.contiguous());
    CHECK(filled.size() == 6);
    CHECK(filled.at(dates::parse_date("2020-01-02")).price == 11.0);  // bit-identical
    CHECK(filled.at(dates::parse_date("2020-01-05")).price == 12.5);
    CHECK(filled.at(dates::parse_date("2020-01-03")).source == PointSource::Interpolated);
}

TEST_CASE("hermite_fill reproduces a linear trend exactly across gaps") {
    PriceSeries s;
    s.asset = Asset::Gold;
    auto day = [](int k) { return dates::parse_date("2020-03-01") + k; };
    for (int k : {0, 1, 2, 5, 6, 9, 10}) {
        double t = static_cast<double>(day(k).serial);
        s.points.push_back({day(k), 2.0 * t + 5.0, PointSource::Observed});
    }
    auto filled = hermite_fill(s);
    for (const auto& p : filled.points) {
        double expected = 2.0 * static_cast<double>(p.date.serial) + 5.0;
        CHECK(p.price == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("hermite_fill needs three observed points") {
    PriceSeries s;
    s.asset = Asset::Gold;
    s.points.push_back({dates::parse_date("2020-01-01"), 1.0, PointSource::Observed});
    s.points.push_back({dates::parse_date("2020-01-03"), 2.0, PointSource::Observed});
    CHECK_THROWS_AS(hermite_fill(s), util::DataError);
}

TEST_CASE("monotone knots bound the interpolant between bracketing values") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> jump(0.1, 5.0);
    std::uniform_int_distribution<int> gap(1, 4);

    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> t, y;
        double tt = 0.0, yy = 10.0;
        for (int k = 0; k < 8; ++k) {
            t.push_back(tt);
            y.push_back(yy);
            tt += gap(rng);
            yy += jump(rng);  // strictly increasing knots
        }
        hermite::MonotoneCubic interp(t, y);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            for (int j = 1; j < 8; ++j) {
                double x = t[i] + (t[i + 1] - t[i]) * j / 8.0;
                double v = interp(x);
                CHECK(v >= y[i] - 1e-9);
                CHECK(v <= y[i + 1] + 1e-9);
            }
        }
    }
}

TEST_CASE("interpolant is C1 at interior knots") {
    std::vector<double> t{0, 1, 3, 4, 7, 8, 10};
    std::vector<double> y{1.0, 1.5, 1.2, 2.0, 2.1, 3.0, 2.5};
    hermite::MonotoneCubic interp(t, y);
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        double left = interp.derivative(t[i] - 1e-9);
        double right = interp.derivative(t[i] + 1e-9);
        CHECK(std::abs(left - right) < 1e-6);
    }
}

TEST_CASE("monotone cubics are reconstructed through gaps to 1e-9 relative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(0.1, 2.0);
    std::uniform_real_distribution<double> root(-30.0, 0.0);

    for (int trial = 0; trial < 100; ++trial) {
        // p'(t) = a (t - r)^2 + c >= 0 makes p strictly increasing.
        double a = coef(rng), r = root(rng), c = coef(rng) * 0.1;
        auto p = [&](double t) {
            return a * (t - r) * (t - r) * (t - r) / 3.0 + c * t + 50.0;
        };
        std::vector<double> t, y;
        double tt = 0.0;
        std::uniform_int_distribution<int> gap(1, 3);
        for (int k = 0; k < 10; ++k) {
            t.push_back(tt);
            y.push_back(p(tt));
            tt += gap(rng);
        }
        hermite::MonotoneCubic interp(t, y);
        for (double x = t.front(); x <= t.back(); x += 0.25) {
            double expected = p(x);
            CHECK(std::abs(interp(x) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("align truncates to the common range and builds the calendar") {
    using testdates = dates::Date;
    PriceSeries gold, btc;
    gold.asset = Asset::Gold;
    btc.asset = Asset::Bitcoin;
    auto day0 = dates::parse_date("2021-03-01");  // a Monday
    for (int k = 0; k < 21; ++k) {
        testdates d = day0 + k;
        if (!dates::is_weekend(d)) gold.points.push_back({d, 1800.0 + k, PointSource::Observed});
        btc.points.push_back({d - 3, 50000.0 + k, PointSource::Observed});
    }
    auto gold_filled = hermite_fill(gold);
    auto aligned = align(gold_filled, btc);

    CHECK(aligned.gold.first_date() == aligned.btc.first_date());
    CHECK(aligned.gold.last_date() == aligned.btc.last_date());
    CHECK(aligned.gold.first_date() == gold_filled.first_date());  // gold range is inside btc's
    CHECK(aligned.calendar.is_tradable(Asset::Gold, day0));
    auto saturday = day0 + 5;
    REQUIRE(dates::is_weekend(saturday));
    CHECK_FALSE(aligned.calendar.is_tradable(Asset::Gold, saturday));
    CHECK(aligned.calendar.is_tradable(Asset::Bitcoin, saturday));
}

TEST_CASE("align counts the full experiment range as 1826 days") {
    auto start = dates::parse_date("2016-09-11");
    auto end = dates::parse_date("2021-09-10");
    CHECK(end - start + 1 == 1826);
}

TEST_CASE("align rejects disjoint ranges") {
    PriceSeries a, b;
    a.asset = Asset::Gold;
    b.asset = Asset::Bitcoin;
    for (int k = 0; k < 5; ++k) {
        a.points.push_back({dates::parse_date("2020-01-01") + k, 1.0, PointSource::Observed});
        b.points.push_back({dates::parse_date("2021-01-01") + k, 1.0, PointSource::Observed});
    }
    CHECK_THROWS_AS(align(a, b), util::DataError);
}

TEST_CASE("export then reload round-trips prices bit-identically") {
    auto ds = dates::parse_date("2020-06-01");
    PriceSeries s;
    s.asset = Asset::Bitcoin;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> px(100.0, 90000.0);
    for (int k = 0; k < 40; ++k) s.points.push_back({ds + k, px(rng), PointSource::Observed});

    fs::path p = fs::temp_directory_path() / "ctp_roundtrip.csv";
    export_series_csv(s, p.string());
    auto r = load_price_csv(p.string(), Asset::Bitcoin);
    REQUIRE(r.series.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(r.series.points[i].price == s.points[i].price);
}
