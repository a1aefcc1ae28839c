#include "market_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "hermite.hpp"
#include "util.hpp"

namespace ctp::market_data {

using util::DataError;

const char* asset_name(Asset a) { return a == Asset::Gold ? "gold" : "bitcoin"; }

const char* source_name(PointSource s) {
    return s == PointSource::Observed ? "observed" : "interpolated";
}

bool PriceSeries::contiguous() const {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].date - points[i - 1].date != 1) return false;
    return true;
}

std::size_t PriceSeries::index_of(Date d) const {
    auto it = std::lower_bound(points.begin(), points.end(), d,
                               [](const PricePoint& p, Date x) { return p.date < x; });
    if (it == points.end() || it->date != d)
        throw DataError("no price for " + dates::to_string(d));
    return static_cast<std::size_t>(it - points.begin());
}

TradingCalendar::TradingCalendar(Date first, Date last, std::vector<bool> gold_tradable)
    : first_(first), last_(last), gold_tradable_(std::move(gold_tradable)) {
    if (gold_tradable_.size() != static_cast<std::size_t>(last - first + 1))
        throw DataError("calendar mask does not match date range");
}

bool TradingCalendar::is_tradable(Asset a, Date d) const {
    if (a == Asset::Bitcoin) return true;
    if (d < first_ || d > last_) return false;
    return gold_tradable_[static_cast<std::size_t>(d - first_)];
}

LoadResult load_price_csv(const std::string& path, Asset asset) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    LoadResult out;
    out.series.asset = asset;

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        auto fields = util::split(line, ',');
        if (fields.size() < 2)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected date,price");
        std::string date_s = util::trim(fields[0]);
        std::string price_s = util::trim(fields[1]);
        Date d;
        try {
            d = dates::parse_date(date_s);
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (price_s.empty()) {
            ++out.dropped_rows;
            continue;
        }
        double price = util::parse_double(price_s);
        if (!(price > 0.0) || !std::isfinite(price)) {
            ++out.dropped_rows;
            continue;
        }
        out.series.points.push_back({d, price, PointSource::Observed});
    }

    std::sort(out.series.points.begin(), out.series.points.end(),
              [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < out.series.points.size(); ++i)
        if (out.series.points[i].date == out.series.points[i - 1].date)
            throw DataError(path + ": duplicate date " +
                            dates::to_string(out.series.points[i].date));
    return out;
}

PriceSeries hermite_fill(const PriceSeries& series) {
    if (series.size() < 3)
        throw DataError("need at least 3 observed points to gap-fill");

    std::vector<double> t, y;
    t.reserve(series.size());
    y.reserve(series.size());
    for (const auto& p : series.points) {
        t.push_back(static_cast<double>(p.date.serial));
        y.push_back(p.price);
    }
    hermite::MonotoneCubic interp(t, y);

    PriceSeries out;
    out.asset = series.asset;
    std::size_t k = 0;
    for (Date d = series.first_date(); d <= series.last_date(); ++d) {
        if (k < series.size() && series.points[k].date == d) {
            out.points.push_back(series.points[k]);
            ++k;
        } else {
            double v = interp(static_cast<double>(d.serial));
            out.points.push_back({d, v, PointSource::Interpolated});
        }
    }
    return out;
}

AlignResult align(const PriceSeries& gold, const PriceSeries& btc) {
    if (!gold.contiguous() || !btc.contiguous())
        throw DataError("align expects gap-filled series");
    Date first = std::max(gold.first_date(), btc.first_date());
    Date last = std::min(gold.last_date(), btc.last_date());
    if (first > last) throw DataError("series date ranges do not overlap");

    auto slice = [&](const PriceSeries& s) {
        PriceSeries out;
        out.asset = s.asset;
        std::size_t i = s.index_of(first);
        std::size_t j = s.index_of(last);
        out.points.assign(s.points.begin() + i, s.points.begin() + j + 1);
        return out;
    };

    AlignResult out;
    out.gold = slice(gold);
    out.btc = slice(btc);

    std::vector<bool> tradable(static_cast<std::size_t>(last - first + 1), false);
    for (const auto& p : out.gold.points)
        if (p.source == PointSource::Observed)
            tradable[static_cast<std::size_t>(p.date - first)] = true;
    out.calendar = TradingCalendar(first, last, std::move(tradable));
    return out;
}

void export_series_csv(const PriceSeries& series, const std::string& path) {
    std::ostringstream body;
    body << "date,price,source\n";
    for (const auto& p : series.points)
        body << dates::to_string(p.date) << ',' << util::format_double(p.price) << ','
             << source_name(p.source) << '\n';
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << body.str();
    if (!out) throw DataError("failed writing " + path);
}

PriceSeries synthetic_gbm_series(Asset asset, Date start, Date end, double initial_price,
                                 double daily_drift, double daily_vol, std::uint64_t seed,
                                 bool weekdays_only) {
    if (end < start) throw DataError("end date before start date");
    std::mt19937_64 rng(util::mix64(seed));
    std::normal_distribution<double> normal(0.0, 1.0);

    PriceSeries out;
    out.asset = asset;
    double log_p = std::log(initial_price);
    for (Date d = start; d <= end; ++d) {
        if (d != start) log_p += daily_drift + daily_vol * normal(rng);
        if (weekdays_only && dates::is_weekend(d)) continue;
        out.points.push_back({d, std::exp(log_p), PointSource::Observed});
    }
    return out;
}

namespace {

struct Regime {
    int days;
    double drift;
    double vol;
};

}  // namespace

PriceSeries sample_market_series(Asset asset, Date start, Date end, std::uint64_t seed) {
    if (end < start) throw DataError("end date before start date");

    // Cycle shapes: bitcoin compounds through long bull runs broken by
    // crashes and quiet stretches; gold alternates gentle up and down legs.
    static const std::vector<Regime> btc_cycle{
        {150, 0.008, 0.030}, {50, -0.008, 0.050}, {100, 0.0, 0.018}};
    static const std::vector<Regime> gold_cycle{{100, 0.0008, 0.007}, {100, -0.0004, 0.009}};

    const auto& cycle = (asset == Asset::Bitcoin) ? btc_cycle : gold_cycle;
    const double initial = (asset == Asset::Bitcoin) ? 609.67 : 1324.6;
    const bool weekdays_only = asset == Asset::Gold;

    int cycle_len = 0;
    for (const auto& r : cycle) cycle_len += r.days;

    std::mt19937_64 rng(util::mix64(seed ^ (asset == Asset::Bitcoin ? 0xB17CULL : 0x607DULL)));
    std::normal_distribution<double> normal(0.0, 1.0);

    PriceSeries out;
    out.asset = asset;
    double log_p = std::log(initial);
    for (Date d = start; d <= end; ++d) {
        if (d != start) {
            int phase = (d - start) % cycle_len;
            const Regime* regime = &cycle.back();
            for (const auto& r : cycle) {
                if (phase < r.days) {
                    regime = &r;
                    break;
                }
                phase -= r.days;
            }
            log_p += regime->drift + regime->vol * normal(rng);
        }
        if (weekdays_only && dates::is_weekend(d)) continue;
        out.points.push_back({d, std::exp(log_p), PointSource::Observed});
    }
    return out;
}

}  // namespace ctp::market_data
