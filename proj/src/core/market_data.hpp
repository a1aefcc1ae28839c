#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dates.hpp"

namespace ctp::market_data {

using dates::Date;

enum class Asset { Gold, Bitcoin };

enum class PointSource { Observed, Interpolated };

const char* asset_name(Asset a);
const char* source_name(PointSource s);

/// One daily quote. Prices are USD per unit and strictly positive.
struct PricePoint {
    Date date;
    double price = 0.0;
    PointSource source = PointSource::Observed;
};

/// Dated daily price series for one asset. Dates are strictly increasing;
/// after gap-filling they form a contiguous daily range.
struct PriceSeries {
    Asset asset = Asset::Gold;
    std::vector<PricePoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    Date first_date() const { return points.front().date; }
    Date last_date() const { return points.back().date; }
    bool contiguous() const;

    /// Index of the point at `d`; throws util::DataError when absent.
    std::size_t index_of(Date d) const;
    const PricePoint& at(Date d) const { return points[index_of(d)]; }
};

/// Which asset may trade on which day. Bitcoin trades every day in range;
/// gold trades only on days whose price was observed (not interpolated).
class TradingCalendar {
public:
    TradingCalendar() = default;
    TradingCalendar(Date first, Date last, std::vector<bool> gold_tradable);

    /// Days outside the calendar range count as non-tradable for gold and
    /// tradable for bitcoin.
    bool is_tradable(Asset a, Date d) const;

    Date first_date() const { return first_; }
    Date last_date() const { return last_; }

private:
    Date first_{}, last_{Date{-1}};
    std::vector<bool> gold_tradable_;
};

struct LoadResult {
    PriceSeries series;
    std::size_t dropped_rows = 0;  // empty or non-positive price fields
};

/// Reads a (date, price) CSV with one header line. Date format (M/D/YY or
/// YYYY-MM-DD) is auto-detected per file. Rows with an empty or
/// non-positive price are dropped and counted; rows whose date cannot be
/// parsed are an error. Output is sorted by date.
LoadResult load_price_csv(const std::string& path, Asset asset);

/// Fills every missing calendar day between the first and last observation
/// with a shape-preserving piecewise cubic Hermite value, tagged
/// Interpolated. Observed points pass through bit-identically.
PriceSeries hermite_fill(const PriceSeries& series);

struct AlignResult {
    PriceSeries gold;
    PriceSeries btc;
    TradingCalendar calendar;
};

/// Truncates both gap-filled series to their common contiguous date range
/// and builds the trading calendar from the observed gold days.
AlignResult align(const PriceSeries& gold, const PriceSeries& btc);

/// Writes "date,price,source" rows; numbers round-trip exactly.
void export_series_csv(const PriceSeries& series, const std::string& path);

/// Deterministic geometric-Brownian sample series used for demos and
/// fixtures. If weekdays_only is set, weekend dates are skipped the way a
/// gold fixing sheet would skip them.
PriceSeries synthetic_gbm_series(Asset asset, Date start, Date end, double initial_price,
                                 double daily_drift, double daily_vol, std::uint64_t seed,
                                 bool weekdays_only);

/// Deterministic sample series with bull/crash/sideways regime cycles,
/// shaped like the 2016-2021 crypto and gold markets: bitcoin quotes every
/// day and compounds through strong trending runs, gold quotes weekdays
/// only and drifts gently. Regime phase is anchored to the start date.
PriceSeries sample_market_series(Asset asset, Date start, Date end, std::uint64_t seed);

}  // namespace ctp::market_data
