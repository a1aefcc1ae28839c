#pragma once

#include <string>

namespace ctp::dates {

/// Calendar day stored as a serial day number (days since 1970-01-01).
/// No time component, no timezone; arithmetic is plain integer math.
struct Date {
    int serial = 0;

    constexpr auto operator<=>(const Date&) const = default;

    Date operator+(int days) const { return Date{serial + days}; }
    Date operator-(int days) const { return Date{serial - days}; }
    int operator-(Date other) const { return serial - other.serial; }
    Date& operator++() { ++serial; return *this; }
};

/// Builds a Date from civil year/month/day. Throws std::invalid_argument
/// if the triple is not a real Gregorian calendar day.
Date make_date(int year, int month, int day);

/// Parses "YYYY-MM-DD" or "M/D/YY" (also "M/D/YYYY"); two-digit years map
/// to 2000-2099. Throws std::invalid_argument on anything else.
Date parse_date(const std::string& text);

/// ISO "YYYY-MM-DD".
std::string to_string(Date d);

void civil_from_serial(Date d, int& year, int& month, int& day);

/// 0 = Sunday ... 6 = Saturday.
int weekday(Date d);

bool is_weekend(Date d);

}  // namespace ctp::dates
