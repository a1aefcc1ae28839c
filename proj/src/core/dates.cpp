#include "dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace ctp::dates {

namespace {

// Days-from-civil algorithm (Howard Hinnant's public-domain formulation).
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

void civil_from_days(long long z, int& y, int& m, int& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long yy = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool parse_int(const char* begin, const char* end, int& out) {
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

Date make_date(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1 || day > 31)
        throw std::invalid_argument("invalid calendar day");
    Date d{static_cast<int>(days_from_civil(year, month, day))};
    int y2, m2, d2;
    civil_from_serial(d, y2, m2, d2);
    if (y2 != year || m2 != month || d2 != day)
        throw std::invalid_argument("invalid calendar day");
    return d;
}

Date parse_date(const std::string& text) {
    const char* b = text.data();
    const char* e = b + text.size();
    int a = 0, m = 0, d = 0;
    if (text.find('/') != std::string::npos) {
        // M/D/YY or M/D/YYYY
        size_t s1 = text.find('/');
        size_t s2 = text.find('/', s1 + 1);
        if (s2 == std::string::npos)
            throw std::invalid_argument("unparseable date: " + text);
        if (!parse_int(b, b + s1, a) || !parse_int(b + s1 + 1, b + s2, m) ||
            !parse_int(b + s2 + 1, e, d))
            throw std::invalid_argument("unparseable date: " + text);
        int year = d;
        if (year < 100) year += 2000;
        return make_date(year, a, m);
    }
    // YYYY-MM-DD
    size_t s1 = text.find('-');
    size_t s2 = (s1 == std::string::npos) ? std::string::npos : text.find('-', s1 + 1);
    if (s1 == std::string::npos || s2 == std::string::npos)
        throw std::invalid_argument("unparseable date: " + text);
    if (!parse_int(b, b + s1, a) || !parse_int(b + s1 + 1, b + s2, m) ||
        !parse_int(b + s2 + 1, e, d))
        throw std::invalid_argument("unparseable date: " + text);
    return make_date(a, m, d);
}

std::string to_string(Date d) {
    int y, m, dd;
    civil_from_serial(d, y, m, dd);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, dd);
    return buf;
}

void civil_from_serial(Date d, int& year, int& month, int& day) {
    civil_from_days(d.serial, year, month, day);
}

int weekday(Date d) {
    // 1970-01-01 was a Thursday.
    int w = (d.serial + 4) % 7;
    return w < 0 ? w + 7 : w;
}

bool is_weekend(Date d) {
    int w = weekday(d);
    return w == 0 || w == 6;
}

}  // namespace ctp::dates
