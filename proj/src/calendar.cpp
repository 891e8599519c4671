#include "roster/calendar.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace roster {

namespace {

int parse_digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view whole) {
    if (pos + n > s.size())
        throw std::invalid_argument("malformed value '" + std::string(whole) + "'");
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("malformed value '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

constexpr std::array<const char*, 7> kWeekdayNames{"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date");
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(iso) + "'");
    const int y = parse_digits(iso, 0, 4, iso);
    const int m = parse_digits(iso, 5, 2, iso);
    const int d = parse_digits(iso, 8, 2, iso);
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date '" + std::string(iso) + "'");
    return Date(std::chrono::sys_days{ymd});
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

int Date::year() const { return static_cast<int>(std::chrono::year_month_day{days_}.year()); }
unsigned Date::month() const { return static_cast<unsigned>(std::chrono::year_month_day{days_}.month()); }
unsigned Date::day() const { return static_cast<unsigned>(std::chrono::year_month_day{days_}.day()); }

int Date::weekday() const {
    // iso_encoding: Monday = 1 ... Sunday = 7
    return static_cast<int>(std::chrono::weekday{days_}.iso_encoding()) - 1;
}

unsigned days_in_month(int year, unsigned month) {
    using namespace std::chrono;
    return static_cast<unsigned>(year_month_day_last{std::chrono::year{year}, month_day_last{std::chrono::month{month}}}.day());
}

int parse_clock(std::string_view text) {
    std::string_view clock = text;
    int extra_days = 0;
    if (auto plus = text.find('+'); plus != std::string_view::npos) {
        clock = text.substr(0, plus);
        auto suffix = text.substr(plus + 1);
        if (suffix.empty())
            throw std::invalid_argument("malformed time '" + std::string(text) + "'");
        extra_days = parse_digits(suffix, 0, suffix.size(), text);
    }
    if (clock.size() != 5 || clock[2] != ':')
        throw std::invalid_argument("expected HH:MM, got '" + std::string(text) + "'");
    const int h = parse_digits(clock, 0, 2, text);
    const int m = parse_digits(clock, 3, 2, text);
    if (h > 24 || m > 59 || (h == 24 && m != 0))
        throw std::invalid_argument("time of day out of range '" + std::string(text) + "'");
    return extra_days * kMinutesPerDay + h * 60 + m;
}

std::string format_clock(int minutes) {
    const int days = minutes / kMinutesPerDay;
    const int rem = minutes % kMinutesPerDay;
    char buf[24];
    if (days > 0)
        std::snprintf(buf, sizeof buf, "%02d:%02d+%d", rem / 60, rem % 60, days);
    else
        std::snprintf(buf, sizeof buf, "%02d:%02d", rem / 60, rem % 60);
    return buf;
}

const char* weekday_name(int wd) { return kWeekdayNames.at(static_cast<std::size_t>(wd)); }

int parse_weekday(std::string_view name) {
    for (std::size_t i = 0; i < kWeekdayNames.size(); ++i)
        if (name == kWeekdayNames[i])
            return static_cast<int>(i);
    throw std::invalid_argument("unknown weekday '" + std::string(name) + "'");
}

}  // namespace roster
