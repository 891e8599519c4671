#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace roster {

/// Calendar day. Wraps std::chrono::sys_days so day arithmetic is plain integer math.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int y, unsigned m, unsigned d);

    static Date parse(std::string_view iso);  // YYYY-MM-DD, throws std::invalid_argument
    std::string str() const;

    int year() const;
    unsigned month() const;
    unsigned day() const;
    /// 0 = Monday ... 6 = Sunday.
    int weekday() const;
    bool is_weekend() const { return weekday() >= 5; }

    Date operator+(int n) const { return Date(days_ + std::chrono::days(n)); }
    Date operator-(int n) const { return Date(days_ - std::chrono::days(n)); }
    int operator-(const Date& o) const { return static_cast<int>((days_ - o.days_).count()); }

    auto operator<=>(const Date&) const = default;
    bool operator==(const Date&) const = default;

    std::int64_t serial() const { return days_.time_since_epoch().count(); }

private:
    std::chrono::sys_days days_{};
};

/// Number of days in the given month.
unsigned days_in_month(int year, unsigned month);

inline constexpr int kMinutesPerDay = 24 * 60;

/// Parses "HH:MM" into minutes after midnight. A trailing "+1" adds one day ("08:00+1").
int parse_clock(std::string_view text);
std::string format_clock(int minutes);

const char* weekday_name(int wd);
int parse_weekday(std::string_view name);

}  // namespace roster
