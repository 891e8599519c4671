#include "roster/model.hpp"

namespace roster {

const char* to_string(PreferenceLevel level) {
    switch (level) {
    case PreferenceLevel::StronglyDesired: return "strongly-desired";
    case PreferenceLevel::Desired: return "desired";
    case PreferenceLevel::Indifferent: return "indifferent";
    case PreferenceLevel::Undesired: return "undesired";
    case PreferenceLevel::Impossible: return "impossible";
    }
    return "?";
}

const char* to_string(DayRule rule) {
    switch (rule) {
    case DayRule::ByWeekday: return "by-weekday";
    case DayRule::Also: return "also";
    case DayRule::Only: return "only";
    case DayRule::Never: return "never";
    }
    return "?";
}

const char* to_string(WeekendPreference pref) {
    switch (pref) {
    case WeekendPreference::None: return "none";
    case WeekendPreference::OneDuty: return "one-duty";
    case WeekendPreference::MultipleDuties: return "multiple-duties";
    }
    return "?";
}

const char* to_string(BlockKind kind) { return kind == BlockKind::Duty ? "duty" : "shift"; }

int week_index(const Date& period_start, const Date& d) {
    const Date monday0 = period_start - period_start.weekday();
    const int diff = d - monday0;
    return diff >= 0 ? diff / 7 : -((-diff + 6) / 7);
}

}  // namespace roster
