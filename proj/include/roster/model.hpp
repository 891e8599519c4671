#pragma once

// Domain types for the roster problem: planning period, physicians, duty and
// shift templates, blocks, rest rules, pools, preferences, weekend policy,
// carryover from the previous period and objective weights. Pure data; the
// only behavior lives in instance_check.hpp (invariant checks) and
// instance_io.hpp (document exchange).

#include "roster/calendar.hpp"

#include <bitset>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace roster {

inline constexpr int kSchemaVersion = 1;

/// Bit i set = weekday i (0 = Monday).
using WeekdaySet = std::bitset<7>;

/// How holidays (or days before holidays) affect whether a template occurs.
enum class DayRule {
    ByWeekday,  // the day is treated like any other day of its weekday
    Also,       // occurs on such days in addition to its weekdays
    Only,       // occurs only on such days
    Never,      // never occurs on such days
};

/// Working time relative to midnight of the day the activity starts. end may exceed 24:00.
struct TimeSpan {
    int start = 0;
    int end = 0;
    bool operator==(const TimeSpan&) const = default;
};

struct PlanningPeriod {
    Date start;
    Date end;
    std::set<Date> public_holidays;
    int weekend_threshold = 21 * 60;
    bool operator==(const PlanningPeriod&) const = default;

    int length() const { return end - start + 1; }
    bool contains(const Date& d) const { return start <= d && d <= end; }
};

struct Qualification {
    std::string id;
    std::string label;
    bool operator==(const Qualification&) const = default;
};

enum class WeekendPreference { None, OneDuty, MultipleDuties };

struct Physician {
    std::string id;
    std::string name;
    double employment_rate = 1.0;
    std::set<std::string> qualifications;
    std::set<Date> absences;
    bool planned_manually = false;
    WeekendPreference weekend_preference = WeekendPreference::None;
    bool operator==(const Physician&) const = default;
};

struct QualificationRules {
    std::set<std::string> required;
    std::set<std::string> excluded;
    std::set<std::string> desired;
    std::set<std::string> undesired;
    bool operator==(const QualificationRules&) const = default;
};

struct DutyTemplate {
    std::string id;
    std::string label;
    WeekdaySet weekdays;
    DayRule holiday_rule = DayRule::ByWeekday;
    DayRule pre_holiday_rule = DayRule::ByWeekday;
    TimeSpan time;
    /// Alternate working time on holidays and on the days right before or after one.
    std::optional<TimeSpan> holiday_time;
    bool mandatory = true;
    bool forbidden_before_absence = false;
    bool forbidden_after_absence = false;
    /// Prefer the same physician on consecutive occurrences.
    bool desire_consecutive = false;
    QualificationRules quals;
    bool operator==(const DutyTemplate&) const = default;
};

struct ShiftTemplate {
    std::string id;
    std::string label;
    std::set<std::string> ward_members;
    WeekdaySet weekdays;
    DayRule holiday_rule = DayRule::ByWeekday;
    DayRule pre_holiday_rule = DayRule::ByWeekday;
    TimeSpan time;
    int min_staff = 0;
    int desired_min_staff = 0;
    /// Unset means "no upper bound" (effectively the ward size).
    std::optional<int> max_staff;
    /// Reward per physician between min and desired minimum; falls back to WeightConfig.
    std::optional<double> desired_weight;
    QualificationRules quals;
    bool operator==(const ShiftTemplate&) const = default;
};

/// Pre-assignment of a generated instance ("<template>@<YYYY-MM-DD>") to a physician.
struct ManualAssignment {
    std::string instance;
    std::string physician;
    bool operator==(const ManualAssignment&) const = default;
};

enum class BlockKind { Duty, Shift };

struct BlockDefinition {
    std::string id;
    BlockKind kind = BlockKind::Duty;
    std::vector<std::string> members;
    bool allow_extra_duties_inside = true;
    bool allow_extra_shifts_inside = true;
    int free_days_after = 0;
    /// A block of this period or a block listed in CarryoverState::blocks.
    std::optional<std::string> consecutive_predecessor;
    std::optional<double> consecutive_weight;
    std::optional<int> max_consecutive_run;
    bool operator==(const BlockDefinition&) const = default;
};

struct RestLevel {
    int rest = 0;  // minutes
    std::optional<double> weight;
    bool operator==(const RestLevel&) const = default;
};

/// Rest requirement after an activity of template `from` before one of template `to`.
/// Either side may be "*" (any template); the most specific rule wins.
struct RestRule {
    std::string from;
    std::string to;
    int mandatory_rest = 0;  // minutes; negative permits that much overlap
    std::vector<RestLevel> desired_levels;
    bool operator==(const RestRule&) const = default;
};

enum class HolidayFilter { Any, Only, Exclude };

/// Selects duty instances by template, weekday and holiday status, plus explicit ids.
struct DutySelector {
    std::vector<std::string> templates;
    WeekdaySet weekdays = WeekdaySet{}.set();
    HolidayFilter holidays = HolidayFilter::Any;
    std::vector<std::string> instances;
    bool operator==(const DutySelector&) const = default;
};

struct Pool {
    std::string id;
    std::string label;
    std::set<std::string> physicians;
    DutySelector duties;
    std::optional<int> exact_count;
    std::optional<int> min_duties;
    std::optional<int> desired_min_duties;
    std::optional<int> max_duties;
    std::optional<int> desired_max_duties;
    std::optional<int> max_phy;
    std::optional<int> desired_max_phy;
    bool fair_distribution = false;
    std::optional<double> fairness_penalty_down;
    std::optional<double> fairness_penalty_up;
    std::optional<double> desired_min_weight;
    std::optional<double> desired_max_weight;
    std::optional<double> desired_max_phy_weight;
    bool operator==(const Pool&) const = default;
};

enum class PreferenceLevel { StronglyDesired, Desired, Indifferent, Undesired, Impossible };

/// Named group of templates within a week, used for weekly preferences.
struct WeeklySet {
    std::string id;
    std::string label;
    std::set<std::string> templates;
    WeekdaySet weekdays = WeekdaySet{}.set();
    bool operator==(const WeeklySet&) const = default;
};

enum class PreferenceTarget { Instance, Weekly };

struct PreferenceRecord {
    std::string physician;
    PreferenceTarget target = PreferenceTarget::Instance;
    std::string instance;    // for PreferenceTarget::Instance
    std::string weekly_set;  // for PreferenceTarget::Weekly
    int week = 0;            // 0 = the Monday-based week containing the period start
    PreferenceLevel level = PreferenceLevel::Indifferent;
    bool operator==(const PreferenceRecord&) const = default;
};

enum class CapUnit { Selections, Days };
enum class CapScope { AllDays, WeekendsAndHolidays };

/// Upper bound on how often a physician may pick one preference level.
struct PreferenceCap {
    PreferenceLevel level = PreferenceLevel::Undesired;
    PreferenceTarget target = PreferenceTarget::Instance;
    CapUnit unit = CapUnit::Selections;
    CapScope scope = CapScope::AllDays;
    std::optional<int> max;
    /// Alternative bound as a fraction of the days in scope (rounded down).
    std::optional<double> max_fraction_of_days;
    bool operator==(const PreferenceCap&) const = default;
};

struct WeekendPolicy {
    std::optional<int> max_we;
    std::optional<int> des_max_we;
    std::optional<int> min_free_we;
    std::optional<int> des_min_free_we;
    std::optional<int> cons_we;
    std::optional<double> preference_violation_weight;
    std::optional<double> des_max_we_weight;
    std::optional<double> des_min_free_we_weight;
    bool operator==(const WeekendPolicy&) const = default;
};

struct CarryoverAssignment {
    std::string physician;
    std::string template_id;
    Date date;
    bool operator==(const CarryoverAssignment&) const = default;
};

struct PreviousBlock {
    std::string id;
    BlockKind kind = BlockKind::Duty;
    std::set<std::string> physicians;
    Date end_date;
    int free_days_after = 0;
    bool operator==(const PreviousBlock&) const = default;
};

struct CarryoverState {
    std::vector<CarryoverAssignment> assignments;
    std::map<std::string, int> past_weekends;
    std::vector<PreviousBlock> blocks;
    bool operator==(const CarryoverState&) const = default;
};

/// Objective coefficient magnitudes. Rewards enter the maximized objective
/// positively, penalties negatively; the sign is applied by the model builder.
struct WeightConfig {
    double duty_coverage = 1000;          // non-mandatory duty assigned
    double shift_desired_staffing = 200;  // per physician between min and desired minimum
    double shift_above_desired = 0;       // per physician above the desired minimum
    double duty_soft_qualification = 10;
    double shift_soft_qualification = 10;
    double pool_max = 50;
    double pool_min = 50;
    double pool_max_phy = 50;
    double fair_down = 50;
    double fair_up = 50;
    double max_weekends = 50;
    double free_weekends = 50;
    double weekend_preference = 10;
    double strongly_desired = 20;
    double desired = 10;
    double undesired = 10;
    double max_consecutive_blocks = 10;
    double block_consecutive = 1;
    double duty_consecutive = 1;
    /// Default penalty per desired rest level, most important first.
    std::vector<double> rest_levels{4, 2, 1};
    bool operator==(const WeightConfig&) const = default;
};

struct RosterInstance {
    int schema_version = kSchemaVersion;
    std::string department;
    PlanningPeriod period;
    std::vector<Qualification> qualifications;
    std::vector<Physician> physicians;
    std::vector<DutyTemplate> duty_templates;
    std::vector<ShiftTemplate> shift_templates;
    std::vector<ManualAssignment> manual_assignments;
    std::vector<BlockDefinition> blocks;
    std::vector<RestRule> rest_rules;
    std::vector<Pool> pools;
    std::vector<WeeklySet> weekly_sets;
    std::vector<PreferenceRecord> preferences;
    std::vector<PreferenceCap> preference_caps;
    WeekendPolicy weekend_policy;
    CarryoverState carryover;
    WeightConfig weights;
    bool operator==(const RosterInstance&) const = default;
};

const char* to_string(PreferenceLevel level);
const char* to_string(DayRule rule);
const char* to_string(WeekendPreference pref);
const char* to_string(BlockKind kind);

/// Index of the Monday-based week containing `d`, counted from the week of `period_start`.
int week_index(const Date& period_start, const Date& d);

}  // namespace roster
