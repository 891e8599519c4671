#pragma once

// Derived sets: the calendar, generated duty and shift instances, conflict
// pairs from rest rules, carryover exclusions, qualification filters,
// preference coefficients, block structure and pool targets. Everything the
// model builder and the validator need beyond the raw instance.

#include "roster/model.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace roster {

enum class ActivityKind { Duty, Shift };

/// A generated duty or shift occurrence. Times are absolute minutes from
/// midnight of the first planning day; `day` is 0-based and may be negative
/// for previous-period activities.
struct Activity {
    std::string id;
    std::string template_id;
    int template_index = -1;
    ActivityKind kind = ActivityKind::Duty;
    Date date;
    int day = 0;
    int start = 0;
    int end = 0;
    bool holiday = false;
    bool mandatory = false;
    bool operator==(const Activity&) const = default;
};

std::string instance_id(const std::string& template_id, const Date& date);

struct Weekend {
    Date saturday;
    std::vector<int> duties;    // D(w), duty indices
    std::optional<int> month;   // index into DerivedSets::months when the Saturday lies in the period
};

struct Month {
    int year = 0;
    unsigned month = 0;
    int saturdays_in_period = 0;
    int saturdays_total = 0;
    double we_factor = 0;
    std::vector<int> weekends;  // W(m)
    std::vector<int> duties;    // D(m)
};

/// Ordered pair (first before second) of activities in the unified index.
struct ConflictPair {
    int first = 0;
    int second = 0;
    bool operator==(const ConflictPair&) const = default;
};

struct SoftConflict {
    int first = 0;
    int second = 0;
    int level = 0;     // index of the tightest violated desired level
    int rest = 0;      // that level's rest duration in minutes
    double weight = 0; // penalty magnitude
    bool operator==(const SoftConflict&) const = default;
};

struct DerivedBlock {
    int definition = 0;
    BlockKind kind = BlockKind::Duty;
    std::vector<int> members;  // unified activity indices
    int start_day = 0;
    int end_day = 0;
    std::optional<int> prev;            // in-period predecessor block
    std::set<int> prev_physicians;      // P^prev(b) from a previous-period predecessor
    bool predecessor_in_previous_period = false;
    double consecutive_weight = 0;
};

struct DerivedPool {
    int definition = 0;
    std::vector<int> physicians;
    std::vector<int> duties;
    /// target_num per entry of `physicians`; empty unless fair_distribution.
    std::vector<double> targets;
    std::vector<int> attendance;
};

/// One preference as entered, resolved to the activities it covers.
struct ResolvedPreference {
    int physician = 0;
    PreferenceLevel level = PreferenceLevel::Indifferent;
    bool weekly = false;
    std::string label;
    std::vector<int> activities;
};

struct DerivedSets {
    int T = 0;
    std::vector<Date> days;
    std::vector<char> holiday;  // per day

    std::vector<Activity> activities;  // duties first, then shifts
    int num_duties = 0;
    int num_shifts = 0;
    std::map<std::string, int> activity_index;
    std::map<std::string, int> physician_index;

    std::vector<std::vector<int>> duties_on_day;   // D(t)
    std::vector<std::vector<int>> shifts_on_day;   // S(t), unified indices

    std::vector<Weekend> weekends;
    std::vector<Month> months;

    // Per physician, per activity.
    std::vector<std::vector<char>> quali;
    std::vector<std::vector<char>> quali_soft;
    std::vector<std::vector<char>> absent;  // per physician, per day
    std::vector<std::set<int>> impossible;
    std::vector<std::set<int>> manual;
    std::vector<std::vector<int>> manual_owners;  // per activity
    std::vector<std::set<int>> carry_hard;        // R^duty(p) and R^shift(p)
    std::vector<std::map<int, double>> carry_soft;
    std::vector<std::map<int, double>> preference_score;
    std::vector<ResolvedPreference> preferences;
    std::vector<int> past_weekends;

    std::vector<ConflictPair> conflicts;       // C
    std::vector<SoftConflict> soft_conflicts;  // C^soft

    std::vector<std::optional<int>> prev_duty;  // per duty
    std::vector<std::optional<int>> p_prev_pp;  // per duty

    std::vector<DerivedBlock> blocks;
    std::vector<std::vector<int>> block_cons;  // windows of block indices

    std::vector<DerivedPool> pools;

    bool is_duty(int a) const { return a < num_duties; }
    int num_activities() const { return static_cast<int>(activities.size()); }
    int num_physicians() const { return static_cast<int>(quali.size()); }
};

/// Duty and shift instances for the period, duties first.
std::vector<Activity> expand_instances(const RosterInstance& inst);

/// Weekends, months and weekend factors; D(w)/D(m) are filled by derive_all.
void compute_calendar(const PlanningPeriod& period, std::vector<Weekend>& weekends, std::vector<Month>& months);

struct ConflictSets {
    std::vector<ConflictPair> hard;
    std::vector<SoftConflict> soft;
};

/// Most specific rest rule from one template to another, or nullptr.
const RestRule* find_rest_rule(const std::vector<RestRule>& rules, const std::string& from, const std::string& to);

/// Orders two activities by the rest-rule convention: earlier start, then earlier end, then id.
bool precedes(const Activity& a, const Activity& b);

ConflictSets derive_conflicts(const std::vector<Activity>& activities, const std::vector<RestRule>& rules,
                              const WeightConfig& weights);

/// Weight of desired level `level` of `rule`.
double rest_level_weight(const RestRule& rule, int level, const WeightConfig& weights);

struct Qualified {
    bool hard = true;
    bool soft = true;
};
Qualified check_qualification(const QualificationRules& rules, const std::set<std::string>& quals);

/// target_num(p) = n * rate(p) * attend(p) / sum_q rate(q) * attend(q).
/// Throws DegeneratePoolError when the denominator vanishes for a non-empty pool.
std::vector<double> compute_target_numbers(int n, const std::vector<double>& rates, const std::vector<int>& attendance);

/// Calendar, instances, conflicts, carryover, qualification sets, preferences, blocks and pools.
DerivedSets derive_all(const RosterInstance& inst);

/// Deterministic dump for debugging.
nlohmann::json derived_to_json(const DerivedSets& der);

/// Duty indices selected by a pool selector.
std::vector<int> select_pool_duties(const DutySelector& sel, const DerivedSets& der);

}  // namespace roster
