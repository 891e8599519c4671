#pragma once

// Quality indicators of a roster: computation times, unassigned duties,
// understaffing, preference fulfillment, fairness, consecutive assignments,
// desired-rest violations and weekend tallies.

#include "roster/derive.hpp"
#include "roster/model.hpp"
#include "roster/roster.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace roster {

struct Timings {
    double solver_seconds = 0;
    double total_seconds = 0;
};

struct PreferenceStat {
    PreferenceLevel level = PreferenceLevel::Desired;
    bool weekly = false;
    int selected = 0;  // preferences entered at this level
    int assigned = 0;  // of those, how many were assigned
};

struct PoolStat {
    std::string pool;
    int duties = 0;
    int members = 0;
    bool fair = false;
    int below_floor = 0;  // physicians below floor(target)
    int above_ceil = 0;   // physicians above ceil(target)
    double max_deviation = 0;
    int desired_max_breaches = 0;
    int desired_min_breaches = 0;
};

struct WeekendTally {
    std::string physician;
    std::string month;
    int worked = 0;
};

struct QualityReport {
    std::string department;
    Date period_start;
    Date period_end;
    std::string status;
    Timings timings;
    double objective = 0;             // as reported with the roster
    double recomputed_objective = 0;  // recount from the assignments
    std::optional<double> bound;
    int hard_findings = 0;

    int duties_total = 0;
    int unassigned_duties = 0;
    int unassigned_mandatory = 0;
    std::vector<std::string> unassigned_list;

    int shifts_total = 0;
    int understaffed_shifts = 0;  // below the desired minimum
    int below_minimum_shifts = 0; // below the hard minimum

    std::vector<PreferenceStat> preferences;
    int weekend_preference_violations = 0;
    std::vector<PoolStat> pools;
    int consecutive_duty_pairs = 0;
    int consecutive_block_pairs = 0;
    std::map<int, int> desired_rest_by_level;  // rest hours -> violated pairs
    std::vector<WeekendTally> weekends;

    /// Flat name -> value view used for comparisons.
    std::map<std::string, double> indicators() const;
};

QualityReport quality_report(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                             const Timings& timings);

nlohmann::json report_to_json(const QualityReport& r);
QualityReport report_from_json(const nlohmann::json& j);
std::string encode_report(const QualityReport& r);
QualityReport decode_report(const std::string& text);

/// Fixed-width two-column table.
std::string render_report_table(const QualityReport& r);

struct IndicatorDelta {
    std::string indicator;
    double first = 0;
    double second = 0;
    double delta = 0;  // second - first
};

std::vector<IndicatorDelta> compare_reports(const QualityReport& a, const QualityReport& b);
std::string render_comparison(const std::vector<IndicatorDelta>& deltas);

}  // namespace roster
