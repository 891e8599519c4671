#pragma once

// Checks a roster against every hard rule and recounts every soft quantity
// directly from the assignments. Uses the instance and its derived sets only;
// nothing here reads the optimization model.

#include "roster/derive.hpp"
#include "roster/model.hpp"
#include "roster/roster.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace roster {

enum class FindingSeverity { Hard, Soft };

struct ViolationFinding {
    std::string family;
    std::vector<std::string> subjects;
    FindingSeverity severity = FindingSeverity::Hard;
    double magnitude = 1;
    std::string message;
};

nlohmann::json finding_to_json(const ViolationFinding& f);

/// Roster assignments as index sets. Throws DocumentError for unknown ids.
struct AssignmentIndex {
    std::vector<std::vector<char>> has;        // [physician][activity]
    std::vector<std::vector<int>> by_physician;
    std::vector<std::vector<int>> owners;      // per activity
    bool at(int p, int a) const { return has[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)] != 0; }
};
AssignmentIndex index_roster(const RosterSolution& roster, const DerivedSets& der);

std::vector<ViolationFinding> validate_hard(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der);

struct StaffingCount {
    std::string shift;
    int assigned = 0;
    int min = 0;
    int desired = 0;
    int max = 0;
};

struct SoftTally {
    double objective = 0;
    /// Objective contribution per component (assignment, staffing, rest, ...).
    std::map<std::string, double> components;
    std::vector<StaffingCount> staffing;
    int unassigned_duties = 0;
    int soft_qualification_hits = 0;
    int carryover_rest_hits = 0;
    std::map<int, int> desired_rest_by_level;  // rest in minutes -> violated pairs
    int consecutive_duty_pairs = 0;
    int consecutive_block_pairs = 0;
    int max_consecutive_block_violations = 0;
    int pool_max_excess = 0;
    int pool_min_shortfall = 0;
    int pool_max_phy_excess = 0;
    int fair_below = 0;  // total shortfall below floor(target)
    int fair_above = 0;  // total excess above ceil(target)
    int weekend_preference_violations = 0;
    int max_weekend_excess = 0;
    int free_weekend_shortfall = 0;
    std::vector<ViolationFinding> findings;
};

SoftTally recount_soft(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                       const WeightConfig& w);

/// Effective shift maximum when none is configured.
int shift_max_staff(const ShiftTemplate& t);

/// Weekend attendance per physician and weekend index.
std::vector<std::vector<char>> weekend_attendance(const AssignmentIndex& ix, const DerivedSets& der);

}  // namespace roster
