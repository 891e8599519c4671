#pragma once

#include "roster/model.hpp"

#include <string>
#include <vector>

namespace roster {

enum class Severity { Error, Warning };

struct Finding {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    bool operator==(const Finding&) const = default;
};

/// Checks every invariant of the instance and the per-department preference caps.
std::vector<Finding> validate_instance(const RosterInstance& inst);

std::size_t count_errors(const std::vector<Finding>& findings);

/// Effective limit of a cap for the period.
int cap_limit(const PreferenceCap& cap, const PlanningPeriod& period);

/// How many selections (or days) of `physician`'s preferences count toward `cap`.
int cap_usage(const PreferenceCap& cap, const PlanningPeriod& period, const std::vector<PreferenceRecord>& prefs,
              const std::string& physician);

/// Cap-breach findings for one physician's preferences.
std::vector<Finding> check_preference_caps(const RosterInstance& inst, const std::string& physician);

}  // namespace roster
