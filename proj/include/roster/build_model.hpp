#pragma once

// Compiles an instance and its derived sets into a CanonicalModel. Only the
// constraint families triggered by the configuration are emitted.

#include "roster/canonical_model.hpp"
#include "roster/derive.hpp"
#include "roster/model.hpp"

#include <string>
#include <vector>

namespace roster {

/// Manual assignments that contradict a hard rule, one message each.
std::vector<std::string> find_build_clashes(const RosterInstance& inst, const DerivedSets& der);

/// True when the weekend families (attendance, caps, preferences) are emitted.
bool weekend_families_active(const RosterInstance& inst);

/// Throws BuildInfeasibleError when find_build_clashes is non-empty.
CanonicalModel build_model(const RosterInstance& inst, const DerivedSets& der, const WeightConfig& w);

/// Variable names used by the builder.
std::string x_name(const RosterInstance& inst, const DerivedSets& der, int p, int a);
std::string var_name(const std::string& base, const std::vector<std::string>& index);

/// Shift staffing bound used when no maximum is configured.
int effective_max_staff(const ShiftTemplate& t);

/// Month key "YYYY-MM".
std::string month_key(const Month& m);

}  // namespace roster
