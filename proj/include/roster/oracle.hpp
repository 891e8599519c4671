#pragma once

// Exact optimum of a small CanonicalModel by enumeration. Forced variables are
// fixed first; the remaining decision binaries are enumerated depth first and
// auxiliary variables are derived from their defining rows.

#include "roster/canonical_model.hpp"
#include "roster/solver.hpp"

namespace roster {

inline constexpr int kOracleMaxFree = 24;

/// Decision variables left free after fixing forced ones.
int oracle_free_decisions(const CanonicalModel& model);

/// Throws OracleSizeError when more than `max_free` decision variables remain free.
RawSolution exhaustive_oracle(const CanonicalModel& model, int max_free = kOracleMaxFree);

}  // namespace roster
