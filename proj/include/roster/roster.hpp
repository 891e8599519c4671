#pragma once

// Roster documents: who works which duty and shift instance, plus solver
// metadata. Extraction from a raw solution and JSON exchange.

#include "roster/derive.hpp"
#include "roster/model.hpp"
#include "roster/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace roster {

struct Assignment {
    std::string physician;
    std::string instance;
    bool operator==(const Assignment&) const = default;
};

struct SolverMeta {
    std::string status = "none";
    std::string backend;
    double objective = 0;
    std::optional<double> bound;
    double gap_target = 0;
    double solver_seconds = 0;
    double total_seconds = 0;
    bool operator==(const SolverMeta&) const = default;
};

struct RosterSolution {
    std::string department;
    Date period_start;
    Date period_end;
    std::vector<Assignment> assignments;  // physician order, then instance order
    std::vector<std::string> unassigned_duties;
    SolverMeta solver;
    bool operator==(const RosterSolution&) const = default;
};

/// Throws IntegralityError for a decision value farther than kIntegralityTol from 0 or 1.
RosterSolution extract_roster(const RawSolution& raw, const RosterInstance& inst, const DerivedSets& der);

/// Sorts assignments into canonical order and recomputes the unassigned duty list.
void normalize_roster(RosterSolution& r, const DerivedSets& der);

nlohmann::json roster_to_json(const RosterSolution& r);
RosterSolution roster_from_json(const nlohmann::json& j);
std::string encode_roster(const RosterSolution& r);
RosterSolution decode_roster(const std::string& text);

}  // namespace roster
