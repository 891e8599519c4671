#pragma once

// Solving a CanonicalModel: an external MILP solver through MPS and solution
// files, or the exhaustive oracle for tiny models.

#include "roster/canonical_model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace roster {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeoutNoSolution };
const char* to_string(SolveStatus s);
SolveStatus parse_solve_status(const std::string& s);
bool has_solution(SolveStatus s);

enum class Backend { External, Oracle };

enum class SolverKind { Cbc, Highs };

struct SolverConfig {
    std::string path;
    SolverKind kind = SolverKind::Cbc;
    std::vector<std::string> extra_flags;
};

/// ROSTER_SOLVER (path), ROSTER_SOLVER_KIND (cbc|highs) and ROSTER_SOLVER_FLAGS
/// (space separated), falling back to the solver found at build time.
SolverConfig solver_config_from_env();

struct SolveRequest {
    double gap = 0.03;
    double time_limit = 600;  // seconds
    Backend backend = Backend::External;
    std::optional<SolverConfig> solver;
    /// Directory for the exchanged files; a fresh temporary one (removed afterwards) when empty.
    std::string work_dir;
};

inline constexpr double kIntegralityTol = 1e-6;

struct RawSolution {
    SolveStatus status = SolveStatus::TimeoutNoSolution;
    std::map<std::string, double> values;
    double objective = 0;             // recomputed from the values
    std::optional<double> reported_objective;
    std::optional<double> bound;      // proven upper bound when the solver reports one
    double gap_target = 0;
    double solver_seconds = 0;
    std::string backend;
    std::string log;
};

/// Throws std::invalid_argument when gap or limit are out of range.
void check_request(const SolveRequest& req);

RawSolution invoke_external(const CanonicalModel& model, const SolveRequest& req);

/// Dispatches on req.backend.
RawSolution solve(const CanonicalModel& model, const SolveRequest& req);

/// Rounds integer variables within kIntegralityTol and recomputes the objective.
void finalize_solution(const CanonicalModel& model, RawSolution& raw);

/// Parsers for the solution files, exposed for tests. Values use the names in the file.
struct SolutionFile {
    SolveStatus status = SolveStatus::TimeoutNoSolution;
    std::optional<double> objective;
    std::map<std::string, double> values;
};
SolutionFile parse_cbc_solution(const std::string& text);
SolutionFile parse_highs_solution(const std::string& text);

}  // namespace roster
