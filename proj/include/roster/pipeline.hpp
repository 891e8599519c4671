#pragma once

// End-to-end run: check, derive, build, solve, extract, validate, report.

#include "roster/canonical_model.hpp"
#include "roster/derive.hpp"
#include "roster/report.hpp"
#include "roster/roster.hpp"
#include "roster/solver.hpp"
#include "roster/validator.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace roster {

/// A failed stage with a machine-readable cause.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, std::string cause, const std::string& message, nlohmann::json detail = {})
        : std::runtime_error(message), stage_(std::move(stage)), cause_(std::move(cause)), detail_(std::move(detail)) {}
    const std::string& stage() const { return stage_; }
    const std::string& cause() const { return cause_; }
    const nlohmann::json& detail() const { return detail_; }
    nlohmann::json to_json() const;

private:
    std::string stage_;
    std::string cause_;
    nlohmann::json detail_;
};

struct PipelineResult {
    DerivedSets der;
    ModelStatistics statistics;
    RawSolution raw;
    RosterSolution roster;
    std::vector<ViolationFinding> hard_findings;
    SoftTally soft;
    QualityReport report;
    double build_seconds = 0;
};

/// Runs every stage; any failure is rethrown as PipelineError tagged with its stage.
PipelineResult run_pipeline(const RosterInstance& inst, const SolveRequest& req);

/// Validates a given roster against an instance: hard findings and soft recount.
struct ValidationResult {
    std::vector<ViolationFinding> hard;
    SoftTally soft;
};
ValidationResult validate_roster(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der);

nlohmann::json validation_to_json(const ValidationResult& v);

}  // namespace roster
