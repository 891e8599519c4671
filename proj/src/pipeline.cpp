#include "roster/pipeline.hpp"

#include "roster/build_model.hpp"
#include "roster/errors.hpp"
#include "roster/instance_check.hpp"

#include <chrono>

namespace roster {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

nlohmann::json PipelineError::to_json() const {
    nlohmann::json j = {{"stage", stage_}, {"cause", cause_}, {"message", what()}};
    if (!detail_.is_null())
        j["detail"] = detail_;
    return j;
}

PipelineResult run_pipeline(const RosterInstance& inst, const SolveRequest& req) {
    const auto t0 = Clock::now();
    PipelineResult out;

    const auto findings = validate_instance(inst);
    if (count_errors(findings) > 0) {
        nlohmann::json detail = nlohmann::json::array();
        for (const auto& f : findings)
            if (f.severity == Severity::Error)
                detail.push_back({{"code", f.code}, {"message", f.message}});
        throw PipelineError("check", "invalid-instance", "instance has " + std::to_string(count_errors(findings)) + " error(s)",
                            detail);
    }
    try {
        out.der = derive_all(inst);
    } catch (const DegeneratePoolError& e) {
        throw PipelineError("derive", "degenerate-pool", e.what());
    } catch (const ConfigError& e) {
        throw PipelineError("derive", "config", e.what());
    }

    CanonicalModel model;
    try {
        model = build_model(inst, out.der, inst.weights);
    } catch (const BuildInfeasibleError& e) {
        throw PipelineError("build", "infeasible-manual-assignments", e.what(), e.clashes());
    } catch (const ConfigError& e) {
        throw PipelineError("build", "config", e.what());
    }
    out.statistics = model_statistics(model);
    out.build_seconds = seconds_since(t0);

    try {
        out.raw = solve(model, req);
    } catch (const SolverEnvironmentError& e) {
        throw PipelineError("solve", "solver-environment", e.what());
    } catch (const SolverProtocolError& e) {
        throw PipelineError("solve", "solver-protocol", e.what(), e.captured());
    } catch (const OracleSizeError& e) {
        throw PipelineError("solve", "oracle-size", e.what());
    } catch (const std::invalid_argument& e) {
        throw PipelineError("solve", "request", e.what());
    }
    if (!has_solution(out.raw.status))
        throw PipelineError("solve", to_string(out.raw.status), std::string("solver returned ") + to_string(out.raw.status));

    try {
        out.roster = extract_roster(out.raw, inst, out.der);
    } catch (const IntegralityError& e) {
        throw PipelineError("extract", "integrality", e.what());
    }
    out.hard_findings = validate_hard(out.roster, inst, out.der);
    out.soft = recount_soft(out.roster, inst, out.der, inst.weights);
    out.roster.solver.total_seconds = seconds_since(t0);
    out.report = quality_report(out.roster, inst, out.der, {out.raw.solver_seconds, out.roster.solver.total_seconds});
    return out;
}

ValidationResult validate_roster(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der) {
    return {validate_hard(roster, inst, der), recount_soft(roster, inst, der, inst.weights)};
}

nlohmann::json validation_to_json(const ValidationResult& v) {
    nlohmann::json hard = nlohmann::json::array();
    for (const auto& f : v.hard)
        hard.push_back(finding_to_json(f));
    nlohmann::json soft = nlohmann::json::array();
    for (const auto& f : v.soft.findings)
        soft.push_back(finding_to_json(f));
    return {{"hard", hard}, {"soft", soft}, {"objective", v.soft.objective}, {"components", v.soft.components}};
}

}  // namespace roster
