#include "roster/roster.hpp"

#include "roster/build_model.hpp"
#include "roster/errors.hpp"

#include <algorithm>
#include <cmath>

namespace roster {

RosterSolution extract_roster(const RawSolution& raw, const RosterInstance& inst, const DerivedSets& der) {
    if (!has_solution(raw.status))
        throw std::invalid_argument(std::string("no solution to extract (status ") + to_string(raw.status) + ")");
    RosterSolution r;
    r.department = inst.department;
    r.period_start = inst.period.start;
    r.period_end = inst.period.end;
    for (int p = 0; p < der.num_physicians(); ++p)
        for (int a = 0; a < der.num_activities(); ++a) {
            const std::string name = x_name(inst, der, p, a);
            const auto it = raw.values.find(name);
            const double v = it == raw.values.end() ? 0 : it->second;
            if (std::fabs(v - std::round(v)) > kIntegralityTol || v < -kIntegralityTol || v > 1 + kIntegralityTol)
                throw IntegralityError("variable " + name + " has non-binary value " + std::to_string(v));
            if (std::round(v) == 1)
                r.assignments.push_back({inst.physicians[static_cast<std::size_t>(p)].id,
                                         der.activities[static_cast<std::size_t>(a)].id});
        }
    normalize_roster(r, der);
    r.solver.status = to_string(raw.status);
    r.solver.backend = raw.backend;
    r.solver.objective = raw.objective;
    r.solver.bound = raw.bound;
    r.solver.gap_target = raw.gap_target;
    r.solver.solver_seconds = raw.solver_seconds;
    return r;
}

void normalize_roster(RosterSolution& r, const DerivedSets& der) {
    auto rank = [&](const Assignment& a) {
        const auto p = der.physician_index.find(a.physician);
        const auto i = der.activity_index.find(a.instance);
        if (p == der.physician_index.end())
            throw DocumentError("roster references unknown physician '" + a.physician + "'");
        if (i == der.activity_index.end())
            throw DocumentError("roster references unknown instance '" + a.instance + "'");
        return std::pair(p->second, i->second);
    };
    std::sort(r.assignments.begin(), r.assignments.end(),
              [&](const Assignment& x, const Assignment& y) { return rank(x) < rank(y); });
    r.assignments.erase(std::unique(r.assignments.begin(), r.assignments.end()), r.assignments.end());
    std::vector<char> covered(static_cast<std::size_t>(der.num_duties), 0);
    for (const auto& a : r.assignments) {
        const int i = rank(a).second;
        if (der.is_duty(i))
            covered[static_cast<std::size_t>(i)] = 1;
    }
    r.unassigned_duties.clear();
    for (int d = 0; d < der.num_duties; ++d)
        if (!covered[static_cast<std::size_t>(d)])
            r.unassigned_duties.push_back(der.activities[static_cast<std::size_t>(d)].id);
}

nlohmann::json roster_to_json(const RosterSolution& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "roster";
    j["department"] = r.department;
    j["period"] = {{"start", r.period_start.str()}, {"end", r.period_end.str()}};
    auto& as = j["assignments"] = nlohmann::json::array();
    for (const auto& a : r.assignments)
        as.push_back({{"physician", a.physician}, {"instance", a.instance}});
    j["unassigned_duties"] = r.unassigned_duties;
    nlohmann::json s{{"status", r.solver.status},
                     {"backend", r.solver.backend},
                     {"objective", r.solver.objective},
                     {"gap_target", r.solver.gap_target},
                     {"solver_seconds", r.solver.solver_seconds},
                     {"total_seconds", r.solver.total_seconds}};
    if (r.solver.bound)
        s["bound"] = *r.solver.bound;
    j["solver"] = s;
    return j;
}

RosterSolution roster_from_json(const nlohmann::json& j) {
    try {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
            throw DocumentError("schema-version mismatch");
        if (j.value("kind", std::string("roster")) != "roster")
            throw DocumentError("document is not a roster");
        RosterSolution r;
        r.department = j.value("department", std::string());
        r.period_start = Date::parse(j.at("period").at("start").get<std::string>());
        r.period_end = Date::parse(j.at("period").at("end").get<std::string>());
        for (const auto& a : j.at("assignments"))
            r.assignments.push_back({a.at("physician").get<std::string>(), a.at("instance").get<std::string>()});
        if (j.contains("unassigned_duties"))
            r.unassigned_duties = j.at("unassigned_duties").get<std::vector<std::string>>();
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            r.solver.status = s.value("status", std::string("none"));
            r.solver.backend = s.value("backend", std::string());
            r.solver.objective = s.value("objective", 0.0);
            if (s.contains("bound"))
                r.solver.bound = s.at("bound").get<double>();
            r.solver.gap_target = s.value("gap_target", 0.0);
            r.solver.solver_seconds = s.value("solver_seconds", 0.0);
            r.solver.total_seconds = s.value("total_seconds", 0.0);
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError(std::string("roster document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DocumentError(std::string("roster document: ") + e.what());
    }
}

std::string encode_roster(const RosterSolution& r) { return roster_to_json(r).dump(2) + "\n"; }

RosterSolution decode_roster(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError(std::string("roster document: ") + e.what());
    }
    return roster_from_json(j);
}

}  // namespace roster
