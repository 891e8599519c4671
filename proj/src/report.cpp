#include "roster/report.hpp"

#include "roster/errors.hpp"
#include "roster/instance_io.hpp"
#include "roster/rounding.hpp"
#include "roster/validator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace roster {

namespace {

const char* pref_key(PreferenceLevel l) { return to_string(l); }

std::string num(double v) {
    char buf[64];
    if (v == std::floor(v) && std::fabs(v) < 1e15)
        std::snprintf(buf, sizeof buf, "%.0f", v);
    else
        std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string month_of(const Month& m) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", m.year, m.month);
    return buf;
}

}  // namespace

std::map<std::string, double> QualityReport::indicators() const {
    std::map<std::string, double> m;
    m["solver_seconds"] = timings.solver_seconds;
    m["total_seconds"] = timings.total_seconds;
    m["objective"] = objective;
    m["recomputed_objective"] = recomputed_objective;
    m["hard_findings"] = hard_findings;
    m["duties"] = duties_total;
    m["unassigned_duties"] = unassigned_duties;
    m["unassigned_mandatory_duties"] = unassigned_mandatory;
    m["shifts"] = shifts_total;
    m["understaffed_shifts"] = understaffed_shifts;
    m["below_minimum_shifts"] = below_minimum_shifts;
    for (const auto& p : preferences) {
        const std::string k = std::string(p.weekly ? "weekly_" : "duty_") + pref_key(p.level);
        m[k + "_selected"] = p.selected;
        m[k + "_assigned"] = p.assigned;
    }
    m["weekend_preference_violations"] = weekend_preference_violations;
    for (const auto& p : pools) {
        m["pool_" + p.pool + "_below_floor"] = p.below_floor;
        m["pool_" + p.pool + "_above_ceil"] = p.above_ceil;
        m["pool_" + p.pool + "_desired_max_breaches"] = p.desired_max_breaches;
        m["pool_" + p.pool + "_desired_min_breaches"] = p.desired_min_breaches;
    }
    m["consecutive_duty_pairs"] = consecutive_duty_pairs;
    m["consecutive_block_pairs"] = consecutive_block_pairs;
    int rest_total = 0;
    for (const auto& [h, n] : desired_rest_by_level) {
        m["desired_rest_" + std::to_string(h) + "h"] = n;
        rest_total += n;
    }
    m["desired_rest_violations"] = rest_total;
    int worked = 0;
    for (const auto& w : weekends)
        worked += w.worked;
    m["worked_weekends"] = worked;
    return m;
}

QualityReport quality_report(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                             const Timings& timings) {
    QualityReport r;
    r.department = inst.department;
    r.period_start = inst.period.start;
    r.period_end = inst.period.end;
    r.status = roster.solver.status;
    r.timings = timings;
    r.objective = roster.solver.objective;
    r.bound = roster.solver.bound;
    r.hard_findings = static_cast<int>(validate_hard(roster, inst, der).size());
    const SoftTally tally = recount_soft(roster, inst, der, inst.weights);
    r.recomputed_objective = tally.objective;

    const AssignmentIndex ix = index_roster(roster, der);
    r.duties_total = der.num_duties;
    for (int d = 0; d < der.num_duties; ++d)
        if (ix.owners[static_cast<std::size_t>(d)].empty()) {
            ++r.unassigned_duties;
            r.unassigned_list.push_back(der.activities[static_cast<std::size_t>(d)].id);
            if (der.activities[static_cast<std::size_t>(d)].mandatory)
                ++r.unassigned_mandatory;
        }
    r.shifts_total = der.num_shifts;
    for (const auto& s : tally.staffing) {
        if (s.assigned < s.desired)
            ++r.understaffed_shifts;
        if (s.assigned < s.min)
            ++r.below_minimum_shifts;
    }

    std::map<std::pair<bool, PreferenceLevel>, PreferenceStat> prefs;
    for (bool weekly : {false, true})
        for (auto l : {PreferenceLevel::StronglyDesired, PreferenceLevel::Desired, PreferenceLevel::Undesired,
                       PreferenceLevel::Impossible}) {
            if (weekly && l == PreferenceLevel::Impossible)
                continue;
            prefs[{weekly, l}] = PreferenceStat{l, weekly, 0, 0};
        }
    for (const auto& p : der.preferences) {
        auto it = prefs.find({p.weekly, p.level});
        if (it == prefs.end())
            continue;
        ++it->second.selected;
        const bool hit = std::any_of(p.activities.begin(), p.activities.end(), [&](int a) { return ix.at(p.physician, a); });
        if (hit)
            ++it->second.assigned;
    }
    for (const auto& [k, v] : prefs)
        r.preferences.push_back(v);
    r.weekend_preference_violations = tally.weekend_preference_violations;

    for (const auto& pool : der.pools) {
        const auto& def = inst.pools[static_cast<std::size_t>(pool.definition)];
        PoolStat s;
        s.pool = def.id;
        s.duties = static_cast<int>(pool.duties.size());
        s.members = static_cast<int>(pool.physicians.size());
        s.fair = def.fair_distribution;
        for (std::size_t k = 0; k < pool.physicians.size(); ++k) {
            int n = 0;
            for (int d : pool.duties)
                n += ix.at(pool.physicians[k], d);
            if (def.fair_distribution) {
                const double t = pool.targets[k];
                if (n < floor_tol(t))
                    ++s.below_floor;
                if (n > ceil_tol(t))
                    ++s.above_ceil;
                s.max_deviation = std::max(s.max_deviation, std::fabs(n - t));
            }
            if (def.desired_max_duties && n > *def.desired_max_duties)
                ++s.desired_max_breaches;
            if (def.desired_min_duties && n < *def.desired_min_duties)
                ++s.desired_min_breaches;
        }
        r.pools.push_back(s);
    }
    r.consecutive_duty_pairs = tally.consecutive_duty_pairs;
    r.consecutive_block_pairs = tally.consecutive_block_pairs;
    for (const auto& [rest, n] : tally.desired_rest_by_level)
        r.desired_rest_by_level[rest / 60] += n;

    const auto att = weekend_attendance(ix, der);
    for (int p = 0; p < der.num_physicians(); ++p)
        for (const auto& m : der.months) {
            int n = 0;
            for (int w : m.weekends)
                n += att[static_cast<std::size_t>(p)][static_cast<std::size_t>(w)];
            r.weekends.push_back({inst.physicians[static_cast<std::size_t>(p)].id, month_of(m), n});
        }
    return r;
}

nlohmann::json report_to_json(const QualityReport& r) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "report";
    j["department"] = r.department;
    j["period"] = {{"start", r.period_start.str()}, {"end", r.period_end.str()}};
    j["status"] = r.status;
    j["timings"] = {{"solver_seconds", r.timings.solver_seconds}, {"total_seconds", r.timings.total_seconds}};
    j["objective"] = r.objective;
    j["recomputed_objective"] = r.recomputed_objective;
    if (r.bound)
        j["bound"] = *r.bound;
    j["hard_findings"] = r.hard_findings;
    j["duties"] = {{"total", r.duties_total},
                   {"unassigned", r.unassigned_duties},
                   {"unassigned_mandatory", r.unassigned_mandatory},
                   {"unassigned_list", r.unassigned_list}};
    j["shifts"] = {{"total", r.shifts_total}, {"understaffed", r.understaffed_shifts}, {"below_minimum", r.below_minimum_shifts}};
    auto& prefs = j["preferences"] = nlohmann::json::array();
    for (const auto& p : r.preferences)
        prefs.push_back({{"level", to_string(p.level)},
                         {"target", p.weekly ? "weekly" : "instance"},
                         {"selected", p.selected},
                         {"assigned", p.assigned}});
    j["weekend_preference_violations"] = r.weekend_preference_violations;
    auto& pools = j["pools"] = nlohmann::json::array();
    for (const auto& p : r.pools)
        pools.push_back({{"pool", p.pool},
                         {"duties", p.duties},
                         {"members", p.members},
                         {"fair", p.fair},
                         {"below_floor", p.below_floor},
                         {"above_ceil", p.above_ceil},
                         {"max_deviation", p.max_deviation},
                         {"desired_max_breaches", p.desired_max_breaches},
                         {"desired_min_breaches", p.desired_min_breaches}});
    j["consecutive"] = {{"duty_pairs", r.consecutive_duty_pairs}, {"block_pairs", r.consecutive_block_pairs}};
    auto& rest = j["desired_rest"] = nlohmann::json::array();
    for (const auto& [h, n] : r.desired_rest_by_level)
        rest.push_back({{"rest_hours", h}, {"violations", n}});
    auto& we = j["weekends"] = nlohmann::json::array();
    for (const auto& w : r.weekends)
        we.push_back({{"physician", w.physician}, {"month", w.month}, {"worked", w.worked}});
    return j;
}

QualityReport report_from_json(const nlohmann::json& j) {
    try {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
            throw DocumentError("schema-version mismatch");
        if (j.value("kind", std::string()) != "report")
            throw DocumentError("document is not a report");
        QualityReport r;
        r.department = j.value("department", std::string());
        r.period_start = Date::parse(j.at("period").at("start").get<std::string>());
        r.period_end = Date::parse(j.at("period").at("end").get<std::string>());
        r.status = j.value("status", std::string());
        r.timings.solver_seconds = j.at("timings").value("solver_seconds", 0.0);
        r.timings.total_seconds = j.at("timings").value("total_seconds", 0.0);
        r.objective = j.value("objective", 0.0);
        r.recomputed_objective = j.value("recomputed_objective", 0.0);
        if (j.contains("bound"))
            r.bound = j.at("bound").get<double>();
        r.hard_findings = j.value("hard_findings", 0);
        const auto& d = j.at("duties");
        r.duties_total = d.at("total");
        r.unassigned_duties = d.at("unassigned");
        r.unassigned_mandatory = d.at("unassigned_mandatory");
        r.unassigned_list = d.at("unassigned_list").get<std::vector<std::string>>();
        const auto& s = j.at("shifts");
        r.shifts_total = s.at("total");
        r.understaffed_shifts = s.at("understaffed");
        r.below_minimum_shifts = s.at("below_minimum");
        for (const auto& p : j.at("preferences"))
            r.preferences.push_back({parse_preference_level(p.at("level").get<std::string>()),
                                     p.at("target").get<std::string>() == "weekly", p.at("selected"), p.at("assigned")});
        r.weekend_preference_violations = j.value("weekend_preference_violations", 0);
        for (const auto& p : j.at("pools"))
            r.pools.push_back({p.at("pool"), p.at("duties"), p.at("members"), p.at("fair"), p.at("below_floor"),
                               p.at("above_ceil"), p.at("max_deviation"), p.at("desired_max_breaches"),
                               p.at("desired_min_breaches")});
        r.consecutive_duty_pairs = j.at("consecutive").at("duty_pairs");
        r.consecutive_block_pairs = j.at("consecutive").at("block_pairs");
        for (const auto& x : j.at("desired_rest"))
            r.desired_rest_by_level[x.at("rest_hours").get<int>()] = x.at("violations");
        for (const auto& w : j.at("weekends"))
            r.weekends.push_back({w.at("physician"), w.at("month"), w.at("worked")});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError(std::string("report document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DocumentError(std::string("report document: ") + e.what());
    }
}

std::string encode_report(const QualityReport& r) { return report_to_json(r).dump(2) + "\n"; }

QualityReport decode_report(const std::string& text) {
    try {
        return report_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw DocumentError(std::string("report document: ") + e.what());
    }
}

namespace {

void table_row(std::string& out, const std::string& label, const std::string& value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-44s %14s\n", label.c_str(), value.c_str());
    out += buf;
}

const char* level_label(PreferenceLevel l) {
    switch (l) {
        case PreferenceLevel::StronglyDesired: return "strongly desired";
        case PreferenceLevel::Desired: return "desired";
        case PreferenceLevel::Undesired: return "undesired";
        case PreferenceLevel::Impossible: return "impossible";
        default: return "indifferent";
    }
}

}  // namespace

std::string render_report_table(const QualityReport& r) {
    std::string out;
    out += r.department + "  " + r.period_start.str() + " .. " + r.period_end.str() + "\n";
    out += std::string(59, '-') + "\n";
    table_row(out, "Solver status", r.status);
    table_row(out, "Solver computation time (s)", num(std::round(r.timings.solver_seconds * 10) / 10));
    table_row(out, "Total computation time (s)", num(std::round(r.timings.total_seconds * 10) / 10));
    table_row(out, "Objective value", num(r.objective));
    table_row(out, "Recomputed objective value", num(r.recomputed_objective));
    table_row(out, "Hard violations", num(r.hard_findings));
    table_row(out, "Number of duties", num(r.duties_total));
    table_row(out, "Unassigned duties", num(r.unassigned_duties));
    table_row(out, "Number of ward shifts", num(r.shifts_total));
    table_row(out, "Understaffed wards (below desired minimum)", num(r.understaffed_shifts));
    table_row(out, "Wards below hard minimum", num(r.below_minimum_shifts));
    for (const auto& p : r.preferences) {
        const std::string kind = p.weekly ? "weekly " : "";
        const std::string lvl = level_label(p.level);
        table_row(out, "Number of " + lvl + " " + kind + "duties", num(p.selected));
        table_row(out, (p.weekly ? "Weekly " + lvl : std::string(1, static_cast<char>(std::toupper(lvl[0]))) + lvl.substr(1)) +
                           " duties assigned",
                  num(p.assigned));
    }
    table_row(out, "Violated weekend preferences", num(r.weekend_preference_violations));
    for (const auto& p : r.pools) {
        if (p.fair) {
            table_row(out, "Pool " + p.pool + ": physicians below fair share", num(p.below_floor));
            table_row(out, "Pool " + p.pool + ": physicians above fair share", num(p.above_ceil));
        }
        if (p.desired_max_breaches || p.desired_min_breaches)
            table_row(out, "Pool " + p.pool + ": desired bound breaches", num(p.desired_max_breaches + p.desired_min_breaches));
    }
    table_row(out, "Consecutive assignments of duties", num(r.consecutive_duty_pairs));
    table_row(out, "Consecutive assignments of shift blocks", num(r.consecutive_block_pairs));
    int total = 0;
    for (const auto& [h, n] : r.desired_rest_by_level) {
        table_row(out, "Violated desired rest times (" + std::to_string(h) + " h)", num(n));
        total += n;
    }
    table_row(out, "Violated desired rest times", num(total));
    std::map<std::string, int> max_per_month;
    for (const auto& w : r.weekends)
        max_per_month[w.month] = std::max(max_per_month[w.month], w.worked);
    for (const auto& [m, n] : max_per_month)
        table_row(out, "Max worked weekends per physician (" + m + ")", num(n));
    return out;
}

std::vector<IndicatorDelta> compare_reports(const QualityReport& a, const QualityReport& b) {
    const auto ia = a.indicators();
    const auto ib = b.indicators();
    std::set<std::string> keys;
    for (const auto& [k, v] : ia)
        keys.insert(k);
    for (const auto& [k, v] : ib)
        keys.insert(k);
    std::vector<IndicatorDelta> out;
    for (const auto& k : keys) {
        const double x = ia.count(k) ? ia.at(k) : 0;
        const double y = ib.count(k) ? ib.at(k) : 0;
        out.push_back({k, x, y, y - x});
    }
    return out;
}

std::string render_comparison(const std::vector<IndicatorDelta>& deltas) {
    std::string out;
    char buf[256];
    for (const auto& d : deltas) {
        std::snprintf(buf, sizeof buf, "%-44s %12s %12s %+12g\n", d.indicator.c_str(), num(d.first).c_str(),
                      num(d.second).c_str(), d.delta);
        out += buf;
    }
    return out;
}

}  // namespace roster
