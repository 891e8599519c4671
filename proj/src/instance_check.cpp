#include "roster/instance_check.hpp"

#include "roster/derive.hpp"
#include "roster/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace roster {

namespace {

class Collector {
public:
    void error(std::string code, std::string msg) { out_.push_back({Severity::Error, std::move(code), std::move(msg)}); }
    void warning(std::string code, std::string msg) {
        out_.push_back({Severity::Warning, std::move(code), std::move(msg)});
    }
    std::vector<Finding> take() { return std::move(out_); }

private:
    std::vector<Finding> out_;
};

template <class Range, class Key>
void check_unique(Collector& c, const Range& items, Key key, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& it : items) {
        const std::string& id = key(it);
        if (id.empty())
            c.error("empty-id", what + " with empty id");
        else if (!seen.insert(id).second)
            c.error("duplicate-id", "duplicate " + what + " id '" + id + "'");
    }
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::any_of(a.begin(), a.end(), [&](const auto& x) { return b.count(x) > 0; });
}

void check_quals(Collector& c, const QualificationRules& q, const std::set<std::string>& known, const std::string& owner) {
    if (intersects(q.required, q.excluded))
        c.error("qualification-conflict", "qualification conflict in '" + owner + "': a qualification is both required and excluded");
    if (intersects(q.desired, q.undesired))
        c.error("qualification-conflict", "qualification conflict in '" + owner + "': a qualification is both desired and undesired");
    for (const auto* s : {&q.required, &q.excluded, &q.desired, &q.undesired})
        for (const auto& id : *s)
            if (!known.count(id))
                c.error("unknown-reference", "'" + owner + "' references unknown qualification '" + id + "'");
}

bool weekday_set_required(const WeekdaySet& days, DayRule holiday_rule, DayRule pre_rule) {
    return days.none() && holiday_rule != DayRule::Only && pre_rule != DayRule::Only;
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0; }

std::optional<Date> instance_date(const std::string& id) {
    const auto at = id.rfind('@');
    if (at == std::string::npos)
        return std::nullopt;
    try {
        return Date::parse(id.substr(at + 1));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

bool in_scope(const Date& d, const PlanningPeriod& period) { return d.is_weekend() || period.public_holidays.count(d) > 0; }

}  // namespace

std::size_t count_errors(const std::vector<Finding>& findings) {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [](const auto& f) { return f.severity == Severity::Error; }));
}

int cap_limit(const PreferenceCap& cap, const PlanningPeriod& period) {
    int limit = cap.max.value_or(std::numeric_limits<int>::max());
    if (cap.max_fraction_of_days) {
        int days = 0;
        for (Date d = period.start; d <= period.end; d = d + 1)
            if (cap.scope == CapScope::AllDays || in_scope(d, period))
                ++days;
        limit = std::min(limit, static_cast<int>(std::floor(*cap.max_fraction_of_days * days + 1e-9)));
    }
    return limit;
}

int cap_usage(const PreferenceCap& cap, const PlanningPeriod& period, const std::vector<PreferenceRecord>& prefs,
              const std::string& physician) {
    int selections = 0;
    std::set<Date> days;
    for (const auto& p : prefs) {
        if (p.physician != physician || p.level != cap.level || p.target != cap.target)
            continue;
        if (p.target == PreferenceTarget::Instance) {
            const auto d = instance_date(p.instance);
            if (cap.scope == CapScope::WeekendsAndHolidays && (!d || !in_scope(*d, period)))
                continue;
            if (d)
                days.insert(*d);
        }
        ++selections;
    }
    if (cap.unit == CapUnit::Days && cap.target == PreferenceTarget::Instance)
        return static_cast<int>(days.size());
    return selections;
}

std::vector<Finding> check_preference_caps(const RosterInstance& inst, const std::string& physician) {
    std::vector<Finding> out;
    for (const auto& cap : inst.preference_caps) {
        const int limit = cap_limit(cap, inst.period);
        const int used = cap_usage(cap, inst.period, inst.preferences, physician);
        if (used > limit) {
            const std::string unit = cap.unit == CapUnit::Days ? " days" : " selections";
            const std::string scope = cap.scope == CapScope::WeekendsAndHolidays ? " on weekends and holidays" : "";
            const std::string kind = cap.target == PreferenceTarget::Weekly ? "weekly" : "duty-specific";
            out.push_back({Severity::Error, "preference-cap",
                           "physician '" + physician + "' has " + std::to_string(used) + unit + " of " + kind + " '" +
                               to_string(cap.level) + "' preferences" + scope + ", exceeding the cap of " +
                               std::to_string(limit)});
        }
    }
    return out;
}

std::vector<Finding> validate_instance(const RosterInstance& inst) {
    Collector c;
    const auto& period = inst.period;

    if (inst.schema_version != kSchemaVersion)
        c.error("schema-version", "unsupported schema version " + std::to_string(inst.schema_version));
    if (period.end < period.start)
        c.error("period", "period ends before it starts");
    for (const auto& h : period.public_holidays)
        if (h < period.start - 1 || h > period.end + 1)
            c.error("period", "public holiday " + h.str() + " lies outside the period and its adjacent days");
    if (period.weekend_threshold < 0 || period.weekend_threshold >= kMinutesPerDay)
        c.error("period", "weekend threshold is not a time of day");

    check_unique(c, inst.qualifications, [](const auto& q) -> const std::string& { return q.id; }, "qualification");
    check_unique(c, inst.physicians, [](const auto& p) -> const std::string& { return p.id; }, "physician");
    std::vector<std::string> template_ids;
    for (const auto& t : inst.duty_templates)
        template_ids.push_back(t.id);
    for (const auto& t : inst.shift_templates)
        template_ids.push_back(t.id);
    check_unique(c, template_ids, [](const auto& s) -> const std::string& { return s; }, "template");
    check_unique(c, inst.blocks, [](const auto& b) -> const std::string& { return b.id; }, "block");
    check_unique(c, inst.pools, [](const auto& p) -> const std::string& { return p.id; }, "pool");
    check_unique(c, inst.weekly_sets, [](const auto& s) -> const std::string& { return s.id; }, "weekly set");
    for (const auto& id : template_ids)
        if (id == "*" || id.find('@') != std::string::npos)
            c.error("template", "template id '" + id + "' uses a reserved character");

    std::set<std::string> quals;
    for (const auto& q : inst.qualifications)
        quals.insert(q.id);
    std::set<std::string> physicians;
    for (const auto& p : inst.physicians)
        physicians.insert(p.id);
    std::set<std::string> templates(template_ids.begin(), template_ids.end());

    for (const auto& p : inst.physicians) {
        if (!(p.employment_rate > 0 && p.employment_rate <= 1))
            c.error("employment-rate", "physician '" + p.id + "' has employment rate outside (0,1]");
        for (const auto& q : p.qualifications)
            if (!quals.count(q))
                c.error("unknown-reference", "physician '" + p.id + "' holds unknown qualification '" + q + "'");
    }

    for (const auto& t : inst.duty_templates) {
        check_quals(c, t.quals, quals, t.id);
        if (weekday_set_required(t.weekdays, t.holiday_rule, t.pre_holiday_rule))
            c.error("weekdays", "duty template '" + t.id + "' has no weekdays");
        if (t.time.end <= t.time.start || (t.holiday_time && t.holiday_time->end <= t.holiday_time->start))
            c.error("times", "duty template '" + t.id + "' ends at or before its start");
    }
    for (const auto& t : inst.shift_templates) {
        check_quals(c, t.quals, quals, t.id);
        if (weekday_set_required(t.weekdays, t.holiday_rule, t.pre_holiday_rule))
            c.error("weekdays", "shift template '" + t.id + "' has no weekdays");
        if (t.time.end <= t.time.start)
            c.error("times", "shift template '" + t.id + "' ends at or before its start");
        if (t.min_staff < 0 || t.desired_min_staff < t.min_staff || (t.max_staff && *t.max_staff < t.desired_min_staff))
            c.error("staffing", "shift template '" + t.id + "' violates 0 <= min <= desired <= max");
        for (const auto& m : t.ward_members)
            if (!physicians.count(m))
                c.error("unknown-reference", "shift template '" + t.id + "' lists unknown physician '" + m + "'");
        if (t.desired_weight && !finite_nonneg(*t.desired_weight))
            c.error("weights", "shift template '" + t.id + "' has a negative or non-finite weight");
    }

    for (const auto& r : inst.rest_rules) {
        if ((r.from != "*" && !templates.count(r.from)) || (r.to != "*" && !templates.count(r.to)))
            c.error("unknown-reference", "rest rule " + r.from + " -> " + r.to + " references an unknown template");
        for (const auto& l : r.desired_levels) {
            if (l.rest <= r.mandatory_rest)
                c.error("rest-rule", "rest rule " + r.from + " -> " + r.to + " has a desired rest not above the mandatory rest");
            if (l.weight && !finite_nonneg(*l.weight))
                c.error("weights", "rest rule " + r.from + " -> " + r.to + " has a negative weight");
        }
    }

    const auto& w = inst.weights;
    for (double x : {w.duty_coverage, w.shift_desired_staffing, w.shift_above_desired, w.duty_soft_qualification,
                     w.shift_soft_qualification, w.pool_max, w.pool_min, w.pool_max_phy, w.fair_down, w.fair_up,
                     w.max_weekends, w.free_weekends, w.weekend_preference, w.strongly_desired, w.desired, w.undesired,
                     w.max_consecutive_blocks, w.block_consecutive, w.duty_consecutive})
        if (!finite_nonneg(x)) {
            c.error("weights", "objective weights must be finite and nonnegative");
            break;
        }
    for (double x : w.rest_levels)
        if (!finite_nonneg(x))
            c.error("weights", "rest level weights must be finite and nonnegative");

    const auto& wp = inst.weekend_policy;
    for (const auto* v : {&wp.max_we, &wp.des_max_we, &wp.min_free_we, &wp.des_min_free_we})
        if (*v && **v < 0)
            c.error("weekend-policy", "weekend counts must be nonnegative");
    if (wp.cons_we && *wp.cons_we < 1)
        c.error("weekend-policy", "cons_we must be at least 1");

    for (const auto& co : inst.carryover.assignments) {
        if (!physicians.count(co.physician))
            c.error("unknown-reference", "carryover references unknown physician '" + co.physician + "'");
        if (!templates.count(co.template_id))
            c.error("unknown-reference", "carryover references unknown template '" + co.template_id + "'");
        if (co.date >= period.start)
            c.error("carryover", "carryover assignment on " + co.date.str() + " is not before the period");
    }
    for (const auto& [pid, n] : inst.carryover.past_weekends) {
        if (!physicians.count(pid))
            c.error("unknown-reference", "past weekends reference unknown physician '" + pid + "'");
        if (n < 0)
            c.error("carryover", "past weekends must be nonnegative");
    }
    for (const auto& b : inst.carryover.blocks) {
        for (const auto& pid : b.physicians)
            if (!physicians.count(pid))
                c.error("unknown-reference", "previous block '" + b.id + "' references unknown physician '" + pid + "'");
        if (b.end_date >= period.start)
            c.error("carryover", "previous block '" + b.id + "' does not end before the period");
    }

    // Everything below needs the generated instances.
    std::vector<Activity> acts;
    try {
        acts = expand_instances(inst);
    } catch (const ConfigError& e) {
        c.error("times", e.what());
        return c.take();
    }
    std::map<std::string, const Activity*> by_id;
    for (const auto& a : acts)
        by_id[a.id] = &a;

    std::map<std::string, const Physician*> phys_by_id;
    for (const auto& p : inst.physicians)
        phys_by_id[p.id] = &p;
    std::set<std::pair<std::string, std::string>> manual_seen;
    for (const auto& m : inst.manual_assignments) {
        auto a = by_id.find(m.instance);
        auto p = phys_by_id.find(m.physician);
        if (a == by_id.end()) {
            c.error("unknown-reference", "manual assignment references unknown instance '" + m.instance + "'");
            continue;
        }
        if (p == phys_by_id.end()) {
            c.error("unknown-reference", "manual assignment references unknown physician '" + m.physician + "'");
            continue;
        }
        const auto& rules = a->second->kind == ActivityKind::Duty
                                ? inst.duty_templates[static_cast<std::size_t>(a->second->template_index)].quals
                                : inst.shift_templates[static_cast<std::size_t>(a->second->template_index)].quals;
        if (!check_qualification(rules, p->second->qualifications).hard)
            c.error("unqualified-manual", "instance '" + m.instance + "' is pre-assigned to unqualified physician '" +
                                              m.physician + "'");
        if (!manual_seen.insert({m.instance, m.physician}).second)
            c.warning("duplicate-manual", "manual assignment of '" + m.instance + "' to '" + m.physician + "' is repeated");
    }

    std::set<std::string> block_ids;
    for (const auto& b : inst.blocks)
        block_ids.insert(b.id);
    for (const auto& b : inst.blocks) {
        if (b.members.empty())
            c.error("block", "block '" + b.id + "' has no members");
        for (const auto& m : b.members) {
            auto a = by_id.find(m);
            if (a == by_id.end())
                c.error("unknown-reference", "block '" + b.id + "' references unknown instance '" + m + "'");
            else if ((a->second->kind == ActivityKind::Duty) != (b.kind == BlockKind::Duty))
                c.error("block", "block '" + b.id + "' member '" + m + "' has the wrong kind");
        }
        if (b.free_days_after < 0)
            c.error("block", "block '" + b.id + "' has negative free days");
        if (b.consecutive_predecessor) {
            if (b.kind != BlockKind::Shift)
                c.error("block", "block '" + b.id + "': consecutive predecessors apply to shift blocks only");
            const auto& pred = *b.consecutive_predecessor;
            const bool in_prev = std::any_of(inst.carryover.blocks.begin(), inst.carryover.blocks.end(),
                                             [&](const auto& x) { return x.id == pred; });
            if (!block_ids.count(pred) && !in_prev)
                c.error("unknown-reference", "block '" + b.id + "' has unknown predecessor '" + pred + "'");
            if (pred == b.id)
                c.error("block", "block '" + b.id + "' is its own predecessor");
        }
        if (b.max_consecutive_run && *b.max_consecutive_run < 1)
            c.error("block", "block '" + b.id + "' has max_consecutive_run below 1");
        if (b.consecutive_weight && !finite_nonneg(*b.consecutive_weight))
            c.error("weights", "block '" + b.id + "' has a negative weight");
    }

    for (const auto& p : inst.pools) {
        for (const auto& m : p.physicians)
            if (!physicians.count(m))
                c.error("unknown-reference", "pool '" + p.id + "' lists unknown physician '" + m + "'");
        for (const auto& t : p.duties.templates)
            if (!std::any_of(inst.duty_templates.begin(), inst.duty_templates.end(), [&](const auto& d) { return d.id == t; }))
                c.error("unknown-reference", "pool '" + p.id + "' selects unknown duty template '" + t + "'");
        for (const auto& id : p.duties.instances) {
            auto a = by_id.find(id);
            if (a == by_id.end() || a->second->kind != ActivityKind::Duty)
                c.error("unknown-reference", "pool '" + p.id + "' lists unknown duty instance '" + id + "'");
        }
        if (p.exact_count && (p.min_duties || p.max_duties || p.desired_min_duties || p.desired_max_duties))
            c.error("pool", "pool '" + p.id + "' combines an exact count with min/max counts");
        for (const auto* v : {&p.exact_count, &p.min_duties, &p.desired_min_duties, &p.max_duties, &p.desired_max_duties,
                              &p.max_phy, &p.desired_max_phy})
            if (*v && **v < 0)
                c.error("pool", "pool '" + p.id + "' has a negative count");
        if (p.min_duties && p.max_duties && *p.min_duties > *p.max_duties)
            c.error("pool", "pool '" + p.id + "' has min_duties above max_duties");
        if (p.desired_max_duties && p.max_duties && *p.desired_max_duties > *p.max_duties)
            c.warning("pool", "pool '" + p.id + "' has a desired maximum above its hard maximum");
        if (p.desired_min_duties && p.min_duties && *p.desired_min_duties < *p.min_duties)
            c.warning("pool", "pool '" + p.id + "' has a desired minimum below its hard minimum");
        if (p.desired_max_phy && p.max_phy && *p.desired_max_phy > *p.max_phy)
            c.warning("pool", "pool '" + p.id + "' has a desired daily maximum above its hard maximum");
        for (const auto& x : {p.fairness_penalty_down, p.fairness_penalty_up, p.desired_min_weight, p.desired_max_weight,
                              p.desired_max_phy_weight})
            if (x && !finite_nonneg(*x))
                c.error("weights", "pool '" + p.id + "' has a negative weight");
        if (p.physicians.size() == 1)
            c.warning("pool", "pool '" + p.id + "' has a single member");
        if (p.physicians.empty())
            c.warning("pool", "pool '" + p.id + "' has no members");
    }

    std::set<std::string> weekly;
    for (const auto& s : inst.weekly_sets) {
        weekly.insert(s.id);
        for (const auto& t : s.templates)
            if (!templates.count(t))
                c.error("unknown-reference", "weekly set '" + s.id + "' references unknown template '" + t + "'");
    }
    for (const auto& pref : inst.preferences) {
        if (!physicians.count(pref.physician))
            c.error("unknown-reference", "preference of unknown physician '" + pref.physician + "'");
        if (pref.target == PreferenceTarget::Instance) {
            if (!by_id.count(pref.instance))
                c.error("unknown-reference", "preference references unknown instance '" + pref.instance + "'");
        } else {
            if (!weekly.count(pref.weekly_set))
                c.error("unknown-reference", "preference references unknown weekly set '" + pref.weekly_set + "'");
            if (pref.level == PreferenceLevel::Impossible)
                c.error("weekly-impossible", "'impossible' cannot be used for weekly preferences (physician '" +
                                                 pref.physician + "')");
        }
    }
    for (const auto& cap : inst.preference_caps) {
        if (!cap.max && !cap.max_fraction_of_days)
            c.error("preference-cap", "preference cap without a limit");
        if (cap.max && *cap.max < 0)
            c.error("preference-cap", "preference cap with a negative limit");
    }
    auto findings = c.take();
    for (const auto& p : inst.physicians)
        for (auto& f : check_preference_caps(inst, p.id))
            findings.push_back(std::move(f));
    return findings;
}

}  // namespace roster
