#include "roster/derive.hpp"

#include "roster/errors.hpp"

#include <algorithm>
#include <numeric>

namespace roster {

namespace {

struct DayFlags {
    bool holiday = false;
    bool pre_holiday = false;
    bool near_holiday = false;
};

DayFlags day_flags(const PlanningPeriod& period, const Date& d) {
    DayFlags f;
    f.holiday = period.public_holidays.count(d) > 0;
    f.pre_holiday = period.public_holidays.count(d + 1) > 0;
    f.near_holiday = f.holiday || f.pre_holiday || period.public_holidays.count(d - 1) > 0;
    return f;
}

bool occurs(const WeekdaySet& weekdays, DayRule holiday_rule, DayRule pre_rule, const Date& d, const DayFlags& f) {
    auto allows = [](DayRule r) { return r == DayRule::Only || r == DayRule::Also; };
    if (holiday_rule == DayRule::Only || pre_rule == DayRule::Only)
        return (f.holiday && allows(holiday_rule)) || (f.pre_holiday && allows(pre_rule));
    bool on = weekdays.test(static_cast<std::size_t>(d.weekday()));
    if (f.holiday && holiday_rule == DayRule::Also)
        on = true;
    if (f.pre_holiday && pre_rule == DayRule::Also)
        on = true;
    if (f.holiday && holiday_rule == DayRule::Never)
        on = false;
    if (f.pre_holiday && pre_rule == DayRule::Never)
        on = false;
    return on;
}

Activity make_activity(const std::string& tid, int tindex, ActivityKind kind, const TimeSpan& base,
                       const std::optional<TimeSpan>& holiday_time, const PlanningPeriod& period, const Date& d) {
    const DayFlags f = day_flags(period, d);
    const TimeSpan span = (holiday_time && f.near_holiday) ? *holiday_time : base;
    if (span.end <= span.start)
        throw ConfigError("template '" + tid + "' on " + d.str() + " ends at or before its start");
    Activity a;
    a.id = instance_id(tid, d);
    a.template_id = tid;
    a.template_index = tindex;
    a.kind = kind;
    a.date = d;
    a.day = d - period.start;
    a.start = a.day * kMinutesPerDay + span.start;
    a.end = a.day * kMinutesPerDay + span.end;
    a.holiday = f.holiday;
    return a;
}

/// Resolves a previous-period assignment to an activity with period-relative times.
std::optional<Activity> carry_activity(const RosterInstance& inst, const CarryoverAssignment& c) {
    for (std::size_t i = 0; i < inst.duty_templates.size(); ++i) {
        const auto& t = inst.duty_templates[i];
        if (t.id == c.template_id) {
            auto a = make_activity(t.id, static_cast<int>(i), ActivityKind::Duty, t.time, t.holiday_time, inst.period, c.date);
            a.mandatory = t.mandatory;
            return a;
        }
    }
    for (std::size_t i = 0; i < inst.shift_templates.size(); ++i) {
        const auto& t = inst.shift_templates[i];
        if (t.id == c.template_id)
            return make_activity(t.id, static_cast<int>(i), ActivityKind::Shift, t.time, std::nullopt, inst.period, c.date);
    }
    return std::nullopt;
}

int max_rest_span(const std::vector<RestRule>& rules) {
    int m = 0;
    for (const auto& r : rules) {
        m = std::max(m, r.mandatory_rest);
        for (const auto& l : r.desired_levels)
            m = std::max(m, l.rest);
    }
    return m;
}

/// Tightest violated desired level for a gap, or -1.
int violated_level(const RestRule& rule, int gap) {
    int best = -1;
    for (std::size_t i = 0; i < rule.desired_levels.size(); ++i) {
        const int rest = rule.desired_levels[i].rest;
        if (gap < rest && (best < 0 || rest < rule.desired_levels[static_cast<std::size_t>(best)].rest))
            best = static_cast<int>(i);
    }
    return best;
}

double preference_weight(PreferenceLevel level, const WeightConfig& w) {
    switch (level) {
    case PreferenceLevel::StronglyDesired: return w.strongly_desired;
    case PreferenceLevel::Desired: return w.desired;
    case PreferenceLevel::Undesired: return -w.undesired;
    default: return 0;
    }
}

}  // namespace

std::string instance_id(const std::string& template_id, const Date& date) { return template_id + "@" + date.str(); }

std::vector<Activity> expand_instances(const RosterInstance& inst) {
    std::vector<Activity> duties;
    std::vector<Activity> shifts;
    const auto& period = inst.period;
    for (Date d = period.start; d <= period.end; d = d + 1) {
        const DayFlags f = day_flags(period, d);
        for (std::size_t i = 0; i < inst.duty_templates.size(); ++i) {
            const auto& t = inst.duty_templates[i];
            if (!occurs(t.weekdays, t.holiday_rule, t.pre_holiday_rule, d, f))
                continue;
            auto a = make_activity(t.id, static_cast<int>(i), ActivityKind::Duty, t.time, t.holiday_time, period, d);
            a.mandatory = t.mandatory;
            duties.push_back(std::move(a));
        }
        for (std::size_t i = 0; i < inst.shift_templates.size(); ++i) {
            const auto& t = inst.shift_templates[i];
            if (!occurs(t.weekdays, t.holiday_rule, t.pre_holiday_rule, d, f))
                continue;
            shifts.push_back(make_activity(t.id, static_cast<int>(i), ActivityKind::Shift, t.time, std::nullopt, period, d));
        }
    }
    duties.insert(duties.end(), std::make_move_iterator(shifts.begin()), std::make_move_iterator(shifts.end()));
    return duties;
}

void compute_calendar(const PlanningPeriod& period, std::vector<Weekend>& weekends, std::vector<Month>& months) {
    weekends.clear();
    months.clear();
    for (Date d = period.start; d <= period.end; d = d + 1) {
        if (months.empty() || months.back().year != d.year() || months.back().month != d.month()) {
            Month m;
            m.year = d.year();
            m.month = d.month();
            const unsigned n = days_in_month(m.year, m.month);
            for (unsigned k = 1; k <= n; ++k)
                if (Date(m.year, m.month, k).weekday() == 5)
                    ++m.saturdays_total;
            months.push_back(m);
        }
        if (d.weekday() == 5)
            ++months.back().saturdays_in_period;
    }
    for (auto& m : months)
        m.we_factor = m.saturdays_total > 0 ? static_cast<double>(m.saturdays_in_period) / m.saturdays_total : 0.0;

    const Date before = period.start - 1;
    Date sat = before + ((5 - before.weekday() + 7) % 7);
    for (; sat <= period.end; sat = sat + 7) {
        Weekend w;
        w.saturday = sat;
        if (period.contains(sat))
            for (std::size_t m = 0; m < months.size(); ++m)
                if (months[m].year == sat.year() && months[m].month == sat.month()) {
                    w.month = static_cast<int>(m);
                    months[m].weekends.push_back(static_cast<int>(weekends.size()));
                }
        weekends.push_back(w);
    }
}

const RestRule* find_rest_rule(const std::vector<RestRule>& rules, const std::string& from, const std::string& to) {
    const RestRule* by_from = nullptr;
    const RestRule* by_to = nullptr;
    const RestRule* any = nullptr;
    for (const auto& r : rules) {
        const bool f_exact = r.from == from;
        const bool t_exact = r.to == to;
        const bool f_wild = r.from == "*";
        const bool t_wild = r.to == "*";
        if (f_exact && t_exact)
            return &r;
        if (f_exact && t_wild && !by_from)
            by_from = &r;
        else if (f_wild && t_exact && !by_to)
            by_to = &r;
        else if (f_wild && t_wild && !any)
            any = &r;
    }
    if (by_from)
        return by_from;
    if (by_to)
        return by_to;
    return any;
}

bool precedes(const Activity& a, const Activity& b) {
    if (a.start != b.start)
        return a.start < b.start;
    if (a.end != b.end)
        return a.end < b.end;
    return a.id < b.id;
}

double rest_level_weight(const RestRule& rule, int level, const WeightConfig& weights) {
    const auto& l = rule.desired_levels.at(static_cast<std::size_t>(level));
    if (l.weight)
        return *l.weight;
    if (weights.rest_levels.empty())
        return 0;
    const auto i = std::min(static_cast<std::size_t>(level), weights.rest_levels.size() - 1);
    return weights.rest_levels[i];
}

ConflictSets derive_conflicts(const std::vector<Activity>& activities, const std::vector<RestRule>& rules,
                              const WeightConfig& weights) {
    ConflictSets out;
    if (rules.empty())
        return out;
    std::vector<int> order(activities.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return precedes(activities[a], activities[b]); });
    const int horizon = max_rest_span(rules);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Activity& a = activities[order[i]];
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Activity& b = activities[order[j]];
            const int gap = b.start - a.end;
            if (gap >= horizon)
                break;
            const RestRule* rule = find_rest_rule(rules, a.template_id, b.template_id);
            if (!rule)
                continue;
            if (gap < rule->mandatory_rest) {
                out.hard.push_back({order[i], order[j]});
                continue;
            }
            const int lvl = violated_level(*rule, gap);
            if (lvl >= 0)
                out.soft.push_back({order[i], order[j], lvl, rule->desired_levels[static_cast<std::size_t>(lvl)].rest,
                                    rest_level_weight(*rule, lvl, weights)});
        }
    }
    auto key = [](const auto& c) { return std::pair(c.first, c.second); };
    std::sort(out.hard.begin(), out.hard.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
    std::sort(out.soft.begin(), out.soft.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
    return out;
}

Qualified check_qualification(const QualificationRules& rules, const std::set<std::string>& quals) {
    auto has_all = [&](const std::set<std::string>& need) {
        return std::all_of(need.begin(), need.end(), [&](const auto& q) { return quals.count(q) > 0; });
    };
    auto has_any = [&](const std::set<std::string>& bad) {
        return std::any_of(bad.begin(), bad.end(), [&](const auto& q) { return quals.count(q) > 0; });
    };
    Qualified r;
    r.hard = has_all(rules.required) && !has_any(rules.excluded);
    r.soft = r.hard && has_all(rules.desired) && !has_any(rules.undesired);
    return r;
}

std::vector<double> compute_target_numbers(int n, const std::vector<double>& rates, const std::vector<int>& attendance) {
    std::vector<double> out(rates.size(), 0.0);
    if (n == 0 || rates.empty())
        return out;
    double denom = 0;
    for (std::size_t i = 0; i < rates.size(); ++i)
        denom += rates[i] * attendance[i];
    if (denom <= 0)
        throw DegeneratePoolError("degenerate pool: no member is available on any pool-duty day");
    for (std::size_t i = 0; i < rates.size(); ++i)
        out[i] = n * (rates[i] * attendance[i]) / denom;
    return out;
}

std::vector<int> select_pool_duties(const DutySelector& sel, const DerivedSets& der) {
    std::set<std::string> templates(sel.templates.begin(), sel.templates.end());
    std::set<std::string> explicit_ids(sel.instances.begin(), sel.instances.end());
    std::vector<int> out;
    for (int d = 0; d < der.num_duties; ++d) {
        const auto& a = der.activities[static_cast<std::size_t>(d)];
        bool pick = explicit_ids.count(a.id) > 0;
        if (!pick && templates.count(a.template_id) && sel.weekdays.test(static_cast<std::size_t>(a.date.weekday()))) {
            pick = sel.holidays == HolidayFilter::Any || (sel.holidays == HolidayFilter::Only && a.holiday) ||
                   (sel.holidays == HolidayFilter::Exclude && !a.holiday);
        }
        if (pick)
            out.push_back(d);
    }
    return out;
}

DerivedSets derive_all(const RosterInstance& inst) {
    DerivedSets der;
    const auto& period = inst.period;
    der.T = period.length();
    for (int t = 0; t < der.T; ++t) {
        der.days.push_back(period.start + t);
        der.holiday.push_back(period.public_holidays.count(period.start + t) ? 1 : 0);
    }

    der.activities = expand_instances(inst);
    const int A = der.num_activities();
    for (const auto& a : der.activities)
        (a.kind == ActivityKind::Duty ? der.num_duties : der.num_shifts)++;
    for (int i = 0; i < A; ++i)
        der.activity_index[der.activities[static_cast<std::size_t>(i)].id] = i;

    const int P = static_cast<int>(inst.physicians.size());
    for (int p = 0; p < P; ++p)
        der.physician_index[inst.physicians[static_cast<std::size_t>(p)].id] = p;
    auto phys = [&](const std::string& id, const std::string& ctx) {
        auto it = der.physician_index.find(id);
        if (it == der.physician_index.end())
            throw ConfigError(ctx + " references unknown physician '" + id + "'");
        return it->second;
    };
    auto act = [&](const std::string& id, const std::string& ctx) {
        auto it = der.activity_index.find(id);
        if (it == der.activity_index.end())
            throw ConfigError(ctx + " references unknown instance '" + id + "'");
        return it->second;
    };

    der.duties_on_day.assign(static_cast<std::size_t>(der.T), {});
    der.shifts_on_day.assign(static_cast<std::size_t>(der.T), {});
    for (int i = 0; i < A; ++i) {
        const auto& a = der.activities[static_cast<std::size_t>(i)];
        (der.is_duty(i) ? der.duties_on_day : der.shifts_on_day)[static_cast<std::size_t>(a.day)].push_back(i);
    }

    // Weekends and months.
    compute_calendar(period, der.weekends, der.months);
    for (auto& w : der.weekends) {
        const Date fri = w.saturday - 1;
        for (int d = 0; d < der.num_duties; ++d) {
            const auto& a = der.activities[static_cast<std::size_t>(d)];
            if (a.date == w.saturday || a.date == w.saturday + 1 ||
                (a.date == fri && a.end > a.day * kMinutesPerDay + period.weekend_threshold))
                w.duties.push_back(d);
        }
    }
    for (auto& m : der.months)
        for (int d = 0; d < der.num_duties; ++d) {
            const auto& a = der.activities[static_cast<std::size_t>(d)];
            if (a.date.year() == m.year && a.date.month() == m.month)
                m.duties.push_back(d);
        }

    // Qualification sets.
    der.quali.assign(static_cast<std::size_t>(P), std::vector<char>(static_cast<std::size_t>(A), 1));
    der.quali_soft = der.quali;
    for (int p = 0; p < P; ++p) {
        const auto& quals = inst.physicians[static_cast<std::size_t>(p)].qualifications;
        for (int i = 0; i < A; ++i) {
            const auto& a = der.activities[static_cast<std::size_t>(i)];
            const auto& rules = der.is_duty(i) ? inst.duty_templates[static_cast<std::size_t>(a.template_index)].quals
                                               : inst.shift_templates[static_cast<std::size_t>(a.template_index)].quals;
            const Qualified q = check_qualification(rules, quals);
            der.quali[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = q.hard;
            der.quali_soft[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = q.soft;
        }
    }

    // Absences.
    der.absent.assign(static_cast<std::size_t>(P), std::vector<char>(static_cast<std::size_t>(der.T), 0));
    for (int p = 0; p < P; ++p)
        for (const auto& d : inst.physicians[static_cast<std::size_t>(p)].absences)
            if (period.contains(d))
                der.absent[static_cast<std::size_t>(p)][static_cast<std::size_t>(d - period.start)] = 1;

    // Manual assignments.
    der.manual.assign(static_cast<std::size_t>(P), {});
    der.manual_owners.assign(static_cast<std::size_t>(A), {});
    for (const auto& m : inst.manual_assignments) {
        const int p = phys(m.physician, "manual assignment");
        const int a = act(m.instance, "manual assignment");
        der.manual[static_cast<std::size_t>(p)].insert(a);
        auto& owners = der.manual_owners[static_cast<std::size_t>(a)];
        if (std::find(owners.begin(), owners.end(), p) == owners.end())
            owners.push_back(p);
    }

    // Preferences.
    der.impossible.assign(static_cast<std::size_t>(P), {});
    der.preference_score.assign(static_cast<std::size_t>(P), {});
    std::map<std::string, const WeeklySet*> sets;
    for (const auto& s : inst.weekly_sets)
        sets[s.id] = &s;
    for (const auto& pref : inst.preferences) {
        ResolvedPreference r;
        r.physician = phys(pref.physician, "preference");
        r.level = pref.level;
        if (pref.target == PreferenceTarget::Instance) {
            r.label = pref.instance;
            r.activities.push_back(act(pref.instance, "preference"));
        } else {
            r.weekly = true;
            r.label = pref.weekly_set + "#" + std::to_string(pref.week);
            auto it = sets.find(pref.weekly_set);
            if (it == sets.end())
                throw ConfigError("preference references unknown weekly set '" + pref.weekly_set + "'");
            for (int i = 0; i < A; ++i) {
                const auto& a = der.activities[static_cast<std::size_t>(i)];
                if (it->second->templates.count(a.template_id) &&
                    it->second->weekdays.test(static_cast<std::size_t>(a.date.weekday())) &&
                    week_index(period.start, a.date) == pref.week)
                    r.activities.push_back(i);
            }
        }
        if (r.level == PreferenceLevel::Impossible) {
            for (int a : r.activities)
                der.impossible[static_cast<std::size_t>(r.physician)].insert(a);
        } else if (const double w = preference_weight(r.level, inst.weights); w != 0) {
            for (int a : r.activities)
                der.preference_score[static_cast<std::size_t>(r.physician)][a] += w;
        }
        der.preferences.push_back(std::move(r));
    }

    // Rest-time conflicts inside the period.
    for (const auto& r : inst.rest_rules) {
        auto known = [&](const std::string& id) {
            if (id == "*")
                return true;
            return std::any_of(inst.duty_templates.begin(), inst.duty_templates.end(), [&](const auto& t) { return t.id == id; }) ||
                   std::any_of(inst.shift_templates.begin(), inst.shift_templates.end(), [&](const auto& t) { return t.id == id; });
        };
        if (!known(r.from) || !known(r.to))
            throw ConfigError("rest rule " + r.from + " -> " + r.to + " references an unknown template");
    }
    {
        auto cs = derive_conflicts(der.activities, inst.rest_rules, inst.weights);
        der.conflicts = std::move(cs.hard);
        der.soft_conflicts = std::move(cs.soft);
    }

    // Carryover: rest after previous-period assignments, trailing free days, past weekends.
    der.carry_hard.assign(static_cast<std::size_t>(P), {});
    der.carry_soft.assign(static_cast<std::size_t>(P), {});
    const int horizon = max_rest_span(inst.rest_rules);
    std::vector<std::pair<int, Activity>> carried;
    for (const auto& c : inst.carryover.assignments) {
        const int p = phys(c.physician, "carryover");
        auto a = carry_activity(inst, c);
        if (!a)
            throw ConfigError("carryover references unknown template '" + c.template_id + "'");
        carried.emplace_back(p, *a);
    }
    for (const auto& [p, c] : carried) {
        for (int i = 0; i < A; ++i) {
            const auto& a = der.activities[static_cast<std::size_t>(i)];
            const int gap = a.start - c.end;
            if (gap >= horizon || !precedes(c, a))
                continue;
            const RestRule* rule = find_rest_rule(inst.rest_rules, c.template_id, a.template_id);
            if (!rule)
                continue;
            if (gap < rule->mandatory_rest) {
                der.carry_hard[static_cast<std::size_t>(p)].insert(i);
                continue;
            }
            if (const int lvl = violated_level(*rule, gap); lvl >= 0) {
                double& w = der.carry_soft[static_cast<std::size_t>(p)][i];
                w = std::max(w, rest_level_weight(*rule, lvl, inst.weights));
            }
        }
    }
    for (const auto& b : inst.carryover.blocks) {
        for (const auto& pid : b.physicians) {
            const int p = phys(pid, "previous block");
            for (int k = 1; k <= b.free_days_after; ++k) {
                const Date d = b.end_date + k;
                if (!period.contains(d))
                    continue;
                const auto t = static_cast<std::size_t>(d - period.start);
                for (int i : der.duties_on_day[t])
                    der.carry_hard[static_cast<std::size_t>(p)].insert(i);
                for (int i : der.shifts_on_day[t])
                    der.carry_hard[static_cast<std::size_t>(p)].insert(i);
            }
        }
    }
    for (int p = 0; p < P; ++p)
        for (int i : der.carry_hard[static_cast<std::size_t>(p)])
            der.carry_soft[static_cast<std::size_t>(p)].erase(i);
    der.past_weekends.assign(static_cast<std::size_t>(P), 0);
    for (const auto& [pid, n] : inst.carryover.past_weekends)
        der.past_weekends[static_cast<std::size_t>(phys(pid, "past weekends"))] = n;

    // Consecutive duties.
    der.prev_duty.assign(static_cast<std::size_t>(der.num_duties), std::nullopt);
    der.p_prev_pp.assign(static_cast<std::size_t>(der.num_duties), std::nullopt);
    for (int d = 0; d < der.num_duties; ++d) {
        const auto& a = der.activities[static_cast<std::size_t>(d)];
        if (!inst.duty_templates[static_cast<std::size_t>(a.template_index)].desire_consecutive)
            continue;
        const Date pd = a.date - 1;
        if (period.contains(pd)) {
            if (auto it = der.activity_index.find(instance_id(a.template_id, pd)); it != der.activity_index.end())
                der.prev_duty[static_cast<std::size_t>(d)] = it->second;
        } else {
            for (const auto& c : inst.carryover.assignments)
                if (c.template_id == a.template_id && c.date == pd) {
                    der.p_prev_pp[static_cast<std::size_t>(d)] = phys(c.physician, "carryover");
                    break;
                }
        }
    }

    // Blocks.
    std::map<std::string, int> block_index;
    for (std::size_t b = 0; b < inst.blocks.size(); ++b)
        block_index[inst.blocks[b].id] = static_cast<int>(b);
    for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
        const auto& def = inst.blocks[b];
        DerivedBlock blk;
        blk.definition = static_cast<int>(b);
        blk.kind = def.kind;
        for (const auto& m : def.members) {
            const int i = act(m, "block '" + def.id + "'");
            if (der.is_duty(i) != (def.kind == BlockKind::Duty))
                throw ConfigError("block '" + def.id + "' mixes duties and shifts");
            blk.members.push_back(i);
        }
        if (blk.members.empty())
            throw ConfigError("block '" + def.id + "' has no members");
        std::sort(blk.members.begin(), blk.members.end(), [&](int x, int y) {
            return precedes(der.activities[static_cast<std::size_t>(x)], der.activities[static_cast<std::size_t>(y)]);
        });
        blk.start_day = der.activities[static_cast<std::size_t>(blk.members.front())].day;
        blk.end_day = blk.start_day;
        for (int m : blk.members)
            blk.end_day = std::max(blk.end_day, der.activities[static_cast<std::size_t>(m)].day);
        blk.consecutive_weight = def.consecutive_weight.value_or(inst.weights.block_consecutive);
        if (def.consecutive_predecessor) {
            const auto& pred = *def.consecutive_predecessor;
            if (auto it = block_index.find(pred); it != block_index.end()) {
                blk.prev = it->second;
            } else {
                auto prev = std::find_if(inst.carryover.blocks.begin(), inst.carryover.blocks.end(),
                                         [&](const auto& x) { return x.id == pred; });
                if (prev == inst.carryover.blocks.end())
                    throw ConfigError("block '" + def.id + "' has unknown predecessor '" + pred + "'");
                blk.predecessor_in_previous_period = true;
                for (const auto& pid : prev->physicians)
                    blk.prev_physicians.insert(phys(pid, "previous block"));
            }
        }
        der.blocks.push_back(std::move(blk));
    }
    {
        std::set<std::vector<int>> seen;
        for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
            const auto& run = inst.blocks[b].max_consecutive_run;
            if (!run || *run < 1)
                continue;
            std::vector<int> window{static_cast<int>(b)};
            int cur = static_cast<int>(b);
            while (static_cast<int>(window.size()) < *run + 1) {
                const auto& prev = der.blocks[static_cast<std::size_t>(cur)].prev;
                if (!prev)
                    break;
                cur = *prev;
                window.insert(window.begin(), cur);
            }
            if (static_cast<int>(window.size()) == *run + 1 && seen.insert(window).second)
                der.block_cons.push_back(window);
        }
    }

    // Pools.
    for (std::size_t k = 0; k < inst.pools.size(); ++k) {
        const auto& def = inst.pools[k];
        DerivedPool pool;
        pool.definition = static_cast<int>(k);
        for (const auto& pid : def.physicians)
            pool.physicians.push_back(phys(pid, "pool '" + def.id + "'"));
        std::sort(pool.physicians.begin(), pool.physicians.end());
        for (const auto& id : def.duties.instances) {
            const int i = act(id, "pool '" + def.id + "'");
            if (!der.is_duty(i))
                throw ConfigError("pool '" + def.id + "' lists shift instance '" + id + "'");
        }
        pool.duties = select_pool_duties(def.duties, der);
        if (def.fair_distribution) {
            std::vector<double> rates;
            for (int p : pool.physicians) {
                int attend = 0;
                for (int d : pool.duties)
                    if (!der.absent[static_cast<std::size_t>(p)]
                                   [static_cast<std::size_t>(der.activities[static_cast<std::size_t>(d)].day)])
                        ++attend;
                pool.attendance.push_back(attend);
                rates.push_back(inst.physicians[static_cast<std::size_t>(p)].employment_rate);
            }
            try {
                pool.targets = compute_target_numbers(static_cast<int>(pool.duties.size()), rates, pool.attendance);
            } catch (const DegeneratePoolError&) {
                throw DegeneratePoolError("degenerate pool '" + def.id + "': every member is absent on all pool-duty days");
            }
        }
        der.pools.push_back(std::move(pool));
    }
    return der;
}

nlohmann::json derived_to_json(const DerivedSets& der) {
    using nlohmann::json;
    auto ids = [&](const auto& idx) {
        json a = json::array();
        for (int i : idx)
            a.push_back(der.activities[static_cast<std::size_t>(i)].id);
        return a;
    };
    std::vector<std::string> pnames(der.physician_index.size());
    for (const auto& [id, p] : der.physician_index)
        pnames[static_cast<std::size_t>(p)] = id;

    json j;
    j["days"] = der.T;
    json acts = json::array();
    for (const auto& a : der.activities)
        acts.push_back({{"id", a.id},
                        {"kind", a.kind == ActivityKind::Duty ? "duty" : "shift"},
                        {"day", a.day + 1},
                        {"start_min", a.start},
                        {"end_min", a.end},
                        {"holiday", a.holiday},
                        {"mandatory", a.mandatory}});
    j["instances"] = acts;
    json wk = json::array();
    for (const auto& w : der.weekends) {
        json e{{"saturday", w.saturday.str()}, {"duties", ids(w.duties)}};
        if (w.month)
            e["month"] = *w.month;
        wk.push_back(e);
    }
    j["weekends"] = wk;
    json ms = json::array();
    for (const auto& m : der.months)
        ms.push_back({{"year", m.year},
                      {"month", m.month},
                      {"we_factor", m.we_factor},
                      {"saturdays_in_period", m.saturdays_in_period},
                      {"saturdays_total", m.saturdays_total},
                      {"weekends", m.weekends}});
    j["months"] = ms;
    json hard = json::array();
    for (const auto& c : der.conflicts)
        hard.push_back({der.activities[static_cast<std::size_t>(c.first)].id, der.activities[static_cast<std::size_t>(c.second)].id});
    j["conflicts"] = hard;
    json soft = json::array();
    for (const auto& c : der.soft_conflicts)
        soft.push_back({{"pair", {der.activities[static_cast<std::size_t>(c.first)].id, der.activities[static_cast<std::size_t>(c.second)].id}},
                        {"level", c.level},
                        {"rest_hours", c.rest / 60.0},
                        {"weight", c.weight}});
    j["soft_conflicts"] = soft;
    json per = json::object();
    for (std::size_t p = 0; p < pnames.size(); ++p) {
        json e;
        std::vector<int> nq, nqs;
        for (int i = 0; i < der.num_activities(); ++i) {
            if (!der.quali[p][static_cast<std::size_t>(i)])
                nq.push_back(i);
            else if (!der.quali_soft[p][static_cast<std::size_t>(i)])
                nqs.push_back(i);
        }
        e["unqualified"] = ids(nq);
        e["soft_unqualified"] = ids(nqs);
        e["carry_hard"] = ids(der.carry_hard[p]);
        json cs = json::object();
        for (const auto& [i, w] : der.carry_soft[p])
            cs[der.activities[static_cast<std::size_t>(i)].id] = w;
        e["carry_soft"] = cs;
        e["impossible"] = ids(der.impossible[p]);
        e["past_weekends"] = der.past_weekends[p];
        per[pnames[p]] = e;
    }
    j["physicians"] = per;
    json blocks = json::array();
    for (const auto& b : der.blocks) {
        json e{{"members", ids(b.members)}, {"start_day", b.start_day + 1}, {"end_day", b.end_day + 1}};
        if (b.prev)
            e["prev"] = *b.prev;
        if (b.predecessor_in_previous_period) {
            json ps = json::array();
            for (int p : b.prev_physicians)
                ps.push_back(pnames[static_cast<std::size_t>(p)]);
            e["prev_physicians"] = ps;
        }
        blocks.push_back(e);
    }
    j["blocks"] = blocks;
    j["block_cons"] = der.block_cons;
    json pools = json::array();
    for (const auto& pool : der.pools) {
        json e{{"duties", ids(pool.duties)}};
        json tg = json::object();
        for (std::size_t k = 0; k < pool.targets.size(); ++k)
            tg[pnames[static_cast<std::size_t>(pool.physicians[k])]] = pool.targets[k];
        e["target_num"] = tg;
        pools.push_back(e);
    }
    j["pools"] = pools;
    json prev = json::object();
    for (int d = 0; d < der.num_duties; ++d) {
        if (const auto& p = der.prev_duty[static_cast<std::size_t>(d)])
            prev[der.activities[static_cast<std::size_t>(d)].id] = der.activities[static_cast<std::size_t>(*p)].id;
        if (const auto& p = der.p_prev_pp[static_cast<std::size_t>(d)])
            prev[der.activities[static_cast<std::size_t>(d)].id] = "previous period: " + pnames[static_cast<std::size_t>(*p)];
    }
    j["consecutive"] = prev;
    return j;
}

}  // namespace roster
