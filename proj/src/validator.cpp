#include "roster/validator.hpp"

#include "roster/errors.hpp"
#include "roster/rounding.hpp"

#include <algorithm>
#include <set>

namespace roster {

nlohmann::json finding_to_json(const ViolationFinding& f) {
    return {{"family", f.family},
            {"subjects", f.subjects},
            {"severity", f.severity == FindingSeverity::Hard ? "hard" : "soft"},
            {"magnitude", f.magnitude},
            {"message", f.message}};
}

AssignmentIndex index_roster(const RosterSolution& roster, const DerivedSets& der) {
    AssignmentIndex ix;
    const auto P = static_cast<std::size_t>(der.num_physicians());
    const auto A = static_cast<std::size_t>(der.num_activities());
    ix.has.assign(P, std::vector<char>(A, 0));
    ix.by_physician.assign(P, {});
    ix.owners.assign(A, {});
    for (const auto& a : roster.assignments) {
        const auto p = der.physician_index.find(a.physician);
        if (p == der.physician_index.end())
            throw DocumentError("roster references unknown physician '" + a.physician + "'");
        const auto i = der.activity_index.find(a.instance);
        if (i == der.activity_index.end())
            throw DocumentError("roster references unknown instance '" + a.instance + "'");
        auto& cell = ix.has[static_cast<std::size_t>(p->second)][static_cast<std::size_t>(i->second)];
        if (cell)
            continue;
        cell = 1;
        ix.by_physician[static_cast<std::size_t>(p->second)].push_back(i->second);
        ix.owners[static_cast<std::size_t>(i->second)].push_back(p->second);
    }
    for (auto& v : ix.by_physician)
        std::sort(v.begin(), v.end());
    for (auto& v : ix.owners)
        std::sort(v.begin(), v.end());
    return ix;
}

int shift_max_staff(const ShiftTemplate& t) {
    return t.max_staff ? *t.max_staff : std::max(static_cast<int>(t.ward_members.size()), t.desired_min_staff);
}

std::vector<std::vector<char>> weekend_attendance(const AssignmentIndex& ix, const DerivedSets& der) {
    std::vector<std::vector<char>> att(static_cast<std::size_t>(der.num_physicians()),
                                       std::vector<char>(der.weekends.size(), 0));
    for (int p = 0; p < der.num_physicians(); ++p)
        for (std::size_t w = 0; w < der.weekends.size(); ++w)
            for (int d : der.weekends[w].duties)
                if (ix.at(p, d))
                    att[static_cast<std::size_t>(p)][w] = 1;
    return att;
}

namespace {

struct Context {
    const RosterInstance& inst;
    const DerivedSets& der;
    const AssignmentIndex& ix;
    const std::string& pid(int p) const { return inst.physicians[static_cast<std::size_t>(p)].id; }
    const Activity& act(int a) const { return der.activities[static_cast<std::size_t>(a)]; }
    const std::string& aid(int a) const { return act(a).id; }
};

/// Assigned activities of a physician in rest-rule order.
std::vector<int> chronological(const Context& c, int p) {
    auto v = c.ix.by_physician[static_cast<std::size_t>(p)];
    std::sort(v.begin(), v.end(), [&](int a, int b) { return precedes(c.act(a), c.act(b)); });
    return v;
}

int pool_count(const Context& c, const DerivedPool& pool, int p) {
    int n = 0;
    for (int d : pool.duties)
        n += c.ix.at(p, d);
    return n;
}

bool months_with_weekend_duties(const DerivedSets& der, const Month& m) {
    return std::any_of(m.weekends.begin(), m.weekends.end(),
                       [&](int w) { return !der.weekends[static_cast<std::size_t>(w)].duties.empty(); });
}

}  // namespace

std::vector<ViolationFinding> validate_hard(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der) {
    const AssignmentIndex ix = index_roster(roster, der);
    const Context c{inst, der, ix};
    std::vector<ViolationFinding> out;
    auto add = [&](std::string family, std::vector<std::string> subjects, double magnitude, std::string msg) {
        out.push_back({std::move(family), std::move(subjects), FindingSeverity::Hard, magnitude, std::move(msg)});
    };
    const int P = der.num_physicians();
    const int A = der.num_activities();

    // Duty coverage.
    for (int d = 0; d < der.num_duties; ++d) {
        const auto n = ix.owners[static_cast<std::size_t>(d)].size();
        if (c.act(d).mandatory && n != 1)
            add("1", {c.aid(d)}, n == 0 ? 1.0 : static_cast<double>(n - 1),
                n == 0 ? "mandatory duty " + c.aid(d) + " is unassigned"
                       : "mandatory duty " + c.aid(d) + " is assigned to " + std::to_string(n) + " physicians");
        if (!c.act(d).mandatory && n > 1)
            add("2", {c.aid(d)}, static_cast<double>(n - 1),
                "duty " + c.aid(d) + " is assigned to " + std::to_string(n) + " physicians");
    }

    for (int p = 0; p < P; ++p) {
        const auto up = static_cast<std::size_t>(p);
        const auto& phys = inst.physicians[up];
        for (int a : der.manual[up])
            if (!ix.at(p, a))
                add(der.is_duty(a) ? "3" : "13.1", {c.pid(p), c.aid(a)}, 1,
                    "manual assignment of " + c.aid(a) + " to " + c.pid(p) + " is missing");
        for (int a : ix.by_physician[up]) {
            const Activity& act = c.act(a);
            const bool duty = der.is_duty(a);
            if (phys.planned_manually && !der.manual[up].count(a))
                add(duty ? "4" : "13.2", {c.pid(p), c.aid(a)}, 1,
                    c.pid(p) + " is planned manually but holds " + c.aid(a) + " without a manual assignment");
            if (!der.quali[up][static_cast<std::size_t>(a)])
                add(duty ? "5.1" : "5.2", {c.pid(p), c.aid(a)}, 1, c.pid(p) + " is not qualified for " + c.aid(a));
            if (der.absent[up][static_cast<std::size_t>(act.day)])
                add(duty ? "16.1" : "16.2", {c.pid(p), c.aid(a)}, 1, c.pid(p) + " is absent on the day of " + c.aid(a));
            if (der.impossible[up].count(a))
                add(duty ? "17.1" : "17.2", {c.pid(p), c.aid(a)}, 1, c.pid(p) + " marked " + c.aid(a) + " impossible");
            if (der.carry_hard[up].count(a))
                add(duty ? "42.1" : "42.2", {c.pid(p), c.aid(a)}, 1,
                    c.aid(a) + " violates rest or free days after " + c.pid(p) + "'s previous-period assignments");
            if (duty) {
                const auto& tpl = inst.duty_templates[static_cast<std::size_t>(act.template_index)];
                if (tpl.forbidden_before_absence && act.day + 1 < der.T && der.absent[up][static_cast<std::size_t>(act.day + 1)])
                    add("18", {c.pid(p), c.aid(a)}, 1, c.aid(a) + " lies on the day before an absence of " + c.pid(p));
                if (tpl.forbidden_after_absence && act.day >= 1 && der.absent[up][static_cast<std::size_t>(act.day - 1)])
                    add("19", {c.pid(p), c.aid(a)}, 1, c.aid(a) + " lies on the day after an absence of " + c.pid(p));
            } else {
                const auto& tpl = inst.shift_templates[static_cast<std::size_t>(act.template_index)];
                if (!tpl.ward_members.count(c.pid(p)))
                    add("12", {c.pid(p), c.aid(a)}, 1, c.pid(p) + " is not a member of the ward of " + c.aid(a));
            }
        }
        // Mandatory rest between any two of the physician's assignments.
        const auto seq = chronological(c, p);
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                const Activity& a = c.act(seq[i]);
                const Activity& b = c.act(seq[j]);
                const RestRule* rule = find_rest_rule(inst.rest_rules, a.template_id, b.template_id);
                if (!rule)
                    continue;
                const int gap = b.start - a.end;
                if (gap < rule->mandatory_rest) {
                    const int k = (der.is_duty(seq[i]) ? 0 : 2) + (der.is_duty(seq[j]) ? 0 : 1) + 1;
                    add("14." + std::to_string(k), {c.pid(p), a.id, b.id}, (rule->mandatory_rest - gap) / 60.0,
                        c.pid(p) + " has " + std::to_string(gap / 60.0).substr(0, 5) + " h between " + a.id + " and " + b.id +
                            ", less than the mandatory rest");
                }
            }
    }

    // Shift staffing.
    for (int s = der.num_duties; s < A; ++s) {
        const auto& tpl = inst.shift_templates[static_cast<std::size_t>(c.act(s).template_index)];
        int n = 0;
        for (int p : ix.owners[static_cast<std::size_t>(s)])
            n += tpl.ward_members.count(c.pid(p)) ? 1 : 0;
        if (n < tpl.min_staff)
            add("6", {c.aid(s)}, tpl.min_staff - n,
                c.aid(s) + " has " + std::to_string(n) + " physicians, below the minimum of " + std::to_string(tpl.min_staff));
        if (n > shift_max_staff(tpl))
            add("7", {c.aid(s)}, n - shift_max_staff(tpl),
                c.aid(s) + " has " + std::to_string(n) + " physicians, above the maximum of " +
                    std::to_string(shift_max_staff(tpl)));
    }

    // Blocks.
    for (const auto& blk : der.blocks) {
        const auto& def = inst.blocks[static_cast<std::size_t>(blk.definition)];
        const std::set<int> members(blk.members.begin(), blk.members.end());
        for (int p = 0; p < P; ++p) {
            int held = 0;
            for (int a : blk.members)
                held += ix.at(p, a);
            if (held == 0)
                continue;
            if (held != static_cast<int>(blk.members.size())) {
                add(blk.kind == BlockKind::Duty ? "20.1" : "20.2", {c.pid(p), def.id},
                    static_cast<double>(blk.members.size()) - held,
                    c.pid(p) + " holds " + std::to_string(held) + " of " + std::to_string(blk.members.size()) +
                        " instances of block " + def.id);
                continue;
            }
            const int base = blk.kind == BlockKind::Duty ? 0 : 2;
            for (int a : ix.by_physician[static_cast<std::size_t>(p)]) {
                const int day = c.act(a).day;
                const bool duty = der.is_duty(a);
                if (day > blk.end_day && day <= blk.end_day + def.free_days_after)
                    add("21." + std::to_string(base + (duty ? 1 : 2)), {c.pid(p), def.id, c.aid(a)}, 1,
                        c.aid(a) + " falls on a free day after block " + def.id + " of " + c.pid(p));
                if (day >= blk.start_day && day <= blk.end_day && !members.count(a) &&
                    ((duty && !def.allow_extra_duties_inside) || (!duty && !def.allow_extra_shifts_inside)))
                    add("22." + std::to_string(base + (duty ? 1 : 2)), {c.pid(p), def.id, c.aid(a)}, 1,
                        c.aid(a) + " is an extra assignment inside block " + def.id + " of " + c.pid(p));
            }
        }
    }

    // Pools.
    for (const auto& pool : der.pools) {
        const auto& def = inst.pools[static_cast<std::size_t>(pool.definition)];
        for (int p : pool.physicians) {
            const int n = pool_count(c, pool, p);
            if (def.exact_count && n != *def.exact_count)
                add("27", {c.pid(p), def.id}, std::abs(n - *def.exact_count),
                    c.pid(p) + " has " + std::to_string(n) + " duties in pool " + def.id + ", required exactly " +
                        std::to_string(*def.exact_count));
            if (def.max_duties && n > *def.max_duties)
                add("28", {c.pid(p), def.id}, n - *def.max_duties,
                    c.pid(p) + " has " + std::to_string(n) + " duties in pool " + def.id + ", above the maximum of " +
                        std::to_string(*def.max_duties));
            if (def.min_duties && n < *def.min_duties)
                add("30", {c.pid(p), def.id}, *def.min_duties - n,
                    c.pid(p) + " has " + std::to_string(n) + " duties in pool " + def.id + ", below the minimum of " +
                        std::to_string(*def.min_duties));
        }
        if (def.max_phy) {
            std::map<int, int> per_day;
            for (int d : pool.duties)
                for (int p : pool.physicians)
                    per_day[c.act(d).day] += ix.at(p, d);
            for (const auto& [t, n] : per_day)
                if (n > *def.max_phy)
                    add("32", {def.id, der.days[static_cast<std::size_t>(t)].str()}, n - *def.max_phy,
                        "pool " + def.id + " has " + std::to_string(n) + " assigned duties on " +
                            der.days[static_cast<std::size_t>(t)].str() + ", above " + std::to_string(*def.max_phy));
        }
    }

    // Weekends.
    const auto& wp = inst.weekend_policy;
    const auto att = weekend_attendance(ix, der);
    for (int p = 0; p < P; ++p) {
        const auto& row = att[static_cast<std::size_t>(p)];
        for (const auto& m : der.months) {
            if (!months_with_weekend_duties(der, m))
                continue;
            int n = 0;
            for (int w : m.weekends)
                n += row[static_cast<std::size_t>(w)];
            const double size = static_cast<double>(m.weekends.size());
            const std::string mid = std::to_string(m.year) + "-" + (m.month < 10 ? "0" : "") + std::to_string(m.month);
            if (wp.max_we) {
                const int cap = round_half_up(*wp.max_we * m.we_factor);
                if (n > cap)
                    add("36", {c.pid(p), mid}, n - cap,
                        c.pid(p) + " works " + std::to_string(n) + " weekends in " + mid + ", above " + std::to_string(cap));
            }
            if (wp.min_free_we) {
                const int cap = round_half_up(size - *wp.min_free_we * m.we_factor);
                if (n > cap)
                    add("38", {c.pid(p), mid}, n - cap,
                        c.pid(p) + " works " + std::to_string(n) + " weekends in " + mid + ", leaving too few free");
            }
        }
        if (wp.cons_we) {
            const int cons = *wp.cons_we;
            const auto nw = row.size();
            for (std::size_t i = 0; i + static_cast<std::size_t>(cons) < nw; ++i) {
                int n = 0;
                for (std::size_t k = i; k <= i + static_cast<std::size_t>(cons); ++k)
                    n += row[k];
                if (n > cons)
                    add("41.1", {c.pid(p), der.weekends[i].saturday.str()}, n - cons,
                        c.pid(p) + " works more than " + std::to_string(cons) + " consecutive weekends from " +
                            der.weekends[i].saturday.str());
            }
            const int past = std::min(der.past_weekends[static_cast<std::size_t>(p)], cons);
            if (past > 0) {
                int n = 0;
                for (std::size_t k = 0; k < nw && k <= static_cast<std::size_t>(cons - past); ++k)
                    n += row[k];
                if (n > cons - past)
                    add("41.2", {c.pid(p)}, n - (cons - past),
                        c.pid(p) + " exceeds the consecutive weekend limit across the period start");
            }
        }
    }
    return out;
}

SoftTally recount_soft(const RosterSolution& roster, const RosterInstance& inst, const DerivedSets& der,
                       const WeightConfig& w) {
    const AssignmentIndex ix = index_roster(roster, der);
    const Context c{inst, der, ix};
    SoftTally t;
    auto contrib = [&](const std::string& key, double v) {
        t.components[key] += v;
        t.objective += v;
    };
    auto soft = [&](std::string family, std::vector<std::string> subjects, double magnitude, std::string msg) {
        t.findings.push_back({std::move(family), std::move(subjects), FindingSeverity::Soft, magnitude, std::move(msg)});
    };
    const int P = der.num_physicians();

    // Assignment coefficients.
    for (int p = 0; p < P; ++p) {
        const auto up = static_cast<std::size_t>(p);
        for (int a : ix.by_physician[up]) {
            const bool duty = der.is_duty(a);
            if (duty && !c.act(a).mandatory)
                contrib("coverage", w.duty_coverage);
            if (!der.quali_soft[up][static_cast<std::size_t>(a)]) {
                contrib("soft_qualification", -(duty ? w.duty_soft_qualification : w.shift_soft_qualification));
                ++t.soft_qualification_hits;
            }
            if (auto it = der.carry_soft[up].find(a); it != der.carry_soft[up].end()) {
                contrib("carryover_rest", -it->second);
                ++t.carryover_rest_hits;
            }
            if (auto it = der.preference_score[up].find(a); it != der.preference_score[up].end())
                contrib("preferences", it->second);
        }
    }
    for (int d = 0; d < der.num_duties; ++d)
        if (ix.owners[static_cast<std::size_t>(d)].empty())
            ++t.unassigned_duties;

    // Shift staffing above the minimum.
    for (int s = der.num_duties; s < der.num_activities(); ++s) {
        const auto& tpl = inst.shift_templates[static_cast<std::size_t>(c.act(s).template_index)];
        StaffingCount sc{c.aid(s), 0, tpl.min_staff, tpl.desired_min_staff, shift_max_staff(tpl)};
        for (int p : ix.owners[static_cast<std::size_t>(s)])
            sc.assigned += tpl.ward_members.count(c.pid(p)) ? 1 : 0;
        const int ydes = std::max(0, std::min(sc.assigned - sc.min, sc.desired - sc.min));
        const int ymax = std::max(0, sc.assigned - sc.desired);
        contrib("staffing", ydes * tpl.desired_weight.value_or(w.shift_desired_staffing) + ymax * w.shift_above_desired);
        if (sc.assigned < sc.desired)
            soft("9", {c.aid(s)}, sc.desired - sc.assigned,
                 c.aid(s) + " is staffed with " + std::to_string(sc.assigned) + ", below the desired " +
                     std::to_string(sc.desired));
        t.staffing.push_back(sc);
    }

    // Desired rest between a physician's own assignments.
    for (int p = 0; p < P; ++p) {
        const auto seq = chronological(c, p);
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                const Activity& a = c.act(seq[i]);
                const Activity& b = c.act(seq[j]);
                const RestRule* rule = find_rest_rule(inst.rest_rules, a.template_id, b.template_id);
                if (!rule)
                    continue;
                const int gap = b.start - a.end;
                if (gap < rule->mandatory_rest)
                    continue;
                int level = -1;
                for (std::size_t k = 0; k < rule->desired_levels.size(); ++k)
                    if (gap < rule->desired_levels[k].rest &&
                        (level < 0 || rule->desired_levels[k].rest < rule->desired_levels[static_cast<std::size_t>(level)].rest))
                        level = static_cast<int>(k);
                if (level < 0)
                    continue;
                const int rest = rule->desired_levels[static_cast<std::size_t>(level)].rest;
                contrib("desired_rest", -rest_level_weight(*rule, level, w));
                ++t.desired_rest_by_level[rest];
                const int k = (der.is_duty(seq[i]) ? 0 : 2) + (der.is_duty(seq[j]) ? 0 : 1) + 1;
                soft("15." + std::to_string(k), {c.pid(p), a.id, b.id}, gap / 60.0,
                     c.pid(p) + " rests less than the desired " + std::to_string(rest / 60) + " h between " + a.id + " and " +
                         b.id);
            }
    }

    // Consecutive duties.
    for (int d = 0; d < der.num_duties; ++d) {
        const auto& prev = der.prev_duty[static_cast<std::size_t>(d)];
        const auto& boundary = der.p_prev_pp[static_cast<std::size_t>(d)];
        for (int p : ix.owners[static_cast<std::size_t>(d)]) {
            if ((prev && ix.at(p, *prev)) || (boundary && *boundary == p)) {
                contrib("consecutive_duties", w.duty_consecutive);
                ++t.consecutive_duty_pairs;
            }
        }
    }

    // Blocks: continuity and consecutive runs.
    auto holds_block = [&](int p, const DerivedBlock& blk) {
        return std::all_of(blk.members.begin(), blk.members.end(), [&](int a) { return ix.at(p, a); });
    };
    for (const auto& blk : der.blocks) {
        if (blk.kind != BlockKind::Shift)
            continue;
        for (int p = 0; p < P; ++p) {
            if (!holds_block(p, blk))
                continue;
            const bool cont = (blk.prev && holds_block(p, der.blocks[static_cast<std::size_t>(*blk.prev)])) ||
                              (blk.predecessor_in_previous_period && blk.prev_physicians.count(p));
            if (cont) {
                contrib("block_continuity", blk.consecutive_weight);
                ++t.consecutive_block_pairs;
            }
        }
    }
    for (std::size_t j = 0; j < der.block_cons.size(); ++j) {
        const auto& window = der.block_cons[j];
        bool hit = false;
        for (int p = 0; p < P && !hit; ++p)
            hit = std::all_of(window.begin(), window.end(),
                              [&](int b) { return holds_block(p, der.blocks[static_cast<std::size_t>(b)]); });
        if (hit) {
            contrib("max_consecutive_blocks", -w.max_consecutive_blocks);
            ++t.max_consecutive_block_violations;
            soft("24", {std::to_string(j + 1)}, 1, "a physician holds every block of consecutive run " + std::to_string(j + 1));
        }
    }

    // Pools.
    for (const auto& pool : der.pools) {
        const auto& def = inst.pools[static_cast<std::size_t>(pool.definition)];
        for (std::size_t k = 0; k < pool.physicians.size(); ++k) {
            const int p = pool.physicians[k];
            const int n = pool_count(c, pool, p);
            if (def.desired_max_duties && n > *def.desired_max_duties) {
                const int v = n - *def.desired_max_duties;
                contrib("pool_max", -v * def.desired_max_weight.value_or(w.pool_max));
                t.pool_max_excess += v;
                soft("29", {c.pid(p), def.id}, v, c.pid(p) + " exceeds the desired maximum of pool " + def.id);
            }
            if (def.desired_min_duties && n < *def.desired_min_duties) {
                const int v = *def.desired_min_duties - n;
                contrib("pool_min", -v * def.desired_min_weight.value_or(w.pool_min));
                t.pool_min_shortfall += v;
                soft("31", {c.pid(p), def.id}, v, c.pid(p) + " falls short of the desired minimum of pool " + def.id);
            }
            if (def.fair_distribution) {
                const int lo = floor_tol(pool.targets[k]);
                const int hi = ceil_tol(pool.targets[k]);
                if (n < lo) {
                    contrib("fairness", -(lo - n) * def.fairness_penalty_down.value_or(w.fair_down));
                    t.fair_below += lo - n;
                    soft("34", {c.pid(p), def.id}, lo - n, c.pid(p) + " is below the fair share of pool " + def.id);
                }
                if (n > hi) {
                    contrib("fairness", -(n - hi) * def.fairness_penalty_up.value_or(w.fair_up));
                    t.fair_above += n - hi;
                    soft("35", {c.pid(p), def.id}, n - hi, c.pid(p) + " is above the fair share of pool " + def.id);
                }
            }
        }
        if (def.desired_max_phy) {
            std::map<int, int> per_day;
            for (int d : pool.duties)
                for (int p : pool.physicians)
                    per_day[c.act(d).day] += ix.at(p, d);
            for (const auto& [day, n] : per_day)
                if (n > *def.desired_max_phy) {
                    const int v = n - *def.desired_max_phy;
                    contrib("pool_max_phy", -v * def.desired_max_phy_weight.value_or(w.pool_max_phy));
                    t.pool_max_phy_excess += v;
                    soft("33", {def.id, der.days[static_cast<std::size_t>(day)].str()}, v,
                         "pool " + def.id + " exceeds its desired daily maximum");
                }
        }
    }

    // Weekends.
    const auto& wp = inst.weekend_policy;
    const auto att = weekend_attendance(ix, der);
    const double c_pref = wp.preference_violation_weight.value_or(w.weekend_preference);
    for (int p = 0; p < P; ++p) {
        const auto pref = inst.physicians[static_cast<std::size_t>(p)].weekend_preference;
        if (pref != WeekendPreference::None)
            for (const auto& we : der.weekends) {
                int n = 0;
                for (int d : we.duties)
                    n += ix.at(p, d);
                const int v = pref == WeekendPreference::OneDuty ? std::max(0, n - 1) : (n == 1 ? 1 : 0);
                if (v > 0) {
                    contrib("weekend_preference", -v * c_pref);
                    t.weekend_preference_violations += v;
                    soft(pref == WeekendPreference::OneDuty ? "43.1" : "43.2", {c.pid(p), we.saturday.str()}, v,
                         c.pid(p) + "'s weekend preference is not met on " + we.saturday.str());
                }
            }
        for (const auto& m : der.months) {
            if (!months_with_weekend_duties(der, m))
                continue;
            int n = 0;
            for (int wi : m.weekends)
                n += att[static_cast<std::size_t>(p)][static_cast<std::size_t>(wi)];
            const double size = static_cast<double>(m.weekends.size());
            if (wp.des_max_we) {
                const int v = std::max(0, n - round_half_up(*wp.des_max_we * m.we_factor));
                if (v > 0) {
                    contrib("max_weekends", -v * wp.des_max_we_weight.value_or(w.max_weekends));
                    t.max_weekend_excess += v;
                    soft("37", {c.pid(p)}, v, c.pid(p) + " works more weekends than desired");
                }
            }
            if (wp.des_min_free_we) {
                const int v = std::max(0, n - round_half_up(size - *wp.des_min_free_we * m.we_factor));
                if (v > 0) {
                    contrib("free_weekends", -v * wp.des_min_free_we_weight.value_or(w.free_weekends));
                    t.free_weekend_shortfall += v;
                    soft("39", {c.pid(p)}, v, c.pid(p) + " has fewer free weekends than desired");
                }
            }
        }
    }
    return t;
}

}  // namespace roster
