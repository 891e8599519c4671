#include "roster/build_model.hpp"

#include "roster/errors.hpp"
#include "roster/rounding.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace roster {

std::string var_name(const std::string& base, const std::vector<std::string>& index) {
    std::string s = base + "[";
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (i)
            s += ',';
        s += index[i];
    }
    return s + "]";
}

std::string x_name(const RosterInstance& inst, const DerivedSets& der, int p, int a) {
    return var_name(der.is_duty(a) ? "x" : "y",
                    {inst.physicians[static_cast<std::size_t>(p)].id, der.activities[static_cast<std::size_t>(a)].id});
}

int effective_max_staff(const ShiftTemplate& t) {
    if (t.max_staff)
        return *t.max_staff;
    return std::max(static_cast<int>(t.ward_members.size()), t.desired_min_staff);
}

std::string month_key(const Month& m) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", m.year, m.month);
    return buf;
}

bool weekend_families_active(const RosterInstance& inst) {
    const auto& wp = inst.weekend_policy;
    if (wp.max_we || wp.des_max_we || wp.min_free_we || wp.des_min_free_we || wp.cons_we)
        return true;
    return std::any_of(inst.physicians.begin(), inst.physicians.end(),
                       [](const auto& p) { return p.weekend_preference != WeekendPreference::None; });
}

std::vector<std::string> find_build_clashes(const RosterInstance& inst, const DerivedSets& der) {
    std::vector<std::string> out;
    const int P = der.num_physicians();
    auto pid = [&](int p) { return inst.physicians[static_cast<std::size_t>(p)].id; };
    auto aid = [&](int a) { return der.activities[static_cast<std::size_t>(a)].id; };
    for (int p = 0; p < P; ++p) {
        const auto up = static_cast<std::size_t>(p);
        for (int a : der.manual[up]) {
            const auto& act = der.activities[static_cast<std::size_t>(a)];
            const std::string who = "manual assignment of " + aid(a) + " to " + pid(p) + ": ";
            if (!der.quali[up][static_cast<std::size_t>(a)])
                out.push_back(who + "physician lacks a required qualification or holds an excluded one");
            if (der.absent[up][static_cast<std::size_t>(act.day)])
                out.push_back(who + "physician is absent that day");
            if (der.impossible[up].count(a))
                out.push_back(who + "physician marked the instance impossible");
            if (der.carry_hard[up].count(a))
                out.push_back(who + "violates rest or free days after the previous period");
            if (der.is_duty(a)) {
                const auto& tpl = inst.duty_templates[static_cast<std::size_t>(act.template_index)];
                if (tpl.forbidden_before_absence && act.day + 1 < der.T && der.absent[up][static_cast<std::size_t>(act.day + 1)])
                    out.push_back(who + "duty is forbidden on the day before an absence");
                if (tpl.forbidden_after_absence && act.day >= 1 && der.absent[up][static_cast<std::size_t>(act.day - 1)])
                    out.push_back(who + "duty is forbidden on the day after an absence");
            } else {
                const auto& tpl = inst.shift_templates[static_cast<std::size_t>(act.template_index)];
                if (!tpl.ward_members.count(pid(p)))
                    out.push_back(who + "physician is not a member of the ward");
            }
        }
    }
    for (int a = 0; a < der.num_duties; ++a)
        if (der.manual_owners[static_cast<std::size_t>(a)].size() > 1)
            out.push_back("duty " + aid(a) + " is manually assigned to several physicians");
    for (const auto& c : der.conflicts)
        for (int p = 0; p < P; ++p) {
            const auto& m = der.manual[static_cast<std::size_t>(p)];
            if (m.count(c.first) && m.count(c.second))
                out.push_back("manual assignments of " + aid(c.first) + " and " + aid(c.second) + " to " + pid(p) +
                              " violate a mandatory rest time");
        }
    return out;
}

namespace {

class Builder {
public:
    Builder(const RosterInstance& inst, const DerivedSets& der, const WeightConfig& w)
        : inst_(inst), der_(der), w_(w), P_(der.num_physicians()), A_(der.num_activities()) {}

    CanonicalModel run() {
        decision_variables();
        duty_assignment();
        qualifications();
        shift_staffing();
        rest_times();
        absences();
        blocks();
        consecutive_duties();
        pools();
        weekends();
        previous_period();
        return std::move(m_);
    }

private:
    using Terms = std::vector<Term>;

    const std::string& pid(int p) const { return inst_.physicians[static_cast<std::size_t>(p)].id; }
    const std::string& aid(int a) const { return der_.activities[static_cast<std::size_t>(a)].id; }
    const Activity& act(int a) const { return der_.activities[static_cast<std::size_t>(a)]; }
    int xv(int p, int a) const { return xvar_[static_cast<std::size_t>(p) * static_cast<std::size_t>(A_) + static_cast<std::size_t>(a)]; }

    void row(const std::string& tag, const std::vector<std::string>& index, Terms terms, Sense sense, double rhs) {
        m_.add_row(var_name("c" + tag, index), std::move(terms), sense, rhs, tag);
    }
    void fix(const std::string& tag, int p, int a, double value) {
        row(tag, {pid(p), aid(a)}, {{xv(p, a), 1}}, Sense::EQ, value);
    }
    // Duty/shift combination suffix: .1 duty-duty, .2 duty-shift, .3 shift-duty, .4 shift-shift.
    std::string combo(const std::string& family, int a, int b) const {
        const int k = (der_.is_duty(a) ? 0 : 2) + (der_.is_duty(b) ? 0 : 1) + 1;
        return family + "." + std::to_string(k);
    }

    void decision_variables() {
        xvar_.assign(static_cast<std::size_t>(P_) * static_cast<std::size_t>(A_), -1);
        for (int p = 0; p < P_; ++p) {
            const auto up = static_cast<std::size_t>(p);
            for (int a = 0; a < A_; ++a) {
                double c = 0;
                if (der_.is_duty(a)) {
                    if (!act(a).mandatory)
                        c += w_.duty_coverage;
                    if (!der_.quali_soft[up][static_cast<std::size_t>(a)])
                        c -= w_.duty_soft_qualification;
                } else if (!der_.quali_soft[up][static_cast<std::size_t>(a)]) {
                    c -= w_.shift_soft_qualification;
                }
                if (auto it = der_.carry_soft[up].find(a); it != der_.carry_soft[up].end())
                    c -= it->second;
                if (auto it = der_.preference_score[up].find(a); it != der_.preference_score[up].end())
                    c += it->second;
                xvar_[up * static_cast<std::size_t>(A_) + static_cast<std::size_t>(a)] =
                    m_.add_var(x_name(inst_, der_, p, a), VarType::Binary, 0, 1, c, VarRole::Decision);
            }
        }
    }

    void duty_assignment() {
        for (int d = 0; d < der_.num_duties; ++d) {
            Terms t;
            for (int p = 0; p < P_; ++p)
                t.push_back({xv(p, d), 1});
            if (act(d).mandatory)
                row("1", {aid(d)}, std::move(t), Sense::EQ, 1);
            else
                row("2", {aid(d)}, std::move(t), Sense::LE, 1);
        }
        for (int p = 0; p < P_; ++p) {
            const auto& man = der_.manual[static_cast<std::size_t>(p)];
            for (int a : man)
                fix(der_.is_duty(a) ? "3" : "13.1", p, a, 1);
            if (!inst_.physicians[static_cast<std::size_t>(p)].planned_manually)
                continue;
            for (int a = 0; a < A_; ++a)
                if (!man.count(a))
                    fix(der_.is_duty(a) ? "4" : "13.2", p, a, 0);
        }
    }

    void qualifications() {
        for (int p = 0; p < P_; ++p)
            for (int a = 0; a < A_; ++a)
                if (!der_.quali[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)])
                    fix(der_.is_duty(a) ? "5.1" : "5.2", p, a, 0);
    }

    void shift_staffing() {
        for (int s = der_.num_duties; s < A_; ++s) {
            const auto& tpl = inst_.shift_templates[static_cast<std::size_t>(act(s).template_index)];
            const int mn = tpl.min_staff;
            const int des = tpl.desired_min_staff;
            const int mx = effective_max_staff(tpl);
            Terms staff;
            for (int p = 0; p < P_; ++p)
                if (tpl.ward_members.count(pid(p)))
                    staff.push_back({xv(p, s), 1});
            const double c_des = tpl.desired_weight.value_or(w_.shift_desired_staffing);
            const int ydes = m_.add_var(var_name("yDes", {aid(s)}), VarType::Integer, 0, des - mn, c_des, VarRole::Auxiliary);
            const int ymax = m_.add_var(var_name("yMax", {aid(s)}), VarType::Integer, 0, mx - des, w_.shift_above_desired,
                                        VarRole::Auxiliary);
            const int yaux = m_.add_var(var_name("yAux", {aid(s)}), VarType::Binary, 0, 1, 0, VarRole::Auxiliary);
            row("6", {aid(s)}, staff, Sense::GE, mn);
            row("7", {aid(s)}, staff, Sense::LE, mx);
            Terms link{{ydes, 1}, {ymax, 1}};
            for (const auto& t : staff)
                link.push_back({t.var, -1});
            row("8", {aid(s)}, std::move(link), Sense::EQ, -mn);
            row("9", {aid(s)}, {{ydes, 1}}, Sense::LE, des - mn);
            row("10", {aid(s)}, {{ymax, 1}}, Sense::LE, mx - des);
            Terms g1{{ydes, 1}};
            if (des - mn != 0)
                g1.insert(g1.begin(), {yaux, static_cast<double>(des - mn)});
            row("11.1", {aid(s)}, std::move(g1), Sense::GE, des - mn);
            Terms g2{{ymax, 1}};
            if (mx != 0)
                g2.push_back({yaux, static_cast<double>(mx)});
            row("11.2", {aid(s)}, std::move(g2), Sense::LE, mx);
            for (int p = 0; p < P_; ++p)
                if (!tpl.ward_members.count(pid(p)))
                    fix("12", p, s, 0);
        }
    }

    void rest_times() {
        for (const auto& c : der_.conflicts)
            for (int p = 0; p < P_; ++p)
                row(combo("14", c.first, c.second), {pid(p), aid(c.first), aid(c.second)},
                    {{xv(p, c.first), 1}, {xv(p, c.second), 1}}, Sense::LE, 1);
        for (const auto& c : der_.soft_conflicts)
            for (int p = 0; p < P_; ++p) {
                const int v = m_.add_var(var_name("vioRest", {pid(p), aid(c.first), aid(c.second)}), VarType::Binary, 0, 1,
                                         -c.weight, VarRole::Auxiliary);
                row(combo("15", c.first, c.second), {pid(p), aid(c.first), aid(c.second)},
                    {{xv(p, c.first), 1}, {xv(p, c.second), 1}, {v, -1}}, Sense::LE, 1);
            }
    }

    void absences() {
        for (int p = 0; p < P_; ++p) {
            const auto up = static_cast<std::size_t>(p);
            for (int t = 0; t < der_.T; ++t) {
                if (!der_.absent[up][static_cast<std::size_t>(t)])
                    continue;
                const std::string day = der_.days[static_cast<std::size_t>(t)].str();
                Terms d, s;
                for (int a : der_.duties_on_day[static_cast<std::size_t>(t)])
                    d.push_back({xv(p, a), 1});
                for (int a : der_.shifts_on_day[static_cast<std::size_t>(t)])
                    s.push_back({xv(p, a), 1});
                if (!d.empty())
                    row("16.1", {pid(p), day}, std::move(d), Sense::EQ, 0);
                if (!s.empty())
                    row("16.2", {pid(p), day}, std::move(s), Sense::EQ, 0);
                Terms before, after;
                if (t >= 1)
                    for (int a : der_.duties_on_day[static_cast<std::size_t>(t - 1)])
                        if (duty_template(a).forbidden_before_absence)
                            before.push_back({xv(p, a), 1});
                if (t + 1 < der_.T)
                    for (int a : der_.duties_on_day[static_cast<std::size_t>(t + 1)])
                        if (duty_template(a).forbidden_after_absence)
                            after.push_back({xv(p, a), 1});
                if (!before.empty())
                    row("18", {pid(p), day}, std::move(before), Sense::EQ, 0);
                if (!after.empty())
                    row("19", {pid(p), day}, std::move(after), Sense::EQ, 0);
            }
            for (int a : der_.impossible[up])
                fix(der_.is_duty(a) ? "17.1" : "17.2", p, a, 0);
        }
    }

    const DutyTemplate& duty_template(int a) const {
        return inst_.duty_templates[static_cast<std::size_t>(act(a).template_index)];
    }

    void blocks() {
        const auto nb = der_.blocks.size();
        blk_.assign(nb, std::vector<int>(static_cast<std::size_t>(P_), -1));
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& blk = der_.blocks[b];
            const auto& def = inst_.blocks[static_cast<std::size_t>(blk.definition)];
            const bool duty = blk.kind == BlockKind::Duty;
            for (int p = 0; p < P_; ++p) {
                const int v = m_.add_var(var_name(duty ? "xBlk" : "yBlk", {pid(p), def.id}), VarType::Binary, 0, 1, 0,
                                         VarRole::Auxiliary);
                blk_[b][static_cast<std::size_t>(p)] = v;
                for (int a : blk.members)
                    row(duty ? "20.1" : "20.2", {pid(p), def.id, aid(a)}, {{xv(p, a), 1}, {v, -1}}, Sense::EQ, 0);
            }
            // Free days after the block; days past the period end are skipped.
            for (int delta = 1; delta <= def.free_days_after; ++delta) {
                const int t = blk.end_day + delta;
                if (t >= der_.T)
                    break;
                for (int p = 0; p < P_; ++p) {
                    const int v = blk_[b][static_cast<std::size_t>(p)];
                    for (int a : der_.duties_on_day[static_cast<std::size_t>(t)])
                        row(duty ? "21.1" : "21.3", {pid(p), def.id, aid(a)}, {{xv(p, a), 1}, {v, 1}}, Sense::LE, 1);
                    for (int a : der_.shifts_on_day[static_cast<std::size_t>(t)])
                        row(duty ? "21.2" : "21.4", {pid(p), def.id, aid(a)}, {{xv(p, a), 1}, {v, 1}}, Sense::LE, 1);
                }
            }
            const std::set<int> members(blk.members.begin(), blk.members.end());
            for (int t = blk.start_day; t <= blk.end_day; ++t)
                for (int p = 0; p < P_; ++p) {
                    const int v = blk_[b][static_cast<std::size_t>(p)];
                    if (!def.allow_extra_duties_inside)
                        for (int a : der_.duties_on_day[static_cast<std::size_t>(t)])
                            if (!members.count(a))
                                row(duty ? "22.1" : "22.3", {pid(p), def.id, aid(a)}, {{xv(p, a), 1}, {v, 1}}, Sense::LE, 1);
                    if (!def.allow_extra_shifts_inside)
                        for (int a : der_.shifts_on_day[static_cast<std::size_t>(t)])
                            if (!members.count(a))
                                row(duty ? "22.2" : "22.4", {pid(p), def.id, aid(a)}, {{xv(p, a), 1}, {v, 1}}, Sense::LE, 1);
                }
        }
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& blk = der_.blocks[b];
            if (blk.kind != BlockKind::Shift || (!blk.prev && !blk.predecessor_in_previous_period))
                continue;
            const auto& id = inst_.blocks[static_cast<std::size_t>(blk.definition)].id;
            for (int p = 0; p < P_; ++p) {
                const int v = m_.add_var(var_name("yBlkCons", {pid(p), id}), VarType::Binary, 0, 1, blk.consecutive_weight,
                                         VarRole::Auxiliary);
                row("23.1", {pid(p), id}, {{v, 1}, {blk_[b][static_cast<std::size_t>(p)], -1}}, Sense::LE, 0);
                if (blk.prev)
                    row("23.2", {pid(p), id},
                        {{v, 1}, {blk_[static_cast<std::size_t>(*blk.prev)][static_cast<std::size_t>(p)], -1}}, Sense::LE, 0);
                if (blk.predecessor_in_previous_period && !blk.prev_physicians.count(p))
                    row("23.3", {pid(p), id}, {{v, 1}}, Sense::EQ, 0);
            }
        }
        for (std::size_t j = 0; j < der_.block_cons.size(); ++j) {
            const auto& window = der_.block_cons[j];
            const std::string jid = std::to_string(j + 1);
            const int v = m_.add_var(var_name("vioMaxConsB", {jid}), VarType::Binary, 0, 1, -w_.max_consecutive_blocks,
                                     VarRole::Auxiliary);
            for (int p = 0; p < P_; ++p) {
                Terms t;
                for (int b : window)
                    t.push_back({blk_[static_cast<std::size_t>(b)][static_cast<std::size_t>(p)], 1});
                t.push_back({v, -1});
                row("24", {pid(p), jid}, std::move(t), Sense::LE, static_cast<double>(window.size()) - 1);
            }
        }
    }

    void consecutive_duties() {
        for (int d = 0; d < der_.num_duties; ++d) {
            const auto& prev = der_.prev_duty[static_cast<std::size_t>(d)];
            const auto& boundary = der_.p_prev_pp[static_cast<std::size_t>(d)];
            if (!prev && !boundary)
                continue;
            for (int p = 0; p < P_; ++p) {
                const int v = m_.add_var(var_name("xCons", {pid(p), aid(d)}), VarType::Binary, 0, 1, w_.duty_consecutive,
                                         VarRole::Auxiliary);
                row("25.1", {pid(p), aid(d)}, {{v, 1}, {xv(p, d), -1}}, Sense::LE, 0);
                if (prev)
                    row("25.2", {pid(p), aid(d)}, {{v, 1}, {xv(p, *prev), -1}}, Sense::LE, 0);
                if (boundary && *boundary != p)
                    row("25.3", {pid(p), aid(d)}, {{v, 1}}, Sense::EQ, 0);
            }
        }
    }

    void pools() {
        for (const auto& pool : der_.pools) {
            const auto& def = inst_.pools[static_cast<std::size_t>(pool.definition)];
            const int n = static_cast<int>(pool.duties.size());
            for (std::size_t k = 0; k < pool.physicians.size(); ++k) {
                const int p = pool.physicians[k];
                const std::vector<std::string> idx{pid(p), def.id};
                Terms sum;
                for (int d : pool.duties)
                    sum.push_back({xv(p, d), 1});
                if (def.exact_count)
                    row("27", idx, sum, Sense::EQ, *def.exact_count);
                if (def.max_duties)
                    row("28", idx, sum, Sense::LE, *def.max_duties);
                if (def.desired_max_duties) {
                    const int v = m_.add_var(var_name("vioMaxD", idx), VarType::Integer, 0, n,
                                             -def.desired_max_weight.value_or(w_.pool_max), VarRole::Auxiliary);
                    Terms t = sum;
                    t.push_back({v, -1});
                    row("29", idx, std::move(t), Sense::LE, *def.desired_max_duties);
                }
                if (def.min_duties)
                    row("30", idx, sum, Sense::GE, *def.min_duties);
                if (def.desired_min_duties) {
                    const int v = m_.add_var(var_name("vioMinD", idx), VarType::Integer, 0, std::max(0, *def.desired_min_duties),
                                             -def.desired_min_weight.value_or(w_.pool_min), VarRole::Auxiliary);
                    Terms t = sum;
                    t.push_back({v, 1});
                    row("31", idx, std::move(t), Sense::GE, *def.desired_min_duties);
                }
                if (def.fair_distribution) {
                    const double target = pool.targets[k];
                    const int lo = floor_tol(target);
                    const int hi = ceil_tol(target);
                    const int down = m_.add_var(var_name("vioDown", idx), VarType::Integer, 0, std::max(0, lo),
                                                -def.fairness_penalty_down.value_or(w_.fair_down), VarRole::Auxiliary);
                    const int up = m_.add_var(var_name("vioUp", idx), VarType::Integer, 0, n,
                                              -def.fairness_penalty_up.value_or(w_.fair_up), VarRole::Auxiliary);
                    Terms t1 = sum;
                    t1.push_back({down, 1});
                    row("34", idx, std::move(t1), Sense::GE, lo);
                    Terms t2 = sum;
                    t2.push_back({up, -1});
                    row("35", idx, std::move(t2), Sense::LE, hi);
                }
            }
            if (!def.max_phy && !def.desired_max_phy)
                continue;
            for (int t = 0; t < der_.T; ++t) {
                std::vector<int> today;
                for (int d : pool.duties)
                    if (act(d).day == t)
                        today.push_back(d);
                if (today.empty())
                    continue;
                const std::string day = der_.days[static_cast<std::size_t>(t)].str();
                Terms sum;
                for (int d : today)
                    for (int p : pool.physicians)
                        sum.push_back({xv(p, d), 1});
                if (def.max_phy)
                    row("32", {def.id, day}, sum, Sense::LE, *def.max_phy);
                if (def.desired_max_phy) {
                    const int v = m_.add_var(var_name("vioMaxPhy", {def.id, day}), VarType::Integer, 0,
                                             static_cast<double>(today.size()),
                                             -def.desired_max_phy_weight.value_or(w_.pool_max_phy), VarRole::Auxiliary);
                    sum.push_back({v, -1});
                    row("33", {def.id, day}, std::move(sum), Sense::LE, *def.desired_max_phy);
                }
            }
        }
    }

    void weekends() {
        if (!weekend_families_active(inst_))
            return;
        const auto& wp = inst_.weekend_policy;
        const auto nw = der_.weekends.size();
        std::vector<std::vector<int>> att(nw, std::vector<int>(static_cast<std::size_t>(P_), -1));
        const double c_pref = wp.preference_violation_weight.value_or(w_.weekend_preference);
        for (std::size_t w = 0; w < nw; ++w) {
            const auto& we = der_.weekends[w];
            if (we.duties.empty())
                continue;
            const std::string wid = we.saturday.str();
            for (int p = 0; p < P_; ++p) {
                const int v = m_.add_var(var_name("weAtt", {pid(p), wid}), VarType::Binary, 0, 1, 0, VarRole::Auxiliary);
                att[w][static_cast<std::size_t>(p)] = v;
                Terms sum;
                for (int d : we.duties) {
                    row("40.1", {pid(p), wid, aid(d)}, {{v, 1}, {xv(p, d), -1}}, Sense::GE, 0);
                    sum.push_back({xv(p, d), -1});
                }
                Terms t = sum;
                t.insert(t.begin(), {v, 1});
                row("40.2", {pid(p), wid}, std::move(t), Sense::LE, 0);
                const auto pref = inst_.physicians[static_cast<std::size_t>(p)].weekend_preference;
                if (pref == WeekendPreference::OneDuty) {
                    const int vio = m_.add_var(var_name("vioWePref", {pid(p), wid}), VarType::Integer, 0,
                                               static_cast<double>(we.duties.size()), -c_pref, VarRole::Auxiliary);
                    Terms r = sum;
                    r.insert(r.begin(), {{v, 1}, {vio, 1}});
                    row("43.1", {pid(p), wid}, std::move(r), Sense::GE, 0);
                } else if (pref == WeekendPreference::MultipleDuties) {
                    const int vio = m_.add_var(var_name("vioWePref", {pid(p), wid}), VarType::Integer, 0, 1, -c_pref,
                                               VarRole::Auxiliary);
                    Terms r = sum;
                    r.insert(r.begin(), {{v, 2}, {vio, -1}});
                    row("43.2", {pid(p), wid}, std::move(r), Sense::LE, 0);
                }
            }
        }
        auto window_terms = [&](int p, std::size_t from, std::size_t to) {
            Terms t;
            for (std::size_t w = from; w <= to && w < nw; ++w)
                if (const int v = att[w][static_cast<std::size_t>(p)]; v >= 0)
                    t.push_back({v, 1});
            return t;
        };
        if (wp.cons_we) {
            const auto c = static_cast<std::size_t>(*wp.cons_we);
            for (int p = 0; p < P_; ++p) {
                for (std::size_t i = 0; i + c < nw; ++i) {
                    Terms t = window_terms(p, i, i + c);
                    if (!t.empty())
                        row("41.1", {pid(p), der_.weekends[i].saturday.str()}, std::move(t), Sense::LE, *wp.cons_we);
                }
                const int past = std::min(der_.past_weekends[static_cast<std::size_t>(p)], *wp.cons_we);
                if (past > 0 && nw > 0) {
                    Terms t = window_terms(p, 0, static_cast<std::size_t>(*wp.cons_we - past));
                    if (!t.empty())
                        row("41.2", {pid(p)}, std::move(t), Sense::LE, *wp.cons_we - past);
                }
            }
        }
        for (const auto& m : der_.months) {
            if (m.weekends.empty())
                continue;
            const std::string mid = month_key(m);
            const double size = static_cast<double>(m.weekends.size());
            for (int p = 0; p < P_; ++p) {
                Terms sum;
                for (int w : m.weekends)
                    if (const int v = att[static_cast<std::size_t>(w)][static_cast<std::size_t>(p)]; v >= 0)
                        sum.push_back({v, 1});
                if (sum.empty())
                    continue;
                if (wp.max_we)
                    row("36", {pid(p), mid}, sum, Sense::LE, round_half_up(*wp.max_we * m.we_factor));
                if (wp.des_max_we) {
                    const int v = m_.add_var(var_name("vioMaxWe", {pid(p), mid}), VarType::Integer, 0, size,
                                             -wp.des_max_we_weight.value_or(w_.max_weekends), VarRole::Auxiliary);
                    Terms t = sum;
                    t.push_back({v, -1});
                    row("37", {pid(p), mid}, std::move(t), Sense::LE, round_half_up(*wp.des_max_we * m.we_factor));
                }
                if (wp.min_free_we)
                    row("38", {pid(p), mid}, sum, Sense::LE, round_half_up(size - *wp.min_free_we * m.we_factor));
                if (wp.des_min_free_we) {
                    const int v = m_.add_var(var_name("vioFreeWe", {pid(p), mid}), VarType::Integer, 0, size,
                                             -wp.des_min_free_we_weight.value_or(w_.free_weekends), VarRole::Auxiliary);
                    Terms t = sum;
                    t.push_back({v, -1});
                    row("39", {pid(p), mid}, std::move(t), Sense::LE, round_half_up(size - *wp.des_min_free_we * m.we_factor));
                }
            }
        }
    }

    void previous_period() {
        for (int p = 0; p < P_; ++p)
            for (int a : der_.carry_hard[static_cast<std::size_t>(p)])
                fix(der_.is_duty(a) ? "42.1" : "42.2", p, a, 0);
    }

    const RosterInstance& inst_;
    const DerivedSets& der_;
    const WeightConfig& w_;
    const int P_;
    const int A_;
    CanonicalModel m_;
    std::vector<int> xvar_;
    std::vector<std::vector<int>> blk_;
};

}  // namespace

CanonicalModel build_model(const RosterInstance& inst, const DerivedSets& der, const WeightConfig& w) {
    if (auto clashes = find_build_clashes(inst, der); !clashes.empty())
        throw BuildInfeasibleError(std::move(clashes));
    return Builder(inst, der, w).run();
}

}  // namespace roster
