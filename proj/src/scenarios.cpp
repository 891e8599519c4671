#include "roster/scenarios.hpp"

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/instance_check.hpp"
#include "roster/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>

namespace roster {

namespace {

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    int below(int n) { return n <= 0 ? 0 : static_cast<int>(g() % static_cast<std::uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return static_cast<double>(g() >> 11) * 0x1.0p-53 < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }
};

WeekdaySet weekdays(std::initializer_list<int> days) {
    WeekdaySet s;
    for (int d : days)
        s.set(static_cast<std::size_t>(d));
    return s;
}

const WeekdaySet kAllDays = WeekdaySet{}.set();
const WeekdaySet kMonFri = weekdays({0, 1, 2, 3, 4});
const WeekdaySet kSatSun = weekdays({5, 6});

int hm(int h, int m = 0) { return h * 60 + m; }

std::string numbered(const std::string& prefix, int i, int width = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*d", prefix.c_str(), width, i);
    return buf;
}

const std::vector<std::string> kSurnames = {
    "Albers", "Brandt", "Conrad", "Dietz",  "Engel",  "Fischer", "Graf",   "Hahn",   "Imhof",  "Jansen",
    "Keller", "Lang",   "Maurer", "Neumann", "Ott",   "Peters",  "Quast",  "Roth",   "Sauer",  "Thiel",
    "Ulrich", "Vogel",  "Weber",  "Xanten", "Yilmaz", "Zander",  "Arndt",  "Berger", "Claus",  "Dorn",
    "Ebert",  "Frank",  "Gross",  "Horn",   "Igel",   "Jung",    "Kraus",  "Lorenz", "Moser",  "Noll",
    "Oswald", "Pohl",   "Rausch", "Stein",  "Thoma",  "Unger",   "Voss",   "Wolf",   "Zeller", "Adler"};

Physician physician(int i, Rng& rng) {
    Physician p;
    p.id = numbered("p", i);
    p.name = "Dr. " + kSurnames[static_cast<std::size_t>((i - 1) % static_cast<int>(kSurnames.size()))] +
             (i > static_cast<int>(kSurnames.size()) ? " " + std::to_string(i) : "");
    const int r = rng.below(10);
    p.employment_rate = r == 0 ? 0.6 : (r <= 2 ? 0.8 : 1.0);
    return p;
}

DutyTemplate duty(const std::string& id, const std::string& label, WeekdaySet days, int start, int end, bool mandatory) {
    DutyTemplate t;
    t.id = id;
    t.label = label;
    t.weekdays = days;
    t.time = {start, end};
    t.mandatory = mandatory;
    return t;
}

ShiftTemplate shift(const std::string& id, const std::string& label, int start, int end, int min, int des,
                    std::optional<int> max) {
    ShiftTemplate t;
    t.id = id;
    t.label = label;
    t.weekdays = kMonFri;
    t.holiday_rule = DayRule::Never;
    t.time = {start, end};
    t.min_staff = min;
    t.desired_min_staff = des;
    t.max_staff = max;
    return t;
}

RestRule rest(const std::string& from, const std::string& to, int mandatory, std::vector<RestLevel> levels = {}) {
    return RestRule{from, to, mandatory, std::move(levels)};
}

/// Random absence spells: one vacation for some physicians, scattered single days for others.
void add_absences(RosterInstance& inst, Rng& rng, double vacation_share, int min_len, int max_len) {
    const int T = inst.period.length();
    for (auto& p : inst.physicians) {
        if (rng.chance(vacation_share)) {
            const int len = rng.between(min_len, max_len);
            const int start = rng.below(std::max(1, T - len + 1));
            for (int k = 0; k < len && start + k < T; ++k)
                p.absences.insert(inst.period.start + (start + k));
        } else if (rng.chance(0.3)) {
            p.absences.insert(inst.period.start + rng.below(T));
        }
    }
}

std::vector<std::string> instance_ids(const RosterInstance& inst, const std::set<std::string>& templates,
                                      bool weekend_or_holiday_only = false) {
    std::vector<std::string> out;
    for (const auto& a : expand_instances(inst)) {
        if (!templates.count(a.template_id))
            continue;
        if (weekend_or_holiday_only && !(a.date.is_weekend() || a.holiday))
            continue;
        out.push_back(a.id);
    }
    return out;
}

/// Random duty-specific preferences within the given per-level budgets.
void add_instance_preferences(RosterInstance& inst, Rng& rng, const std::vector<std::string>& candidates,
                              const std::map<PreferenceLevel, int>& budget) {
    if (candidates.empty())
        return;
    for (const auto& p : inst.physicians) {
        std::set<std::string> used;
        for (const auto& [level, n] : budget) {
            const int k = rng.between(0, n);
            for (int i = 0; i < k; ++i) {
                const auto& id = rng.pick(candidates);
                if (!used.insert(id).second)
                    continue;
                PreferenceRecord r;
                r.physician = p.id;
                r.target = PreferenceTarget::Instance;
                r.instance = id;
                r.level = level;
                inst.preferences.push_back(r);
            }
        }
    }
}

PreferenceCap cap(PreferenceLevel level, CapUnit unit, CapScope scope, std::optional<int> max,
                  std::optional<double> fraction = std::nullopt) {
    PreferenceCap c;
    c.level = level;
    c.target = PreferenceTarget::Instance;
    c.unit = unit;
    c.scope = scope;
    c.max = max;
    c.max_fraction_of_days = fraction;
    return c;
}

}  // namespace

std::vector<std::string> scenario_names() { return {"two-by-two", "internal-medicine", "cardiology", "orthopedics"}; }

RosterInstance make_scenario(const std::string& name, std::uint64_t seed) {
    if (name == "two-by-two")
        return two_by_two_instance();
    if (name == "internal-medicine")
        return internal_medicine_scenario(seed);
    if (name == "cardiology")
        return cardiology_scenario(seed);
    if (name == "orthopedics")
        return orthopedics_scenario(seed);
    throw ConfigError("unknown scenario '" + name + "'");
}

RosterInstance two_by_two_instance() {
    RosterInstance inst;
    inst.department = "Demo";
    inst.period.start = Date(2026, 3, 2);
    inst.period.end = Date(2026, 3, 2);
    Rng rng(0);
    inst.physicians = {physician(1, rng), physician(2, rng)};
    for (auto& p : inst.physicians)
        p.employment_rate = 1.0;
    inst.duty_templates = {duty("A", "Duty A", kAllDays, hm(8), hm(16), true),
                           duty("B", "Duty B", kAllDays, hm(8), hm(16), true)};
    return inst;
}

RosterInstance internal_medicine_scenario(std::uint64_t seed) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 11);
    RosterInstance inst;
    inst.department = "Internal Medicine";
    inst.period.start = Date(2026, 3, 1);
    inst.period.end = Date(2026, 3, 31);

    inst.qualifications = {{"icu", "Six months of intensive care"}, {"no-duty", "Excluded from duties"}};
    for (int w = 1; w <= 5; ++w)
        inst.qualifications.push_back({numbered("ward-", w, 1), "Ward " + std::to_string(w)});

    const int P = 35;
    for (int i = 1; i <= P; ++i) {
        auto p = physician(i, rng);
        p.qualifications.insert(numbered("ward-", (i - 1) % 5 + 1, 1));
        if (rng.chance(0.6))
            p.qualifications.insert("icu");
        inst.physicians.push_back(std::move(p));
    }
    inst.physicians[P - 1].qualifications.insert("no-duty");

    auto regular = [&](const std::string& id, const std::string& label, WeekdaySet days, int s, int e, bool icu,
                       bool mandatory) {
        auto t = duty(id, label, days, s, e, mandatory);
        if (icu)
            t.quals.required.insert("icu");
        t.quals.excluded.insert("no-duty");
        t.forbidden_before_absence = true;
        if (days == kSatSun)
            t.holiday_rule = DayRule::Also;
        return t;
    };
    inst.duty_templates = {
        regular("N1", "Night 1", kAllDays, hm(20), hm(32), true, true),
        regular("N2", "Night 2", kAllDays, hm(20), hm(32), false, true),
        regular("D1", "Day 1", kSatSun, hm(8), hm(20), true, true),
        regular("D2", "Day 2", kSatSun, hm(8), hm(20), false, true),
        regular("N1B", "Night 1 backup", kAllDays, hm(20), hm(32), true, false),
        regular("N2B", "Night 2 backup", kAllDays, hm(20), hm(32), false, false),
        regular("D1B", "Day 1 backup", kSatSun, hm(8), hm(20), true, false),
        regular("D2B", "Day 2 backup", kSatSun, hm(8), hm(20), false, false),
    };
    for (int w = 1; w <= 5; ++w) {
        auto t = shift(numbered("W", w, 1), "Ward " + std::to_string(w), hm(7, 15), hm(16), 2, 4, std::nullopt);
        for (const auto& p : inst.physicians)
            if (p.qualifications.count(numbered("ward-", w, 1)))
                t.ward_members.insert(p.id);
        t.quals.required.insert(numbered("ward-", w, 1));
        inst.shift_templates.push_back(std::move(t));
    }

    inst.rest_rules.push_back(rest("*", "*", hm(11)));
    const std::vector<std::string> nights = {"N1", "N2", "N1B", "N2B"};
    for (const auto& a : nights)
        for (const auto& b : nights)
            inst.rest_rules.push_back(rest(a, b, hm(24), {{hm(37), std::nullopt}, {hm(61), std::nullopt}}));
    for (int w = 1; w <= 5; ++w)
        for (const auto& b : {"N1B", "N2B"})
            inst.rest_rules.push_back(rest(numbered("W", w, 1), b, 0));

    add_absences(inst, rng, 0.3, 5, 10);

    std::set<std::string> duty_capable, reduced;
    for (int i = 0; i < P - 1; ++i)
        duty_capable.insert(inst.physicians[static_cast<std::size_t>(i)].id);
    for (int i = P - 4; i < P - 1; ++i)
        reduced.insert(inst.physicians[static_cast<std::size_t>(i)].id);
    std::set<std::string> fair_members;
    std::set_difference(duty_capable.begin(), duty_capable.end(), reduced.begin(), reduced.end(),
                        std::inserter(fair_members, fair_members.end()));

    Pool fair;
    fair.id = "regular-fair";
    fair.label = "Regular duties";
    fair.physicians = fair_members;
    fair.duties.templates = {"N1", "N2", "D1", "D2"};
    fair.fair_distribution = true;
    inst.pools.push_back(fair);

    Pool red;
    red.id = "reduced";
    red.label = "Reduced duty counts";
    red.physicians = reduced;
    red.duties.templates = {"N1", "N2", "D1", "D2"};
    red.max_duties = 2;
    inst.pools.push_back(red);

    Pool backup;
    backup.id = "backup";
    backup.label = "Backup duties";
    backup.physicians = duty_capable;
    backup.duties.templates = {"N1B", "N2B", "D1B", "D2B"};
    backup.max_duties = 4;
    inst.pools.push_back(backup);

    Pool sat;
    sat.id = "saturday-night";
    sat.label = "Saturday nights";
    sat.physicians = duty_capable;
    sat.duties.templates = {"N1", "N2"};
    sat.duties.weekdays = weekdays({5});
    sat.max_duties = 1;
    inst.pools.push_back(sat);

    for (int w = 1; w <= 5; ++w) {
        Pool sim;
        sim.id = numbered("night-ward-", w, 1);
        sim.label = "Ward " + std::to_string(w) + " at night";
        for (const auto& id : inst.shift_templates[static_cast<std::size_t>(w - 1)].ward_members)
            if (duty_capable.count(id))
                sim.physicians.insert(id);
        sim.duties.templates = {"N1", "N2"};
        sim.max_phy = 1;
        inst.pools.push_back(sim);
    }

    const auto candidates = instance_ids(inst, {"N1", "N2", "D1", "D2"});
    add_instance_preferences(inst, rng, candidates,
                             {{PreferenceLevel::StronglyDesired, 1},
                              {PreferenceLevel::Desired, 3},
                              {PreferenceLevel::Undesired, 6},
                              {PreferenceLevel::Impossible, 2}});
    inst.preference_caps = {cap(PreferenceLevel::Undesired, CapUnit::Selections, CapScope::AllDays, 10),
                            cap(PreferenceLevel::Impossible, CapUnit::Days, CapScope::AllDays, 3)};

    const Date last = inst.period.start - 1;
    inst.carryover.assignments = {{"p03", "N1", last}, {"p11", "N2", last}, {"p05", "N1", last - 1},
                                  {"p08", "N2", last - 2}};
    return inst;
}

RosterInstance cardiology_scenario(std::uint64_t seed, int scale) {
    if (scale < 1)
        throw ConfigError("scale must be at least 1");
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 23);
    RosterInstance inst;
    inst.department = "Cardiology";
    inst.period.start = Date(2026, 4, 1);
    inst.period.end = Date(2026, 4, 30);
    inst.period.public_holidays = {Date(2026, 4, 3), Date(2026, 4, 6)};
    inst.qualifications = {{"icu", "Intensive care"}, {"cpu", "Chest pain unit"}, {"icu-new", "New on the ICU"}};

    const int P = 30 * scale;
    for (int i = 1; i <= P; ++i) {
        auto p = physician(i, rng);
        if (rng.chance(0.5))
            p.qualifications.insert("icu");
        if (rng.chance(0.5))
            p.qualifications.insert("cpu");
        if (p.qualifications.count("icu") && rng.chance(0.25))
            p.qualifications.insert("icu-new");
        const int w = rng.below(3);
        p.weekend_preference = w == 0 ? WeekendPreference::None
                                      : (w == 1 ? WeekendPreference::OneDuty : WeekendPreference::MultipleDuties);
        inst.physicians.push_back(std::move(p));
    }

    auto opt = [&](const std::string& id, const std::string& label, WeekdaySet days, int s, int e,
                   const std::string& qual, bool late_end) {
        auto t = duty(id, label, days, s, e, false);
        if (!qual.empty())
            t.quals.required.insert(qual);
        t.forbidden_before_absence = late_end;
        if (days == kMonFri || days == weekdays({0, 1, 2, 3}))
            t.holiday_rule = DayRule::Never;
        return t;
    };
    inst.duty_templates = {
        opt("IM", "Intermediate", kAllDays, hm(15, 30), hm(24), "", true),
        opt("NI", "Night", kAllDays, hm(22), hm(32), "", true),
        opt("ICU-E", "ICU early", kAllDays, hm(6), hm(14, 30), "icu", false),
        opt("ICU-D", "ICU day", kAllDays, hm(8), hm(16, 30), "icu", false),
        opt("ICU-L", "ICU late", kAllDays, hm(14), hm(22, 30), "icu", true),
        opt("ICU-N", "ICU night", kAllDays, hm(22), hm(32), "icu", true),
        opt("CPU-E", "CPU early", kAllDays, hm(6, 30), hm(15), "cpu", false),
        opt("CPU-L", "CPU late", kAllDays, hm(14, 30), hm(23), "cpu", true),
        opt("CPU-N", "CPU night", kAllDays, hm(22), hm(32), "cpu", true),
        opt("CPU-O", "CPU outpatient", kMonFri, hm(8), hm(16), "cpu", false),
        opt("FUN", "Function", weekdays({0, 1, 2, 3}), hm(8), hm(16, 30), "", false),
        opt("FS", "Function support", kMonFri, hm(8), hm(16, 30), "", false),
    };
    std::set<std::string> everyone;
    for (const auto& p : inst.physicians)
        everyone.insert(p.id);
    const std::vector<std::pair<std::string, int>> wards = {{"WA", 3}, {"WB", 2}, {"WC", 2}, {"WICU", 2}};
    for (const auto& [id, des] : wards) {
        auto t = shift(id, "Ward " + id.substr(1), hm(7, 30), hm(16), 0, des * scale, des * scale + 2);
        t.ward_members = everyone;
        if (id == "WICU")
            t.quals.desired.insert("icu");
        inst.shift_templates.push_back(std::move(t));
    }

    inst.rest_rules = {rest("*", "*", hm(11), {{hm(14), std::nullopt}}),
                       rest("ICU-N", "CPU-N", hm(11), {{hm(48), 3.0}}),
                       rest("CPU-N", "ICU-N", hm(11), {{hm(48), 3.0}}),
                       rest("NI", "NI", hm(11), {{hm(48), 2.0}})};

    add_absences(inst, rng, 0.35, 4, 9);

    // Weekly blocks on full working weeks.
    std::set<std::string> existing;
    for (const auto& a : expand_instances(inst))
        existing.insert(a.id);
    auto members = [&](const std::string& tid, const Date& monday, std::initializer_list<int> offsets) {
        std::vector<std::string> out;
        for (int k : offsets) {
            const auto id = instance_id(tid, monday + k);
            if (existing.count(id))
                out.push_back(id);
        }
        return out;
    };
    std::map<std::string, std::string> last_ward_block;
    for (const auto& [ward, des] : wards) {
        PreviousBlock prev;
        prev.id = ward + "-prev";
        prev.kind = BlockKind::Shift;
        prev.end_date = inst.period.start - 1;
        for (int i = 0; i < 2 * scale; ++i)
            prev.physicians.insert(inst.physicians[static_cast<std::size_t>(rng.below(P))].id);
        inst.carryover.blocks.push_back(prev);
        last_ward_block[ward] = prev.id;
    }
    for (Date monday = inst.period.start; monday + 4 <= inst.period.end; monday = monday + 1) {
        if (monday.weekday() != 0)
            continue;
        const std::string wk = monday.str();
        auto add_duty_block = [&](const std::string& id, std::vector<std::string> m, int free_after) {
            if (m.size() < 2)
                return;
            BlockDefinition b;
            b.id = id + "-" + wk;
            b.kind = BlockKind::Duty;
            b.members = std::move(m);
            b.allow_extra_duties_inside = false;
            b.allow_extra_shifts_inside = false;
            b.free_days_after = free_after;
            inst.blocks.push_back(std::move(b));
        };
        auto fun = members("FUN", monday, {0, 1, 2, 3});
        for (const auto& n : members("NI", monday, {4, 5}))
            fun.push_back(n);
        add_duty_block("FUN-NI", fun, 1);
        add_duty_block("ICU-N", members("ICU-N", monday, {0, 1, 2, 3}), 2);
        add_duty_block("CPU-N", members("CPU-N", monday, {0, 1, 2, 3}), 2);
        add_duty_block("IM", members("IM", monday, {0, 1, 2, 3, 4}), 0);
        for (const auto& t : {"ICU-E", "ICU-D", "ICU-L", "CPU-E", "CPU-L", "CPU-O"})
            add_duty_block(t, members(t, monday, {0, 1, 2, 3, 4}), 0);
        for (const auto& [ward, des] : wards) {
            auto m = members(ward, monday, {0, 1, 2, 3, 4});
            if (m.size() < 2)
                continue;
            BlockDefinition b;
            b.id = ward + "-" + wk;
            b.kind = BlockKind::Shift;
            b.members = std::move(m);
            b.consecutive_predecessor = last_ward_block[ward];
            b.max_consecutive_run = 2;
            inst.blocks.push_back(b);
            last_ward_block[ward] = b.id;
        }
    }

    std::set<std::string> icu, cpu, icu_new;
    for (const auto& p : inst.physicians) {
        if (p.qualifications.count("icu"))
            icu.insert(p.id);
        if (p.qualifications.count("cpu"))
            cpu.insert(p.id);
        if (p.qualifications.count("icu-new"))
            icu_new.insert(p.id);
    }
    auto fair_pool = [&](const std::string& id, const std::string& label, const std::set<std::string>& who,
                         std::vector<std::string> templates) {
        Pool pool;
        pool.id = id;
        pool.label = label;
        pool.physicians = who;
        pool.duties.templates = std::move(templates);
        pool.fair_distribution = true;
        return pool;
    };
    inst.pools.push_back(fair_pool("icu-fair", "ICU duties", icu, {"ICU-E", "ICU-D", "ICU-L", "ICU-N"}));
    inst.pools.push_back(fair_pool("cpu-fair", "CPU duties", cpu, {"CPU-E", "CPU-L", "CPU-N", "CPU-O"}));
    Pool weekend = fair_pool("weekend-fair", "Weekend and holiday duties", everyone, {});
    std::set<std::string> all_duties;
    for (const auto& t : inst.duty_templates)
        all_duties.insert(t.id);
    weekend.duties.instances = instance_ids(inst, all_duties, true);
    inst.pools.push_back(weekend);
    Pool fs;
    fs.id = "function-support";
    fs.label = "Function support";
    fs.physicians = everyone;
    fs.duties.templates = {"FS"};
    fs.max_duties = 5;
    inst.pools.push_back(fs);
    if (icu_new.size() > 1) {
        Pool sim;
        sim.id = "icu-new";
        sim.label = "New on the ICU";
        sim.physicians = icu_new;
        sim.duties.templates = {"ICU-E", "ICU-D"};
        sim.max_phy = 1;
        inst.pools.push_back(sim);
    }
    Pool nights;
    nights.id = "nights";
    nights.label = "Night duties";
    nights.physicians = everyone;
    nights.duties.templates = {"NI", "ICU-N", "CPU-N"};
    nights.desired_max_duties = 8;
    inst.pools.push_back(nights);

    inst.weekly_sets = {{"morning", "Morning", {"ICU-E", "CPU-E"}, kMonFri},
                        {"day", "Day", {"ICU-D", "CPU-O", "FUN", "FS", "WA", "WB", "WC", "WICU"}, kMonFri},
                        {"evening", "Evening", {"IM", "ICU-L", "CPU-L"}, kMonFri},
                        {"night", "Night", {"NI", "ICU-N", "CPU-N"}, kMonFri}};
    const int weeks = week_index(inst.period.start, inst.period.end) + 1;
    const std::vector<PreferenceLevel> weekly_levels = {PreferenceLevel::StronglyDesired, PreferenceLevel::Desired,
                                                        PreferenceLevel::Indifferent, PreferenceLevel::Undesired};
    for (const auto& p : inst.physicians)
        for (int w = 0; w < weeks; ++w)
            for (const auto& s : inst.weekly_sets) {
                if (!rng.chance(0.3))
                    continue;
                PreferenceRecord r;
                r.physician = p.id;
                r.target = PreferenceTarget::Weekly;
                r.weekly_set = s.id;
                r.week = w;
                r.level = rng.pick(weekly_levels);
                if (r.level != PreferenceLevel::Indifferent)
                    inst.preferences.push_back(r);
            }
    add_instance_preferences(inst, rng, weekend.duties.instances,
                             {{PreferenceLevel::StronglyDesired, 1},
                              {PreferenceLevel::Desired, 2},
                              {PreferenceLevel::Undesired, 3},
                              {PreferenceLevel::Impossible, 2}});
    inst.preference_caps = {cap(PreferenceLevel::Impossible, CapUnit::Selections, CapScope::AllDays, 2)};
    inst.weekend_policy.des_max_we = 2;
    inst.weekend_policy.max_we = 3;
    inst.weekend_policy.des_min_free_we = 2;
    inst.weekend_policy.cons_we = 2;

    const Date last = inst.period.start - 1;
    for (int i = 0; i < 4 * scale; ++i) {
        const auto& p = inst.physicians[static_cast<std::size_t>(rng.below(P))].id;
        inst.carryover.assignments.push_back({p, rng.chance(0.5) ? "NI" : "ICU-N", last - rng.below(2)});
        inst.carryover.past_weekends[p] = rng.between(1, 2);
    }
    inst.weights.duty_coverage = 1000;
    return inst;
}

RosterInstance orthopedics_scenario(std::uint64_t seed) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 37);
    RosterInstance inst;
    inst.department = "Orthopedics and Trauma Surgery";
    inst.period.start = Date(2026, 5, 1);
    inst.period.end = Date(2026, 5, 31);
    inst.period.public_holidays = {Date(2026, 5, 1), Date(2026, 5, 14), Date(2026, 5, 25)};
    inst.qualifications = {{"level-1", "Resident, first year"}, {"level-2", "Resident, advanced"}, {"fellow", "Fellow"}};
    for (int w = 1; w <= 12; ++w)
        inst.qualifications.push_back({numbered("ward-", w), "Surgical ward " + std::to_string(w)});

    const int P = 50;
    for (int i = 1; i <= P; ++i) {
        auto p = physician(i, rng);
        const int lvl = rng.below(10);
        p.qualifications.insert(lvl < 3 ? "level-1" : (lvl < 7 ? "level-2" : "fellow"));
        if (lvl >= 3)
            p.qualifications.insert("level-1");
        if (lvl >= 7)
            p.qualifications.insert("level-2");
        p.qualifications.insert(numbered("ward-", (i - 1) % 12 + 1));
        inst.physicians.push_back(std::move(p));
    }

    auto night = [&](const std::string& id, const std::string& label, bool weekend, const std::string& level) {
        auto t = duty(id, label, weekend ? kSatSun : kMonFri, weekend ? hm(8) : hm(16), hm(32), true);
        t.holiday_rule = weekend ? DayRule::Also : DayRule::Never;
        t.quals.required.insert(level);
        return t;
    };
    const std::vector<std::pair<std::string, std::string>> night_kinds = {
        {"N1", "level-1"}, {"N2", "level-1"}, {"N3", "level-2"}, {"N4", "fellow"}, {"NS", "level-2"}};
    std::vector<std::string> night_ids;
    for (const auto& [id, lvl] : night_kinds) {
        inst.duty_templates.push_back(night(id, "Night " + id.substr(1), false, lvl));
        inst.duty_templates.push_back(night(id + "-WE", "Night " + id.substr(1) + " (weekend)", true, lvl));
        night_ids.push_back(id);
        night_ids.push_back(id + "-WE");
    }
    auto late = duty("L", "Late", kMonFri, hm(14, 30), hm(22, 30), true);
    late.holiday_rule = DayRule::Never;
    late.desire_consecutive = true;
    late.quals.required.insert("level-1");
    auto late_we = duty("L-WE", "Late (weekend)", kSatSun, hm(13), hm(21), true);
    late_we.holiday_rule = DayRule::Also;
    late_we.desire_consecutive = true;
    late_we.quals.required.insert("level-1");
    inst.duty_templates.push_back(late);
    inst.duty_templates.push_back(late_we);
    // Contractual exclusions from particular duties.
    for (int i = 0; i < 4; ++i)
        inst.physicians[static_cast<std::size_t>(rng.below(P))].qualifications.insert("no-nights");
    inst.qualifications.push_back({"no-nights", "Excluded from night duties"});
    for (auto& t : inst.duty_templates)
        if (t.id[0] == 'N')
            t.quals.excluded.insert("no-nights");

    for (int w = 1; w <= 12; ++w) {
        auto t = shift(numbered("WARD", w), "Ward " + std::to_string(w), hm(7, 15), hm(16), 0, 3, std::nullopt);
        t.quals.required.insert(numbered("ward-", w));
        for (const auto& p : inst.physicians)
            if (p.qualifications.count(numbered("ward-", w)))
                t.ward_members.insert(p.id);
        inst.shift_templates.push_back(std::move(t));
    }

    inst.rest_rules.push_back(rest("*", "*", hm(11)));
    for (int w = 1; w <= 12; ++w)
        for (const auto& n : night_ids)
            inst.rest_rules.push_back(rest(numbered("WARD", w), n, 0));
    for (const auto& ns : {"NS", "NS-WE"})
        for (int w = 1; w <= 12; ++w)
            inst.rest_rules.push_back(rest(ns, numbered("WARD", w), -hm(1)));

    add_absences(inst, rng, 0.3, 5, 12);

    std::set<std::string> everyone;
    for (const auto& p : inst.physicians)
        everyone.insert(p.id);
    Pool nights;
    nights.id = "nights";
    nights.label = "Night duties";
    nights.physicians = everyone;
    nights.duties.templates = night_ids;
    nights.desired_max_duties = 4;
    nights.desired_max_weight = 500;
    inst.pools.push_back(nights);
    inst.weekend_policy.des_max_we = 2;
    inst.weekend_policy.des_max_we_weight = 500;

    std::vector<std::string> candidates;
    for (const auto& a : expand_instances(inst))
        if (a.kind == ActivityKind::Duty)
            candidates.push_back(a.id);
    add_instance_preferences(inst, rng, candidates, {{PreferenceLevel::Desired, 4}, {PreferenceLevel::Undesired, 8}});
    inst.preference_caps = {cap(PreferenceLevel::Undesired, CapUnit::Days, CapScope::AllDays, std::nullopt, 0.5),
                            cap(PreferenceLevel::Undesired, CapUnit::Days, CapScope::WeekendsAndHolidays, std::nullopt, 0.5)};

    const Date last = inst.period.start - 1;
    inst.carryover.assignments = {{"p02", "N1", last}, {"p17", "N3", last}, {"p29", "L", last}, {"p41", "N4", last - 1}};
    return inst;
}

namespace {

RosterInstance tiny_attempt(Rng& rng, const TinyLimits& limits) {
    RosterInstance inst;
    inst.department = "Tiny";
    // Bias towards periods touching a weekend.
    inst.period.start = Date(2026, 6, 1) + (rng.chance(0.6) ? 3 + 7 * rng.below(4) + rng.below(3) : rng.below(28));
    inst.period.end = inst.period.start + rng.between(0, 4);
    if (rng.chance(0.2))
        inst.period.public_holidays.insert(inst.period.start + rng.below(inst.period.length()));

    inst.qualifications = {{"q1", "Q1"}, {"q2", "Q2"}};
    const int P = rng.between(2, limits.max_physicians);
    for (int i = 1; i <= P; ++i) {
        auto p = physician(i, rng);
        p.employment_rate = rng.chance(0.3) ? 0.5 : 1.0;
        if (rng.chance(0.7))
            p.qualifications.insert("q1");
        if (rng.chance(0.3))
            p.qualifications.insert("q2");
        if (rng.chance(0.2))
            p.absences.insert(inst.period.start + rng.below(inst.period.length()));
        if (rng.chance(0.08))
            p.planned_manually = true;
        const int wp = rng.below(4);
        p.weekend_preference =
            wp == 1 ? WeekendPreference::OneDuty : (wp == 2 ? WeekendPreference::MultipleDuties : WeekendPreference::None);
        inst.physicians.push_back(std::move(p));
    }

    const std::vector<TimeSpan> spans = {{hm(8), hm(16)}, {hm(14), hm(22)}, {hm(20), hm(32)}, {hm(6), hm(14)}};
    const int nd = rng.between(1, 3);
    for (int i = 0; i < nd; ++i) {
        WeekdaySet days = rng.chance(0.6) ? kAllDays : WeekdaySet(static_cast<unsigned long>(rng.between(1, 127)));
        const auto span = rng.pick(spans);
        auto t = duty("D" + std::to_string(i + 1), "Duty " + std::to_string(i + 1), days, span.start, span.end,
                      rng.chance(0.35));
        if (rng.chance(0.2))
            t.holiday_rule = rng.chance(0.5) ? DayRule::Never : DayRule::Also;
        t.forbidden_before_absence = rng.chance(0.3);
        t.forbidden_after_absence = rng.chance(0.3);
        t.desire_consecutive = rng.chance(0.3);
        if (rng.chance(0.3))
            t.quals.required.insert("q1");
        if (rng.chance(0.2))
            t.quals.desired.insert("q2");
        inst.duty_templates.push_back(std::move(t));
    }
    const int ns = rng.between(0, 2);
    for (int i = 0; i < ns; ++i) {
        std::set<std::string> members;
        for (const auto& p : inst.physicians)
            if (rng.chance(0.7))
                members.insert(p.id);
        const int size = static_cast<int>(members.size());
        const int min = rng.chance(0.2) ? std::min(1, size) : 0;
        const int des = std::min(size, min + rng.between(0, 2));
        std::optional<int> max;
        if (rng.chance(0.5))
            max = des + rng.between(0, 1);
        auto t = shift("S" + std::to_string(i + 1), "Shift " + std::to_string(i + 1), hm(7, 30), hm(15, 30), min, des, max);
        t.weekdays = rng.chance(0.6) ? kAllDays : WeekdaySet(static_cast<unsigned long>(rng.between(1, 127)));
        t.holiday_rule = DayRule::ByWeekday;
        t.ward_members = members;
        if (rng.chance(0.4))
            t.desired_weight = rng.between(1, 5);
        if (rng.chance(0.2))
            t.quals.desired.insert("q2");
        inst.shift_templates.push_back(std::move(t));
    }

    const auto acts = expand_instances(inst);
    if (acts.empty() || static_cast<int>(acts.size()) > limits.max_instances)
        return {};
    std::vector<std::string> duty_ids, shift_ids;
    for (const auto& a : acts)
        (a.kind == ActivityKind::Duty ? duty_ids : shift_ids).push_back(a.id);

    if (rng.chance(0.7)) {
        RestRule r = rest("*", "*", rng.pick(std::vector<int>{0, hm(8), hm(11), hm(24)}));
        if (rng.chance(0.5))
            r.desired_levels.push_back({r.mandatory_rest + hm(rng.between(4, 30)), rng.between(1, 4)});
        if (rng.chance(0.3))
            r.desired_levels.push_back({r.mandatory_rest + hm(rng.between(31, 48)), std::nullopt});
        inst.rest_rules.push_back(r);
        if (rng.chance(0.2) && !inst.shift_templates.empty())
            inst.rest_rules.push_back(rest(inst.shift_templates[0].id, "*", -hm(1)));
    }

    const auto& pids = inst.physicians;
    auto any_physician = [&]() { return pids[static_cast<std::size_t>(rng.below(P))].id; };
    if (rng.chance(0.3)) {
        const auto& ids = (rng.chance(0.7) && !duty_ids.empty()) || shift_ids.empty() ? duty_ids : shift_ids;
        if (!ids.empty())
            inst.manual_assignments.push_back({rng.pick(ids), any_physician()});
    }
    for (const auto& p : pids)
        for (const auto& a : acts)
            if (rng.chance(0.15)) {
                PreferenceRecord r;
                r.physician = p.id;
                r.instance = a.id;
                r.level = static_cast<PreferenceLevel>(rng.below(5));
                if (r.level != PreferenceLevel::Indifferent)
                    inst.preferences.push_back(r);
            }
    if (rng.chance(0.3)) {
        WeeklySet s{"ws", "Weekly set", {rng.pick(inst.duty_templates).id}, kAllDays};
        inst.weekly_sets.push_back(s);
        PreferenceRecord r;
        r.physician = any_physician();
        r.target = PreferenceTarget::Weekly;
        r.weekly_set = "ws";
        r.week = 0;
        r.level = rng.chance(0.5) ? PreferenceLevel::Desired : PreferenceLevel::Undesired;
        inst.preferences.push_back(r);
    }

    // Blocks.
    if (rng.chance(0.35) && duty_ids.size() >= 2) {
        BlockDefinition b;
        b.id = "BD";
        b.kind = BlockKind::Duty;
        const int first = rng.below(static_cast<int>(duty_ids.size()) - 1);
        b.members = {duty_ids[static_cast<std::size_t>(first)], duty_ids[static_cast<std::size_t>(first + 1)]};
        b.allow_extra_duties_inside = rng.chance(0.5);
        b.allow_extra_shifts_inside = rng.chance(0.5);
        b.free_days_after = rng.between(0, 2);
        inst.blocks.push_back(b);
    }
    if (rng.chance(0.35) && shift_ids.size() >= 2) {
        const std::string tid = inst.shift_templates[0].id;
        std::vector<std::string> own;
        for (const auto& id : shift_ids)
            if (id.rfind(tid + "@", 0) == 0)
                own.push_back(id);
        if (own.size() >= 2) {
            const std::size_t half = own.size() / 2;
            BlockDefinition b1;
            b1.id = "BS1";
            b1.kind = BlockKind::Shift;
            b1.members.assign(own.begin(), own.begin() + static_cast<long>(half));
            b1.free_days_after = rng.between(0, 1);
            b1.allow_extra_duties_inside = rng.chance(0.5);
            if (rng.chance(0.5)) {
                PreviousBlock prev{"BS0", BlockKind::Shift, {any_physician()}, inst.period.start - 1, rng.between(0, 1)};
                inst.carryover.blocks.push_back(prev);
                b1.consecutive_predecessor = "BS0";
                if (rng.chance(0.5))
                    b1.consecutive_weight = rng.between(1, 3);
            }
            inst.blocks.push_back(b1);
            BlockDefinition b2;
            b2.id = "BS2";
            b2.kind = BlockKind::Shift;
            b2.members.assign(own.begin() + static_cast<long>(half), own.end());
            if (rng.chance(0.6))
                b2.consecutive_predecessor = "BS1";
            if (rng.chance(0.4))
                b2.max_consecutive_run = 1;
            inst.blocks.push_back(b2);
        }
    }
    if (rng.chance(0.2)) {
        PreviousBlock prev{"PB", BlockKind::Duty, {any_physician()}, inst.period.start - 1, rng.between(1, 2)};
        inst.carryover.blocks.push_back(prev);
    }

    // Pools.
    const int np = rng.between(0, 2);
    for (int k = 0; k < np; ++k) {
        Pool pool;
        pool.id = "pool" + std::to_string(k + 1);
        for (const auto& p : pids)
            if (rng.chance(0.7))
                pool.physicians.insert(p.id);
        if (pool.physicians.empty())
            pool.physicians.insert(any_physician());
        for (const auto& t : inst.duty_templates)
            if (rng.chance(0.6))
                pool.duties.templates.push_back(t.id);
        if (pool.duties.templates.empty())
            pool.duties.templates.push_back(inst.duty_templates[0].id);
        if (rng.chance(0.05)) {
            pool.exact_count = rng.between(0, 2);
        } else {
            if (rng.chance(0.08))
                pool.min_duties = 1;
            if (rng.chance(0.3))
                pool.max_duties = rng.between(1, 3);
            if (rng.chance(0.3))
                pool.desired_max_duties = rng.between(0, 2);
            if (rng.chance(0.3))
                pool.desired_min_duties = rng.between(1, 2);
        }
        if (rng.chance(0.3))
            pool.max_phy = rng.between(1, 2);
        if (rng.chance(0.3))
            pool.desired_max_phy = 1;
        if (rng.chance(0.4))
            pool.fair_distribution = true;
        if (rng.chance(0.3))
            pool.fairness_penalty_down = rng.between(1, 9);
        inst.pools.push_back(std::move(pool));
    }

    // Weekends.
    if (rng.chance(0.5)) {
        auto& w = inst.weekend_policy;
        if (rng.chance(0.4))
            w.max_we = rng.between(1, 2);
        if (rng.chance(0.4))
            w.des_max_we = rng.between(0, 1);
        if (rng.chance(0.2))
            w.min_free_we = rng.between(0, 1);
        if (rng.chance(0.4))
            w.des_min_free_we = rng.between(1, 2);
        if (rng.chance(0.4))
            w.cons_we = rng.between(1, 2);
        if (rng.chance(0.5))
            w.preference_violation_weight = rng.between(1, 5);
        for (const auto& p : pids)
            if (rng.chance(0.4))
                inst.carryover.past_weekends[p.id] = rng.between(0, 3);
    }

    // Previous-period assignments.
    if (rng.chance(0.4)) {
        const auto& t = rng.pick(inst.duty_templates);
        inst.carryover.assignments.push_back({any_physician(), t.id, inst.period.start - 1});
    }

    if (rng.chance(0.3)) {
        auto& w = inst.weights;
        w.duty_coverage = rng.between(5, 50);
        w.shift_desired_staffing = rng.between(1, 20);
        w.shift_above_desired = rng.between(0, 2);
        w.undesired = rng.between(1, 10);
        w.fair_up = rng.between(1, 10);
    }
    return inst;
}

bool tiny_acceptable(const RosterInstance& inst, const TinyLimits& limits) {
    if (inst.physicians.empty() || inst.duty_templates.empty())
        return false;
    if (count_errors(validate_instance(inst)) > 0)
        return false;
    for (const auto& p : inst.physicians)
        if (!check_preference_caps(inst, p.id).empty())
            return false;
    try {
        const auto der = derive_all(inst);
        if (der.num_activities() > limits.max_instances)
            return false;
        if (!find_build_clashes(inst, der).empty())
            return false;
        const auto model = build_model(inst, der, inst.weights);
        const int free = oracle_free_decisions(model);
        return free >= limits.min_free && free <= limits.max_free;
    } catch (const ConfigError&) {
        return false;
    } catch (const BuildInfeasibleError&) {
        return false;
    }
}

}  // namespace

RosterInstance random_tiny_instance(std::uint64_t seed, const TinyLimits& limits) {
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + 101);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        RosterInstance inst = tiny_attempt(rng, limits);
        if (tiny_acceptable(inst, limits)) {
            inst.department = "Tiny " + std::to_string(seed);
            return inst;
        }
    }
    throw ConfigError("no acceptable tiny instance for seed " + std::to_string(seed));
}

}  // namespace roster
