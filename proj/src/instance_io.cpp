#include "roster/instance_io.hpp"

#include "roster/errors.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace roster {

using nlohmann::json;

namespace {

template <class E>
struct EnumName {
    E value;
    const char* name;
};

constexpr EnumName<DayRule> kDayRules[] = {
    {DayRule::ByWeekday, "by-weekday"}, {DayRule::Also, "also"}, {DayRule::Only, "only"}, {DayRule::Never, "never"}};
constexpr EnumName<WeekendPreference> kWeekendPrefs[] = {{WeekendPreference::None, "none"},
                                                         {WeekendPreference::OneDuty, "one-duty"},
                                                         {WeekendPreference::MultipleDuties, "multiple-duties"}};
constexpr EnumName<BlockKind> kBlockKinds[] = {{BlockKind::Duty, "duty"}, {BlockKind::Shift, "shift"}};
constexpr EnumName<HolidayFilter> kHolidayFilters[] = {
    {HolidayFilter::Any, "any"}, {HolidayFilter::Only, "only"}, {HolidayFilter::Exclude, "exclude"}};
constexpr EnumName<PreferenceLevel> kLevels[] = {{PreferenceLevel::StronglyDesired, "strongly-desired"},
                                                 {PreferenceLevel::Desired, "desired"},
                                                 {PreferenceLevel::Indifferent, "indifferent"},
                                                 {PreferenceLevel::Undesired, "undesired"},
                                                 {PreferenceLevel::Impossible, "impossible"}};
constexpr EnumName<PreferenceTarget> kTargets[] = {{PreferenceTarget::Instance, "instance"},
                                                   {PreferenceTarget::Weekly, "weekly"}};
constexpr EnumName<CapUnit> kUnits[] = {{CapUnit::Selections, "selections"}, {CapUnit::Days, "days"}};
constexpr EnumName<CapScope> kScopes[] = {{CapScope::AllDays, "all-days"},
                                          {CapScope::WeekendsAndHolidays, "weekends-and-holidays"}};

template <class E, std::size_t N>
const char* enum_name(const EnumName<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v)
            return e.name;
    return "?";
}

template <class E, std::size_t N>
E enum_value(const EnumName<E> (&table)[N], const json& j, const char* what) {
    const auto s = j.get<std::string>();
    for (const auto& e : table)
        if (s == e.name)
            return e.value;
    throw DocumentError(std::string("unknown ") + what + " '" + s + "'");
}

json hours(int minutes) { return static_cast<double>(minutes) / 60.0; }
int minutes_from_hours(const json& j) { return static_cast<int>(std::llround(j.get<double>() * 60.0)); }

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    if (v)
        j[key] = *v;
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null())
        out = it->get<T>();
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (auto it = j.find(key); it != j.end() && !it->is_null())
        return it->get<T>();
    return fallback;
}

json dates_to_json(const std::set<Date>& dates) {
    json a = json::array();
    for (const auto& d : dates)
        a.push_back(d.str());
    return a;
}

std::set<Date> dates_from_json(const json& j) {
    std::set<Date> out;
    for (const auto& e : j)
        out.insert(Date::parse(e.get<std::string>()));
    return out;
}

std::set<std::string> string_set(const json& j, const char* key) {
    std::set<std::string> out;
    if (auto it = j.find(key); it != j.end())
        for (const auto& e : *it)
            out.insert(e.get<std::string>());
    return out;
}

std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    if (auto it = j.find(key); it != j.end())
        for (const auto& e : *it)
            out.push_back(e.get<std::string>());
    return out;
}

json quals_to_json(const QualificationRules& q) {
    return {{"required", q.required}, {"excluded", q.excluded}, {"desired", q.desired}, {"undesired", q.undesired}};
}

QualificationRules quals_from_json(const json& j) {
    QualificationRules q;
    if (!j.is_object())
        return q;
    q.required = string_set(j, "required");
    q.excluded = string_set(j, "excluded");
    q.desired = string_set(j, "desired");
    q.undesired = string_set(j, "undesired");
    return q;
}

json span_to_json(const TimeSpan& t) { return {{"start", format_clock(t.start)}, {"end", format_clock(t.end)}}; }

TimeSpan span_from_json(const json& j) {
    return {parse_clock(j.at("start").get<std::string>()), parse_clock(j.at("end").get<std::string>())};
}

json duty_to_json(const DutyTemplate& t) {
    json j{{"id", t.id},
           {"label", t.label},
           {"weekdays", weekdays_to_json(t.weekdays)},
           {"holiday_rule", enum_name(kDayRules, t.holiday_rule)},
           {"pre_holiday_rule", enum_name(kDayRules, t.pre_holiday_rule)},
           {"start", format_clock(t.time.start)},
           {"end", format_clock(t.time.end)},
           {"mandatory", t.mandatory},
           {"forbidden_before_absence", t.forbidden_before_absence},
           {"forbidden_after_absence", t.forbidden_after_absence},
           {"desire_consecutive", t.desire_consecutive},
           {"quals", quals_to_json(t.quals)}};
    if (t.holiday_time)
        j["holiday_time"] = span_to_json(*t.holiday_time);
    return j;
}

DutyTemplate duty_from_json(const json& j) {
    DutyTemplate t;
    t.id = j.at("id").get<std::string>();
    t.label = get_or<std::string>(j, "label", "");
    t.weekdays = weekdays_from_json(j.at("weekdays"));
    t.holiday_rule = j.contains("holiday_rule") ? enum_value(kDayRules, j["holiday_rule"], "holiday rule") : DayRule::ByWeekday;
    t.pre_holiday_rule =
        j.contains("pre_holiday_rule") ? enum_value(kDayRules, j["pre_holiday_rule"], "holiday rule") : DayRule::ByWeekday;
    t.time = span_from_json(j);
    if (j.contains("holiday_time"))
        t.holiday_time = span_from_json(j["holiday_time"]);
    t.mandatory = get_or(j, "mandatory", true);
    t.forbidden_before_absence = get_or(j, "forbidden_before_absence", false);
    t.forbidden_after_absence = get_or(j, "forbidden_after_absence", false);
    t.desire_consecutive = get_or(j, "desire_consecutive", false);
    if (j.contains("quals"))
        t.quals = quals_from_json(j["quals"]);
    return t;
}

json shift_to_json(const ShiftTemplate& t) {
    json j{{"id", t.id},
           {"label", t.label},
           {"ward_members", t.ward_members},
           {"weekdays", weekdays_to_json(t.weekdays)},
           {"holiday_rule", enum_name(kDayRules, t.holiday_rule)},
           {"pre_holiday_rule", enum_name(kDayRules, t.pre_holiday_rule)},
           {"start", format_clock(t.time.start)},
           {"end", format_clock(t.time.end)},
           {"min_staff", t.min_staff},
           {"desired_min_staff", t.desired_min_staff},
           {"quals", quals_to_json(t.quals)}};
    put_opt(j, "max_staff", t.max_staff);
    put_opt(j, "desired_weight", t.desired_weight);
    return j;
}

ShiftTemplate shift_from_json(const json& j) {
    ShiftTemplate t;
    t.id = j.at("id").get<std::string>();
    t.label = get_or<std::string>(j, "label", "");
    t.ward_members = string_set(j, "ward_members");
    t.weekdays = weekdays_from_json(j.at("weekdays"));
    t.holiday_rule = j.contains("holiday_rule") ? enum_value(kDayRules, j["holiday_rule"], "holiday rule") : DayRule::ByWeekday;
    t.pre_holiday_rule =
        j.contains("pre_holiday_rule") ? enum_value(kDayRules, j["pre_holiday_rule"], "holiday rule") : DayRule::ByWeekday;
    t.time = span_from_json(j);
    t.min_staff = get_or(j, "min_staff", 0);
    t.desired_min_staff = get_or(j, "desired_min_staff", t.min_staff);
    get_opt(j, "max_staff", t.max_staff);
    get_opt(j, "desired_weight", t.desired_weight);
    if (j.contains("quals"))
        t.quals = quals_from_json(j["quals"]);
    return t;
}

json block_to_json(const BlockDefinition& b) {
    json j{{"id", b.id},
           {"kind", enum_name(kBlockKinds, b.kind)},
           {"members", b.members},
           {"allow_extra_duties_inside", b.allow_extra_duties_inside},
           {"allow_extra_shifts_inside", b.allow_extra_shifts_inside},
           {"free_days_after", b.free_days_after}};
    put_opt(j, "consecutive_predecessor", b.consecutive_predecessor);
    put_opt(j, "consecutive_weight", b.consecutive_weight);
    put_opt(j, "max_consecutive_run", b.max_consecutive_run);
    return j;
}

BlockDefinition block_from_json(const json& j) {
    BlockDefinition b;
    b.id = j.at("id").get<std::string>();
    b.kind = enum_value(kBlockKinds, j.at("kind"), "block kind");
    b.members = string_list(j, "members");
    b.allow_extra_duties_inside = get_or(j, "allow_extra_duties_inside", true);
    b.allow_extra_shifts_inside = get_or(j, "allow_extra_shifts_inside", true);
    b.free_days_after = get_or(j, "free_days_after", 0);
    get_opt(j, "consecutive_predecessor", b.consecutive_predecessor);
    get_opt(j, "consecutive_weight", b.consecutive_weight);
    get_opt(j, "max_consecutive_run", b.max_consecutive_run);
    return b;
}

json rest_to_json(const RestRule& r) {
    json levels = json::array();
    for (const auto& l : r.desired_levels) {
        json e{{"rest_hours", hours(l.rest)}};
        put_opt(e, "weight", l.weight);
        levels.push_back(e);
    }
    return {{"from", r.from}, {"to", r.to}, {"mandatory_rest_hours", hours(r.mandatory_rest)}, {"desired_levels", levels}};
}

RestRule rest_from_json(const json& j) {
    RestRule r;
    r.from = j.at("from").get<std::string>();
    r.to = j.at("to").get<std::string>();
    r.mandatory_rest = minutes_from_hours(j.at("mandatory_rest_hours"));
    if (j.contains("desired_levels"))
        for (const auto& e : j["desired_levels"]) {
            RestLevel l;
            l.rest = minutes_from_hours(e.at("rest_hours"));
            get_opt(e, "weight", l.weight);
            r.desired_levels.push_back(l);
        }
    return r;
}

json pool_to_json(const Pool& p) {
    json sel{{"templates", p.duties.templates},
             {"weekdays", weekdays_to_json(p.duties.weekdays)},
             {"holidays", enum_name(kHolidayFilters, p.duties.holidays)},
             {"instances", p.duties.instances}};
    json j{{"id", p.id},
           {"label", p.label},
           {"physicians", p.physicians},
           {"duties", sel},
           {"fair_distribution", p.fair_distribution}};
    put_opt(j, "exact_count", p.exact_count);
    put_opt(j, "min_duties", p.min_duties);
    put_opt(j, "desired_min_duties", p.desired_min_duties);
    put_opt(j, "max_duties", p.max_duties);
    put_opt(j, "desired_max_duties", p.desired_max_duties);
    put_opt(j, "max_phy", p.max_phy);
    put_opt(j, "desired_max_phy", p.desired_max_phy);
    put_opt(j, "fairness_penalty_down", p.fairness_penalty_down);
    put_opt(j, "fairness_penalty_up", p.fairness_penalty_up);
    put_opt(j, "desired_min_weight", p.desired_min_weight);
    put_opt(j, "desired_max_weight", p.desired_max_weight);
    put_opt(j, "desired_max_phy_weight", p.desired_max_phy_weight);
    return j;
}

Pool pool_from_json(const json& j) {
    Pool p;
    p.id = j.at("id").get<std::string>();
    p.label = get_or<std::string>(j, "label", "");
    p.physicians = string_set(j, "physicians");
    if (j.contains("duties")) {
        const auto& s = j["duties"];
        p.duties.templates = string_list(s, "templates");
        if (s.contains("weekdays"))
            p.duties.weekdays = weekdays_from_json(s["weekdays"]);
        if (s.contains("holidays"))
            p.duties.holidays = enum_value(kHolidayFilters, s["holidays"], "holiday filter");
        p.duties.instances = string_list(s, "instances");
    }
    p.fair_distribution = get_or(j, "fair_distribution", false);
    get_opt(j, "exact_count", p.exact_count);
    get_opt(j, "min_duties", p.min_duties);
    get_opt(j, "desired_min_duties", p.desired_min_duties);
    get_opt(j, "max_duties", p.max_duties);
    get_opt(j, "desired_max_duties", p.desired_max_duties);
    get_opt(j, "max_phy", p.max_phy);
    get_opt(j, "desired_max_phy", p.desired_max_phy);
    get_opt(j, "fairness_penalty_down", p.fairness_penalty_down);
    get_opt(j, "fairness_penalty_up", p.fairness_penalty_up);
    get_opt(j, "desired_min_weight", p.desired_min_weight);
    get_opt(j, "desired_max_weight", p.desired_max_weight);
    get_opt(j, "desired_max_phy_weight", p.desired_max_phy_weight);
    return p;
}

json cap_to_json(const PreferenceCap& c) {
    json j{{"level", enum_name(kLevels, c.level)},
           {"target", enum_name(kTargets, c.target)},
           {"unit", enum_name(kUnits, c.unit)},
           {"scope", enum_name(kScopes, c.scope)}};
    put_opt(j, "max", c.max);
    put_opt(j, "max_fraction_of_days", c.max_fraction_of_days);
    return j;
}

PreferenceCap cap_from_json(const json& j) {
    PreferenceCap c;
    c.level = enum_value(kLevels, j.at("level"), "preference level");
    if (j.contains("target"))
        c.target = enum_value(kTargets, j["target"], "preference target");
    if (j.contains("unit"))
        c.unit = enum_value(kUnits, j["unit"], "cap unit");
    if (j.contains("scope"))
        c.scope = enum_value(kScopes, j["scope"], "cap scope");
    get_opt(j, "max", c.max);
    get_opt(j, "max_fraction_of_days", c.max_fraction_of_days);
    return c;
}

json policy_to_json(const WeekendPolicy& w) {
    json j = json::object();
    put_opt(j, "max_we", w.max_we);
    put_opt(j, "des_max_we", w.des_max_we);
    put_opt(j, "min_free_we", w.min_free_we);
    put_opt(j, "des_min_free_we", w.des_min_free_we);
    put_opt(j, "cons_we", w.cons_we);
    put_opt(j, "preference_violation_weight", w.preference_violation_weight);
    put_opt(j, "des_max_we_weight", w.des_max_we_weight);
    put_opt(j, "des_min_free_we_weight", w.des_min_free_we_weight);
    return j;
}

WeekendPolicy policy_from_json(const json& j) {
    WeekendPolicy w;
    get_opt(j, "max_we", w.max_we);
    get_opt(j, "des_max_we", w.des_max_we);
    get_opt(j, "min_free_we", w.min_free_we);
    get_opt(j, "des_min_free_we", w.des_min_free_we);
    get_opt(j, "cons_we", w.cons_we);
    get_opt(j, "preference_violation_weight", w.preference_violation_weight);
    get_opt(j, "des_max_we_weight", w.des_max_we_weight);
    get_opt(j, "des_min_free_we_weight", w.des_min_free_we_weight);
    return w;
}

json carryover_to_json(const CarryoverState& c) {
    json a = json::array();
    for (const auto& x : c.assignments)
        a.push_back({{"physician", x.physician}, {"template", x.template_id}, {"date", x.date.str()}});
    json b = json::array();
    for (const auto& x : c.blocks)
        b.push_back({{"id", x.id},
                     {"kind", enum_name(kBlockKinds, x.kind)},
                     {"physicians", x.physicians},
                     {"end_date", x.end_date.str()},
                     {"free_days_after", x.free_days_after}});
    return {{"assignments", a}, {"past_weekends", c.past_weekends}, {"blocks", b}};
}

CarryoverState carryover_from_json(const json& j) {
    CarryoverState c;
    if (j.contains("assignments"))
        for (const auto& x : j["assignments"])
            c.assignments.push_back({x.at("physician").get<std::string>(), x.at("template").get<std::string>(),
                                     Date::parse(x.at("date").get<std::string>())});
    if (j.contains("past_weekends"))
        c.past_weekends = j["past_weekends"].get<std::map<std::string, int>>();
    if (j.contains("blocks"))
        for (const auto& x : j["blocks"]) {
            PreviousBlock b;
            b.id = x.at("id").get<std::string>();
            b.kind = x.contains("kind") ? enum_value(kBlockKinds, x["kind"], "block kind") : BlockKind::Shift;
            b.physicians = string_set(x, "physicians");
            b.end_date = Date::parse(x.at("end_date").get<std::string>());
            b.free_days_after = get_or(x, "free_days_after", 0);
            c.blocks.push_back(b);
        }
    return c;
}

json weights_to_json(const WeightConfig& w) {
    return {{"duty_coverage", w.duty_coverage},
            {"shift_desired_staffing", w.shift_desired_staffing},
            {"shift_above_desired", w.shift_above_desired},
            {"duty_soft_qualification", w.duty_soft_qualification},
            {"shift_soft_qualification", w.shift_soft_qualification},
            {"pool_max", w.pool_max},
            {"pool_min", w.pool_min},
            {"pool_max_phy", w.pool_max_phy},
            {"fair_down", w.fair_down},
            {"fair_up", w.fair_up},
            {"max_weekends", w.max_weekends},
            {"free_weekends", w.free_weekends},
            {"weekend_preference", w.weekend_preference},
            {"strongly_desired", w.strongly_desired},
            {"desired", w.desired},
            {"undesired", w.undesired},
            {"max_consecutive_blocks", w.max_consecutive_blocks},
            {"block_consecutive", w.block_consecutive},
            {"duty_consecutive", w.duty_consecutive},
            {"rest_levels", w.rest_levels}};
}

WeightConfig weights_from_json(const json& j) {
    WeightConfig w;
    auto rd = [&](const char* key, double& field) { field = get_or(j, key, field); };
    rd("duty_coverage", w.duty_coverage);
    rd("shift_desired_staffing", w.shift_desired_staffing);
    rd("shift_above_desired", w.shift_above_desired);
    rd("duty_soft_qualification", w.duty_soft_qualification);
    rd("shift_soft_qualification", w.shift_soft_qualification);
    rd("pool_max", w.pool_max);
    rd("pool_min", w.pool_min);
    rd("pool_max_phy", w.pool_max_phy);
    rd("fair_down", w.fair_down);
    rd("fair_up", w.fair_up);
    rd("max_weekends", w.max_weekends);
    rd("free_weekends", w.free_weekends);
    rd("weekend_preference", w.weekend_preference);
    rd("strongly_desired", w.strongly_desired);
    rd("desired", w.desired);
    rd("undesired", w.undesired);
    rd("max_consecutive_blocks", w.max_consecutive_blocks);
    rd("block_consecutive", w.block_consecutive);
    rd("duty_consecutive", w.duty_consecutive);
    if (j.contains("rest_levels"))
        w.rest_levels = j["rest_levels"].get<std::vector<double>>();
    return w;
}

RosterInstance decode_unchecked(const json& doc) {
    if (!doc.is_object())
        throw DocumentError("instance document must be a JSON object");
    if (!doc.contains("schema_version"))
        throw DocumentError("instance document lacks schema_version");
    const int version = doc["schema_version"].get<int>();
    if (version != kSchemaVersion)
        throw DocumentError("schema-version mismatch: document has " + std::to_string(version) + ", expected " +
                            std::to_string(kSchemaVersion));

    RosterInstance inst;
    inst.schema_version = version;
    inst.department = get_or<std::string>(doc, "department", "");

    const auto& per = doc.at("period");
    inst.period.start = Date::parse(per.at("start").get<std::string>());
    inst.period.end = Date::parse(per.at("end").get<std::string>());
    if (per.contains("public_holidays"))
        inst.period.public_holidays = dates_from_json(per["public_holidays"]);
    if (per.contains("weekend_threshold"))
        inst.period.weekend_threshold = parse_clock(per["weekend_threshold"].get<std::string>());

    if (doc.contains("qualifications"))
        for (const auto& q : doc["qualifications"])
            inst.qualifications.push_back({q.at("id").get<std::string>(), get_or<std::string>(q, "label", "")});

    if (doc.contains("physicians"))
        for (const auto& p : doc["physicians"]) {
            Physician ph;
            ph.id = p.at("id").get<std::string>();
            ph.name = get_or<std::string>(p, "name", "");
            ph.employment_rate = get_or(p, "employment_rate", 1.0);
            ph.qualifications = string_set(p, "qualifications");
            if (p.contains("absences"))
                ph.absences = dates_from_json(p["absences"]);
            ph.planned_manually = get_or(p, "planned_manually", false);
            if (p.contains("weekend_preference"))
                ph.weekend_preference = enum_value(kWeekendPrefs, p["weekend_preference"], "weekend preference");
            inst.physicians.push_back(std::move(ph));
        }

    if (doc.contains("duty_templates"))
        for (const auto& t : doc["duty_templates"])
            inst.duty_templates.push_back(duty_from_json(t));
    if (doc.contains("shift_templates"))
        for (const auto& t : doc["shift_templates"])
            inst.shift_templates.push_back(shift_from_json(t));
    if (doc.contains("manual_assignments"))
        for (const auto& m : doc["manual_assignments"])
            inst.manual_assignments.push_back({m.at("instance").get<std::string>(), m.at("physician").get<std::string>()});
    if (doc.contains("blocks"))
        for (const auto& b : doc["blocks"])
            inst.blocks.push_back(block_from_json(b));
    if (doc.contains("rest_rules"))
        for (const auto& r : doc["rest_rules"])
            inst.rest_rules.push_back(rest_from_json(r));
    if (doc.contains("pools"))
        for (const auto& p : doc["pools"])
            inst.pools.push_back(pool_from_json(p));
    if (doc.contains("weekly_sets"))
        for (const auto& s : doc["weekly_sets"]) {
            WeeklySet ws;
            ws.id = s.at("id").get<std::string>();
            ws.label = get_or<std::string>(s, "label", "");
            ws.templates = string_set(s, "templates");
            if (s.contains("weekdays"))
                ws.weekdays = weekdays_from_json(s["weekdays"]);
            inst.weekly_sets.push_back(std::move(ws));
        }
    if (doc.contains("preferences"))
        for (const auto& p : doc["preferences"])
            inst.preferences.push_back(preference_from_json(p));
    if (doc.contains("preference_caps"))
        for (const auto& c : doc["preference_caps"])
            inst.preference_caps.push_back(cap_from_json(c));
    if (doc.contains("weekend_policy"))
        inst.weekend_policy = policy_from_json(doc["weekend_policy"]);
    if (doc.contains("carryover"))
        inst.carryover = carryover_from_json(doc["carryover"]);
    if (doc.contains("weights"))
        inst.weights = weights_from_json(doc["weights"]);
    return inst;
}

}  // namespace

PreferenceLevel parse_preference_level(std::string_view s) {
    for (const auto& e : kLevels)
        if (s == e.name)
            return e.value;
    throw DocumentError("unknown preference level '" + std::string(s) + "'");
}

json weekdays_to_json(const WeekdaySet& days) {
    json a = json::array();
    for (int i = 0; i < 7; ++i)
        if (days.test(static_cast<std::size_t>(i)))
            a.push_back(weekday_name(i));
    return a;
}

WeekdaySet weekdays_from_json(const json& j) {
    WeekdaySet s;
    for (const auto& e : j)
        s.set(static_cast<std::size_t>(parse_weekday(e.get<std::string>())));
    return s;
}

json preference_to_json(const PreferenceRecord& pref) {
    json j{{"physician", pref.physician}, {"level", enum_name(kLevels, pref.level)}};
    if (pref.target == PreferenceTarget::Instance) {
        j["instance"] = pref.instance;
    } else {
        j["weekly_set"] = pref.weekly_set;
        j["week"] = pref.week;
    }
    return j;
}

PreferenceRecord preference_from_json(const json& j) {
    try {
        PreferenceRecord p;
        p.physician = j.at("physician").get<std::string>();
        p.level = enum_value(kLevels, j.at("level"), "preference level");
        if (j.contains("weekly_set")) {
            p.target = PreferenceTarget::Weekly;
            p.weekly_set = j["weekly_set"].get<std::string>();
            p.week = j.at("week").get<int>();
        } else {
            p.target = PreferenceTarget::Instance;
            p.instance = j.at("instance").get<std::string>();
        }
        return p;
    } catch (const json::exception& e) {
        throw DocumentError(std::string("malformed preference: ") + e.what());
    }
}

json instance_to_json(const RosterInstance& inst) {
    json doc;
    doc["schema_version"] = inst.schema_version;
    doc["department"] = inst.department;
    doc["period"] = {{"start", inst.period.start.str()},
                     {"end", inst.period.end.str()},
                     {"public_holidays", dates_to_json(inst.period.public_holidays)},
                     {"weekend_threshold", format_clock(inst.period.weekend_threshold)}};

    json quals = json::array();
    for (const auto& q : inst.qualifications)
        quals.push_back({{"id", q.id}, {"label", q.label}});
    doc["qualifications"] = quals;

    json phys = json::array();
    for (const auto& p : inst.physicians)
        phys.push_back({{"id", p.id},
                        {"name", p.name},
                        {"employment_rate", p.employment_rate},
                        {"qualifications", p.qualifications},
                        {"absences", dates_to_json(p.absences)},
                        {"planned_manually", p.planned_manually},
                        {"weekend_preference", enum_name(kWeekendPrefs, p.weekend_preference)}});
    doc["physicians"] = phys;

    json duties = json::array();
    for (const auto& t : inst.duty_templates)
        duties.push_back(duty_to_json(t));
    doc["duty_templates"] = duties;

    json shifts = json::array();
    for (const auto& t : inst.shift_templates)
        shifts.push_back(shift_to_json(t));
    doc["shift_templates"] = shifts;

    json manual = json::array();
    for (const auto& m : inst.manual_assignments)
        manual.push_back({{"instance", m.instance}, {"physician", m.physician}});
    doc["manual_assignments"] = manual;

    json blocks = json::array();
    for (const auto& b : inst.blocks)
        blocks.push_back(block_to_json(b));
    doc["blocks"] = blocks;

    json rules = json::array();
    for (const auto& r : inst.rest_rules)
        rules.push_back(rest_to_json(r));
    doc["rest_rules"] = rules;

    json pools = json::array();
    for (const auto& p : inst.pools)
        pools.push_back(pool_to_json(p));
    doc["pools"] = pools;

    json sets = json::array();
    for (const auto& s : inst.weekly_sets)
        sets.push_back({{"id", s.id}, {"label", s.label}, {"templates", s.templates}, {"weekdays", weekdays_to_json(s.weekdays)}});
    doc["weekly_sets"] = sets;

    json prefs = json::array();
    for (const auto& p : inst.preferences)
        prefs.push_back(preference_to_json(p));
    doc["preferences"] = prefs;

    json caps = json::array();
    for (const auto& c : inst.preference_caps)
        caps.push_back(cap_to_json(c));
    doc["preference_caps"] = caps;

    doc["weekend_policy"] = policy_to_json(inst.weekend_policy);
    doc["carryover"] = carryover_to_json(inst.carryover);
    doc["weights"] = weights_to_json(inst.weights);
    return doc;
}

RosterInstance instance_from_json(const json& doc) {
    try {
        return decode_unchecked(doc);
    } catch (const json::exception& e) {
        throw DocumentError(std::string("malformed instance document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DocumentError(std::string("malformed instance document: ") + e.what());
    }
}

std::string encode_instance(const RosterInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

RosterInstance decode_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DocumentError(std::string("instance document is not valid JSON: ") + e.what());
    }
    return instance_from_json(doc);
}

std::string read_text(const std::filesystem::path& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

RosterInstance load_instance_file(const std::filesystem::path& path) { return decode_instance(read_text(path)); }

void save_instance_file(const std::filesystem::path& path, const RosterInstance& inst) {
    write_text(path, encode_instance(inst));
}

}  // namespace roster
