#include "helpers.hpp"

#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/instance_check.hpp"
#include "roster/scenarios.hpp"

#include <doctest.h>

#include <algorithm>

using namespace roster;
using namespace roster::testing;

TEST_CASE("calendar: full month has weekend factor one") {
    PlanningPeriod p;
    p.start = Date(2026, 3, 1);
    p.end = Date(2026, 3, 31);
    std::vector<Weekend> weekends;
    std::vector<Month> months;
    compute_calendar(p, weekends, months);
    REQUIRE(months.size() == 1);
    CHECK(months[0].saturdays_total == 4);
    CHECK(months[0].we_factor == doctest::Approx(1.0));
}

TEST_CASE("calendar: period across a month boundary") {
    // March 2026 Saturdays: 7, 14, 21, 28. April 2026 Saturdays: 4, 11, 18, 25.
    PlanningPeriod p;
    p.start = Date(2026, 3, 16);
    p.end = Date(2026, 4, 12);
    std::vector<Weekend> weekends;
    std::vector<Month> months;
    compute_calendar(p, weekends, months);
    REQUIRE(months.size() == 2);
    CHECK(months[0].month == 3);
    CHECK(months[1].month == 4);
    CHECK(months[0].saturdays_in_period == 2);
    CHECK(months[1].saturdays_in_period == 2);
    CHECK(months[0].we_factor == doctest::Approx(0.5));
    CHECK(months[1].we_factor == doctest::Approx(0.5));
    REQUIRE(months[0].weekends.size() == 2);
    REQUIRE(months[1].weekends.size() == 2);
    CHECK(weekends[static_cast<std::size_t>(months[0].weekends[0])].saturday == Date(2026, 3, 21));
    CHECK(weekends[static_cast<std::size_t>(months[0].weekends[1])].saturday == Date(2026, 3, 28));
    CHECK(weekends[static_cast<std::size_t>(months[1].weekends[0])].saturday == Date(2026, 4, 4));
    CHECK(weekends[static_cast<std::size_t>(months[1].weekends[1])].saturday == Date(2026, 4, 11));
}

TEST_CASE("expansion: daily night duty over March") {
    const RosterInstance inst = internal_medicine_scenario(1);
    const auto acts = expand_instances(inst);
    std::vector<Activity> n1;
    std::copy_if(acts.begin(), acts.end(), std::back_inserter(n1), [](const auto& a) { return a.template_id == "N1"; });
    REQUIRE(n1.size() == 31);
    for (std::size_t i = 0; i < n1.size(); ++i) {
        CHECK(n1[i].end - n1[i].start == 12 * 60);
        CHECK(n1[i].start == static_cast<int>(i) * kMinutesPerDay + 20 * 60);
        CHECK(n1[i].id == instance_id("N1", Date(2026, 3, 1) + static_cast<int>(i)));
    }
}

TEST_CASE("expansion: weekend duty over a week without holidays") {
    RosterInstance inst = base_instance(7, 1);
    DutyTemplate d = make_duty("D1", 8 * 60, 20 * 60);
    d.weekdays = WeekdaySet{}.set(5).set(6);
    d.holiday_rule = DayRule::Also;
    inst.duty_templates = {d};
    const auto acts = expand_instances(inst);
    REQUIRE(acts.size() == 2);
    CHECK(acts[0].date == Date(2026, 3, 7));
    CHECK(acts[1].date == Date(2026, 3, 8));
}

TEST_CASE("expansion: empty weekday set never on holidays") {
    RosterInstance inst = base_instance(7, 1);
    DutyTemplate d = make_duty("X", 0, 60);
    d.weekdays = WeekdaySet{};
    d.holiday_rule = DayRule::Never;
    inst.duty_templates = {d};
    CHECK(expand_instances(inst).empty());
}

namespace {

RosterInstance night_instance(int days) {
    RosterInstance inst = base_instance(days, 2);
    inst.duty_templates = {make_duty("N", 20 * 60, 32 * 60)};
    inst.rest_rules = {{"N", "N", 24 * 60, {{48 * 60, std::nullopt}, {72 * 60, std::nullopt}}}};
    return inst;
}

}  // namespace

TEST_CASE("conflicts: consecutive nights violate 24 h mandatory rest") {
    const DerivedSets der = derive_all(night_instance(2));
    REQUIRE(der.conflicts.size() == 1);
    CHECK(der.activities[static_cast<std::size_t>(der.conflicts[0].first)].date == Date(2026, 3, 2));
    CHECK(der.activities[static_cast<std::size_t>(der.conflicts[0].second)].date == Date(2026, 3, 3));
    CHECK(der.soft_conflicts.empty());
}

TEST_CASE("conflicts: nights two days apart hit the 48 h level") {
    const DerivedSets der = derive_all(night_instance(3));
    // gap between day 0 08:00 and day 2 20:00 is 36 h
    REQUIRE(der.soft_conflicts.size() == 1);
    const auto& s = der.soft_conflicts[0];
    CHECK(der.activities[static_cast<std::size_t>(s.first)].date == Date(2026, 3, 2));
    CHECK(der.activities[static_cast<std::size_t>(s.second)].date == Date(2026, 3, 4));
    CHECK(s.level == 0);
    CHECK(s.rest == 48 * 60);
    CHECK(der.conflicts.size() == 2);
}

TEST_CASE("conflicts: negative mandatory rest permits overlap") {
    RosterInstance inst = base_instance(1, 1);
    inst.duty_templates = {make_duty("A", 8 * 60, 12 * 60), make_duty("B", 11 * 60, 15 * 60)};
    inst.rest_rules = {{"A", "B", -2 * 60, {}}};
    const DerivedSets der = derive_all(inst);
    CHECK(der.conflicts.empty());

    inst.rest_rules = {{"A", "B", -30, {}}};
    CHECK(derive_all(inst).conflicts.size() == 1);
}

TEST_CASE("carryover: empty carryover gives empty sets") {
    const DerivedSets der = derive_all(night_instance(3));
    for (const auto& s : der.carry_hard)
        CHECK(s.empty());
    for (const auto& s : der.carry_soft)
        CHECK(s.empty());
    for (int w : der.past_weekends)
        CHECK(w == 0);
}

TEST_CASE("carryover: night on the previous day blocks day-one ward shifts") {
    RosterInstance inst = base_instance(3, 1);
    inst.duty_templates = {make_duty("N", 20 * 60, 32 * 60, false)};
    ShiftTemplate w = make_shift("W", 7 * 60 + 15, 16 * 60);
    w.ward_members = {"p1"};
    inst.shift_templates = {w};
    inst.rest_rules = {{"*", "*", 11 * 60, {}}};
    inst.carryover.assignments = {{"p1", "N", Date(2026, 3, 1)}};
    const DerivedSets der = derive_all(inst);
    const int w0 = der.activity_index.at(instance_id("W", Date(2026, 3, 2)));
    const int w1 = der.activity_index.at(instance_id("W", Date(2026, 3, 3)));
    const int n0 = der.activity_index.at(instance_id("N", Date(2026, 3, 2)));
    CHECK(der.carry_hard[0].count(w0) == 1);
    CHECK(der.carry_hard[0].count(w1) == 0);
    // 08:00 to 20:00 is 12 h, above the 11 h rest
    CHECK(der.carry_hard[0].count(n0) == 0);
}

TEST_CASE("carryover: free days after a previous-period block") {
    RosterInstance inst = base_instance(4, 1);
    inst.duty_templates = {make_duty("D", 8 * 60, 16 * 60, false)};
    inst.carryover.blocks = {{"prev", BlockKind::Duty, {"p1"}, Date(2026, 3, 1), 2}};
    const DerivedSets der = derive_all(inst);
    for (const auto& a : der.activities) {
        const bool blocked = der.carry_hard[0].count(der.activity_index.at(a.id)) > 0;
        CHECK(blocked == (a.day < 2));
    }
}

TEST_CASE("target numbers") {
    SUBCASE("symmetry") {
        const auto t = compute_target_numbers(10, {1.0, 1.0}, {20, 20});
        CHECK(t[0] == doctest::Approx(5.0));
        CHECK(t[1] == doctest::Approx(5.0));
    }
    SUBCASE("employment rates") {
        const auto t = compute_target_numbers(10, {1.0, 0.6}, {20, 20});
        CHECK(t[0] == doctest::Approx(6.25).epsilon(1e-12));
        CHECK(t[1] == doctest::Approx(3.75).epsilon(1e-12));
        CHECK(std::abs(t[0] + t[1] - 10.0) <= 1e-9);
    }
    SUBCASE("absent on every pool day") {
        const auto t = compute_target_numbers(10, {1.0, 1.0}, {20, 0});
        CHECK(t[0] == doctest::Approx(10.0));
        CHECK(t[1] == 0.0);
    }
    SUBCASE("degenerate pool") {
        CHECK_THROWS_AS(compute_target_numbers(3, {1.0}, {0}), DegeneratePoolError);
    }
}

TEST_CASE("target numbers sum to the pool size in the bundled scenarios") {
    for (const auto& name : scenario_names()) {
        const DerivedSets der = derive_all(make_scenario(name, 1));
        for (const auto& pool : der.pools) {
            if (pool.targets.empty())
                continue;
            double sum = 0;
            for (double t : pool.targets)
                sum += t;
            CHECK(std::abs(sum - static_cast<double>(pool.duties.size())) <= 1e-9);
        }
    }
}

TEST_CASE("qualification filters") {
    QualificationRules none;
    CHECK(check_qualification(none, {}).hard);
    CHECK(check_qualification(none, {}).soft);

    QualificationRules icu;
    icu.required = {"icu"};
    CHECK_FALSE(check_qualification(icu, {"ward-1"}).hard);
    CHECK(check_qualification(icu, {"icu"}).hard);

    QualificationRules senior;
    senior.undesired = {"board-certified"};
    const auto q = check_qualification(senior, {"board-certified"});
    CHECK(q.hard);
    CHECK_FALSE(q.soft);
}

TEST_CASE("instance check: well-formed demo has no errors") {
    RosterInstance inst = base_instance(7, 3);
    inst.duty_templates = {make_duty("N", 20 * 60, 32 * 60)};
    CHECK(count_errors(validate_instance(inst)) == 0);
}

TEST_CASE("instance check: required and excluded qualification overlap") {
    RosterInstance inst = base_instance(7, 3);
    inst.qualifications = {{"icu", "ICU"}};
    DutyTemplate d = make_duty("N", 20 * 60, 32 * 60);
    d.quals.required = {"icu"};
    d.quals.excluded = {"icu"};
    inst.duty_templates = {d};
    const auto findings = validate_instance(inst);
    REQUIRE(count_errors(findings) >= 1);
    CHECK(std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
        return f.message.find("qualification conflict") != std::string::npos;
    }));
}

TEST_CASE("instance check: eleventh undesired preference exceeds the cap of ten") {
    RosterInstance inst = internal_medicine_scenario(1);
    const std::string who = "p01";
    std::erase_if(inst.preferences, [&](const auto& r) { return r.physician == who; });
    for (auto& p : inst.physicians)
        if (p.id == who)
            p.absences.clear();
    auto add_undesired = [&](int day) {
        PreferenceRecord r;
        r.physician = who;
        r.instance = instance_id("N1", Date(2026, 3, 1) + day);
        r.level = PreferenceLevel::Undesired;
        inst.preferences.push_back(r);
    };
    for (int d = 0; d < 10; ++d)
        add_undesired(d);
    CHECK(check_preference_caps(inst, who).empty());
    add_undesired(10);
    const auto findings = check_preference_caps(inst, who);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].code == "preference-cap");
    CHECK(findings[0].message.find("cap of 10") != std::string::npos);
    CHECK(count_errors(validate_instance(inst)) >= 1);
}

TEST_CASE("instance check: fourth impossible day exceeds the cap of three") {
    RosterInstance inst = internal_medicine_scenario(1);
    const std::string who = "p01";
    std::erase_if(inst.preferences, [&](const auto& r) { return r.physician == who; });
    for (auto& p : inst.physicians)
        if (p.id == who)
            p.absences.clear();
    for (int d = 0; d < 4; ++d) {
        PreferenceRecord r;
        r.physician = who;
        r.instance = instance_id("N1", Date(2026, 3, 1) + d);
        r.level = PreferenceLevel::Impossible;
        inst.preferences.push_back(r);
        CHECK(check_preference_caps(inst, who).size() == (d < 3 ? 0u : 1u));
    }
    const auto f = check_preference_caps(inst, who);
    REQUIRE(f.size() == 1);
    CHECK(f[0].message.find("cap of 3") != std::string::npos);
}
