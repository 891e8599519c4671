#include "helpers.hpp"

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/ical.hpp"
#include "roster/instance_io.hpp"
#include "roster/oracle.hpp"
#include "roster/pipeline.hpp"
#include "roster/report.hpp"
#include "roster/roster.hpp"
#include "roster/scenarios.hpp"
#include "roster/validator.hpp"

#include <doctest.h>

#include <cmath>

using namespace roster;
using namespace roster::testing;

namespace {

RosterInstance nights(int days) {
    RosterInstance inst = base_instance(days, 2);
    inst.duty_templates = {make_duty("N", 20 * 60, 32 * 60)};
    inst.rest_rules = {{"N", "N", 24 * 60, {{48 * 60, std::nullopt}, {72 * 60, std::nullopt}}}};
    return inst;
}

RosterSolution roster_of(const RosterInstance& inst, const DerivedSets& der, std::vector<Assignment> a) {
    RosterSolution r;
    r.department = inst.department;
    r.period_start = inst.period.start;
    r.period_end = inst.period.end;
    r.assignments = std::move(a);
    normalize_roster(r, der);
    return r;
}

std::string night(int day) { return instance_id("N", Date(2026, 3, 2) + day); }

}  // namespace

TEST_CASE("validate_hard: clean roster has no findings") {
    const RosterInstance inst = nights(3);
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {{"p1", night(0)}, {"p2", night(1)}, {"p1", night(2)}});
    CHECK(validate_hard(r, inst, der).empty());
}

TEST_CASE("validate_hard: consecutive nights for one physician") {
    const RosterInstance inst = nights(3);
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {{"p1", night(0)}, {"p1", night(1)}, {"p2", night(2)}});
    const auto f = validate_hard(r, inst, der);
    REQUIRE(f.size() == 1);
    CHECK(f[0].family.rfind("14", 0) == 0);
    // 12 h gap against 24 h mandatory rest
    CHECK(f[0].magnitude == doctest::Approx(12.0));
}

TEST_CASE("validate_hard: uncovered mandatory duty") {
    const RosterInstance inst = nights(3);
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {{"p1", night(0)}, {"p2", night(1)}});
    const auto f = validate_hard(r, inst, der);
    REQUIRE(f.size() == 1);
    CHECK(f[0].family == "1");
    REQUIRE(f[0].subjects.size() == 1);
    CHECK(f[0].subjects[0] == night(2));
}

TEST_CASE("validate_hard: unknown ids are document errors") {
    const RosterInstance inst = nights(2);
    const DerivedSets der = derive_all(inst);
    RosterSolution r;
    r.assignments = {{"nobody", night(0)}};
    CHECK_THROWS_AS(validate_hard(r, inst, der), DocumentError);
}

TEST_CASE("recount: empty roster with only optional duties") {
    RosterInstance inst = base_instance(3, 2);
    inst.duty_templates = {make_duty("O", 8 * 60, 16 * 60, false)};
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {});
    const SoftTally t = recount_soft(r, inst, der, inst.weights);
    CHECK(t.objective == 0);
    CHECK(t.unassigned_duties == 3);
    CHECK(t.desired_rest_by_level.empty());
    CHECK(t.fair_below == 0);
    CHECK(t.fair_above == 0);
    CHECK(t.consecutive_duty_pairs == 0);
}

TEST_CASE("recount: one pair at the 48 h desired rest level") {
    const RosterInstance inst = nights(3);
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {{"p1", night(0)}, {"p2", night(1)}, {"p1", night(2)}});
    const SoftTally t = recount_soft(r, inst, der, inst.weights);
    CHECK(t.desired_rest_by_level == std::map<int, int>{{48 * 60, 1}});
    CHECK(t.objective == doctest::Approx(-inst.weights.rest_levels[0]));
}

TEST_CASE("recount: fairness shortfall below the floor of the target") {
    // Five pool duties, rates 0.68 and 0.32: targets 3.4 and 1.6.
    RosterInstance inst = base_instance(5, 2);
    inst.physicians[0].employment_rate = 0.68;
    inst.physicians[1].employment_rate = 0.32;
    inst.duty_templates = {make_duty("F", 8 * 60, 16 * 60)};
    Pool pool;
    pool.id = "fair";
    pool.physicians = {"p1", "p2"};
    pool.duties.templates = {"F"};
    pool.fair_distribution = true;
    inst.pools = {pool};
    const DerivedSets der = derive_all(inst);
    REQUIRE(der.pools.size() == 1);
    CHECK(der.pools[0].targets[0] == doctest::Approx(3.4));
    CHECK(der.pools[0].targets[1] == doctest::Approx(1.6));

    auto f = [](int d) { return instance_id("F", Date(2026, 3, 2) + d); };
    const auto r = roster_of(inst, der, {{"p1", f(0)}, {"p1", f(1)}, {"p2", f(2)}, {"p2", f(3)}, {"p2", f(4)}});
    const SoftTally t = recount_soft(r, inst, der, inst.weights);
    CHECK(t.fair_below == 1);  // floor(3.4) - 2
    CHECK(t.fair_above == 1);  // 3 - ceil(1.6)
    CHECK(t.objective == doctest::Approx(-inst.weights.fair_down - inst.weights.fair_up));
}

TEST_CASE("recount equals the oracle objective on random tiny instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RosterInstance inst = random_tiny_instance(seed);
        const DerivedSets der = derive_all(inst);
        const CanonicalModel m = build_model(inst, der, inst.weights);
        const RawSolution o = exhaustive_oracle(m);
        if (!has_solution(o.status))
            continue;
        const RosterSolution r = extract_roster(o, inst, der);
        CHECK_MESSAGE(validate_hard(r, inst, der).empty(), "seed " << seed);
        CHECK_MESSAGE(std::abs(recount_soft(r, inst, der, inst.weights).objective - o.objective) <= 1e-6, "seed " << seed);
    }
}

TEST_CASE("pipeline: oracle backend on the two-by-two demo") {
    SolveRequest req;
    req.backend = Backend::Oracle;
    const PipelineResult r = run_pipeline(two_by_two_instance(), req);
    CHECK(r.hard_findings.empty());
    CHECK(r.roster.assignments.size() == 2);
    CHECK(r.report.hard_findings == 0);
    CHECK(r.report.unassigned_duties == 0);
}

TEST_CASE("pipeline: stage tags on failure") {
    SolveRequest req;
    req.backend = Backend::Oracle;
    RosterInstance bad = two_by_two_instance();
    bad.period.end = bad.period.start - 1;
    try {
        run_pipeline(bad, req);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "check");
    }

    RosterInstance clash = two_by_two_instance();
    clash.rest_rules = {{"*", "*", 0, {}}};
    clash.manual_assignments = {{"A@2026-03-02", "p01"}, {"B@2026-03-02", "p01"}};
    try {
        run_pipeline(clash, req);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "build");
        CHECK(e.to_json()["stage"] == "build");
    }

    SolveRequest missing;
    missing.solver = SolverConfig{"/nonexistent/solver", SolverKind::Cbc, {}};
    try {
        run_pipeline(two_by_two_instance(), missing);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        CHECK(e.stage() == "solve");
        CHECK(e.cause() == "solver-environment");
    }
}

TEST_CASE("documents: instance, roster and report round trips") {
    for (const auto& name : scenario_names()) {
        const RosterInstance inst = make_scenario(name, 1);
        CHECK_MESSAGE(decode_instance(encode_instance(inst)) == inst, name);
    }
    SolveRequest req;
    req.backend = Backend::Oracle;
    const PipelineResult r = run_pipeline(two_by_two_instance(), req);
    CHECK(decode_roster(encode_roster(r.roster)) == r.roster);
    CHECK(encode_report(decode_report(encode_report(r.report))) == encode_report(r.report));
    CHECK_THROWS_AS(decode_roster(encode_report(r.report)), DocumentError);
    CHECK_THROWS_AS(decode_instance("{\"schema_version\": 99}"), DocumentError);
}

TEST_CASE("report: desired preferences granted and comparison deltas") {
    RosterInstance inst = two_by_two_instance();
    PreferenceRecord pref;
    pref.physician = "p01";
    pref.instance = "A@2026-03-02";
    pref.level = PreferenceLevel::Desired;
    inst.preferences = {pref};
    const DerivedSets der = derive_all(inst);
    const auto granted = roster_of(inst, der, {{"p01", "A@2026-03-02"}, {"p02", "B@2026-03-02"}});
    const auto denied = roster_of(inst, der, {{"p02", "A@2026-03-02"}, {"p01", "B@2026-03-02"}});
    const QualityReport a = quality_report(granted, inst, der, {});
    const QualityReport b = quality_report(denied, inst, der, {});
    auto desired = [](const QualityReport& q) {
        for (const auto& p : q.preferences)
            if (p.level == PreferenceLevel::Desired && !p.weekly)
                return p;
        return PreferenceStat{};
    };
    CHECK(desired(a).selected == 1);
    CHECK(desired(a).assigned == desired(a).selected);
    CHECK(desired(b).assigned == 0);

    const auto deltas = compare_reports(a, b);
    bool seen = false;
    for (const auto& d : deltas) {
        CHECK(d.delta == doctest::Approx(d.second - d.first));
        if (d.first != d.second)
            seen = true;
    }
    CHECK(seen);
    CHECK_FALSE(render_report_table(a).empty());
}

TEST_CASE("ical: night duty spans into the next day") {
    RosterInstance inst = base_instance(1, 1);
    DutyTemplate n = make_duty("N1", 20 * 60, 32 * 60);
    n.label = "Night, ward 1";
    inst.duty_templates = {n};
    const DerivedSets der = derive_all(inst);
    const auto r = roster_of(inst, der, {{"p1", instance_id("N1", Date(2026, 3, 2))}});
    const std::string ics = roster_to_ics(r, inst, der, "p1", "20260301T000000Z");
    CHECK(ics.find("BEGIN:VCALENDAR\r\n") == 0);
    CHECK(ics.find("DTSTART:20260302T200000\r\n") != std::string::npos);
    CHECK(ics.find("DTEND:20260303T080000\r\n") != std::string::npos);
    CHECK(ics.find("SUMMARY:Night\\, ward 1\r\n") != std::string::npos);
    std::size_t events = 0;
    for (std::size_t pos = 0; (pos = ics.find("BEGIN:VEVENT", pos)) != std::string::npos; ++pos)
        ++events;
    CHECK(events == 1);
    CHECK_THROWS_AS(roster_to_ics(r, inst, der, "nobody", "20260301T000000Z"), DocumentError);
}

TEST_CASE("ical: line folding") {
    const std::string line(200, 'a');
    const std::string folded = ics_fold(line);
    std::size_t start = 0;
    while (true) {
        const auto end = folded.find("\r\n", start);
        REQUIRE(end != std::string::npos);
        CHECK(end - start <= 75);
        start = end + 2;
        if (start >= folded.size())
            break;
        CHECK(folded[start] == ' ');
    }
    CHECK(ics_escape("a;b,c\\d\ne") == "a\\;b\\,c\\\\d\\ne");
}
