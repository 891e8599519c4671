#include "helpers.hpp"

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/mps.hpp"
#include "roster/oracle.hpp"
#include "roster/roster.hpp"
#include "roster/scenarios.hpp"
#include "roster/solver.hpp"

#include <doctest.h>

#include <set>

using namespace roster;
using namespace roster::testing;

namespace {

CanonicalModel model_of(const RosterInstance& inst) { return build_model(inst, derive_all(inst), inst.weights); }

RosterInstance cross_instance() {
    RosterInstance inst = two_by_two_instance();
    inst.rest_rules = {{"*", "*", 0, {}}};
    return inst;
}

std::set<std::string> families(const CanonicalModel& m) {
    std::set<std::string> out;
    for (const auto& [f, n] : model_statistics(m).families)
        if (n > 0)
            out.insert(f);
    return out;
}

std::set<std::string> variable_groups(const CanonicalModel& m) {
    std::set<std::string> out;
    for (const auto& [g, n] : model_statistics(m).variable_groups)
        if (n > 0)
            out.insert(g);
    return out;
}

}  // namespace

TEST_CASE("build: empty instance gives an empty model") {
    const RosterInstance inst = base_instance(7, 0);
    const CanonicalModel m = model_of(inst);
    CHECK(m.vars().empty());
    CHECK(m.rows().empty());
    const auto s = model_statistics(m);
    CHECK(s.variables == 0);
    CHECK(s.constraints == 0);
    CHECK(s.nonzeros == 0);
}

TEST_CASE("build: two physicians and two mandatory duties") {
    const CanonicalModel m = model_of(two_by_two_instance());
    const auto s = model_statistics(m);
    CHECK(s.variables == 4);
    CHECK(s.binary == 4);
    CHECK(s.integer == 0);
    CHECK(s.constraints == 2);
    CHECK(s.families == std::map<std::string, int>{{"1", 2}});
    for (const auto& v : m.vars())
        CHECK(v.obj == 0);
    for (const auto& r : m.rows()) {
        CHECK(r.sense == Sense::EQ);
        CHECK(r.rhs == 1);
    }
}

TEST_CASE("build: family counts partition the rows") {
    const CanonicalModel m = model_of(random_tiny_instance(3));
    const auto s = model_statistics(m);
    int sum = 0;
    for (const auto& [f, n] : s.families)
        sum += n;
    CHECK(sum == s.constraints);
}

TEST_CASE("build: clashing manual assignments are rejected") {
    RosterInstance inst = cross_instance();
    inst.manual_assignments = {{"A@2026-03-02", "p01"}, {"B@2026-03-02", "p01"}};
    const DerivedSets der = derive_all(inst);
    CHECK_FALSE(find_build_clashes(inst, der).empty());
    CHECK_THROWS_AS(build_model(inst, der, inst.weights), BuildInfeasibleError);
}

TEST_CASE("family omission: block-free and pool-free configurations") {
    const RosterInstance full = cardiology_scenario(1);
    const CanonicalModel m_full = model_of(full);
    const auto fam_full = families(m_full);
    CHECK(fam_full.count("20") == 1);
    CHECK(fam_full.count("34") == 1);

    const std::set<std::string> block_families = {"20", "21", "22", "23", "24"};
    const std::set<std::string> block_vars = {"xBlk", "yBlk", "yBlkCons", "vioMaxConsB"};
    const std::set<std::string> pool_families = {"27", "28", "29", "30", "31", "32", "33", "34", "35"};
    const std::set<std::string> pool_vars = {"vioMaxD", "vioMinD", "vioMaxPhy", "vioDown", "vioUp"};

    RosterInstance no_blocks = full;
    no_blocks.blocks.clear();
    const CanonicalModel m1 = model_of(no_blocks);
    for (const auto& f : families(m1))
        CHECK_MESSAGE(block_families.count(f) == 0, "family " << f);
    for (const auto& g : variable_groups(m1))
        CHECK_MESSAGE(block_vars.count(g) == 0, "variables " << g);

    RosterInstance no_pools = full;
    no_pools.pools.clear();
    const CanonicalModel m2 = model_of(no_pools);
    for (const auto& f : families(m2))
        CHECK_MESSAGE(pool_families.count(f) == 0, "family " << f);
    for (const auto& g : variable_groups(m2))
        CHECK_MESSAGE(pool_vars.count(g) == 0, "variables " << g);
}

TEST_CASE("mps: empty model") {
    const auto doc = emit_mps(CanonicalModel{});
    CHECK(doc.text ==
          "NAME          ROSTER\n"
          "OBJSENSE\n"
          "    MAX\n"
          "ROWS\n"
          " N  OBJ\n"
          "COLUMNS\n"
          "RHS\n"
          "BOUNDS\n"
          "ENDATA\n");
}

TEST_CASE("mps: two physicians and two mandatory duties") {
    const auto doc = emit_mps(model_of(two_by_two_instance()));
    CHECK(doc.text ==
          "NAME          ROSTER\n"
          "OBJSENSE\n"
          "    MAX\n"
          "ROWS\n"
          " N  OBJ\n"
          " E  R0000001\n"
          " E  R0000002\n"
          "COLUMNS\n"
          "    MARKER    'MARKER'                 'INTORG'\n"
          "    C0000001  R0000001  1\n"
          "    C0000002  R0000002  1\n"
          "    C0000003  R0000001  1\n"
          "    C0000004  R0000002  1\n"
          "    MARKER    'MARKER'                 'INTEND'\n"
          "RHS\n"
          "    RHS       R0000001  1\n"
          "    RHS       R0000002  1\n"
          "BOUNDS\n"
          " BV BND       C0000001\n"
          " BV BND       C0000002\n"
          " BV BND       C0000003\n"
          " BV BND       C0000004\n"
          "ENDATA\n");
    CHECK(doc.names.columns.at("C0000001") == "x[p01,A@2026-03-02]");
    CHECK(doc.names.rows.at("R0000002") == "c1[B@2026-03-02]");
    CHECK(MpsNames::from_text(doc.names.to_text()).columns == doc.names.columns);
}

TEST_CASE("mps: round trip and fixpoint") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const CanonicalModel m = model_of(random_tiny_instance(seed));
        const auto doc = emit_mps(m);
        const CanonicalModel back = parse_mps(doc.text, doc.names);
        CHECK(back == m);
        CHECK(emit_mps(back).text == doc.text);
    }
}

TEST_CASE("mps: number formatting") {
    CHECK(mps_number(1) == "1");
    CHECK(mps_number(-0.5) == "-0.5");
    CHECK(mps_number(1e-7).size() <= 12);
    CHECK(std::stod(mps_number(1.0 / 3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(tag_from_row_name("c14.2[p1,a,b]") == "14.2");
    CHECK(tag_from_row_name("OBJ").empty());
}

TEST_CASE("oracle: empty model") {
    const RawSolution r = exhaustive_oracle(CanonicalModel{});
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective == 0);
}

TEST_CASE("oracle: conflicting duties force cross assignments") {
    const RosterInstance inst = cross_instance();
    const DerivedSets der = derive_all(inst);
    REQUIRE(der.conflicts.size() == 1);
    const CanonicalModel m = build_model(inst, der, inst.weights);
    const RawSolution r = exhaustive_oracle(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == 0);
    const RosterSolution roster = extract_roster(r, inst, der);
    REQUIRE(roster.assignments.size() == 2);
    CHECK(roster.assignments[0].physician != roster.assignments[1].physician);
    CHECK(roster.assignments[0].instance != roster.assignments[1].instance);
}

TEST_CASE("oracle and external solver: preference reward selects its pairing") {
    RosterInstance inst = cross_instance();
    PreferenceRecord pref;
    pref.physician = "p02";
    pref.instance = "A@2026-03-02";
    pref.level = PreferenceLevel::StronglyDesired;
    inst.preferences = {pref};
    const DerivedSets der = derive_all(inst);
    const CanonicalModel m = build_model(inst, der, inst.weights);

    const RawSolution o = exhaustive_oracle(m);
    REQUIRE(o.status == SolveStatus::Optimal);
    CHECK(o.objective == doctest::Approx(inst.weights.strongly_desired));
    const RosterSolution r = extract_roster(o, inst, der);
    const std::vector<Assignment> expected = {{"p01", "B@2026-03-02"}, {"p02", "A@2026-03-02"}};
    CHECK(r.assignments == expected);

    SolveRequest req;
    req.gap = 0;
    req.time_limit = 30;
    const RawSolution e = invoke_external(m, req);
    REQUIRE(has_solution(e.status));
    CHECK(e.objective == doctest::Approx(o.objective));
    CHECK(extract_roster(e, inst, der).assignments == expected);
}

TEST_CASE("external solver: bound stays finite when presolve empties the model") {
    const RosterInstance inst = two_by_two_instance();
    SolveRequest req;
    req.gap = 0.03;
    req.time_limit = 30;
    const RawSolution e = invoke_external(model_of(inst), req);
    REQUIRE(has_solution(e.status));
    REQUIRE(e.bound.has_value());
    CHECK(*e.bound == doctest::Approx(e.objective));
}

TEST_CASE("solver: infeasible toy model") {
    CanonicalModel m;
    const int x = m.add_var("x", VarType::Binary, 0, 1, 1, VarRole::Decision);
    m.add_row("one", {{x, 1}}, Sense::EQ, 1, "t");
    m.add_row("zero", {{x, 1}}, Sense::EQ, 0, "t");
    CHECK(exhaustive_oracle(m).status == SolveStatus::Infeasible);
    SolveRequest req;
    req.gap = 0;
    req.time_limit = 30;
    CHECK(invoke_external(m, req).status == SolveStatus::Infeasible);
}

TEST_CASE("solver: request checks") {
    SolveRequest req;
    req.gap = -0.1;
    CHECK_THROWS_AS(check_request(req), std::invalid_argument);
    req.gap = 0.03;
    req.time_limit = 0;
    CHECK_THROWS_AS(check_request(req), std::invalid_argument);
}

TEST_CASE("solver: missing executable is an environment error") {
    SolveRequest req;
    req.solver = SolverConfig{"/nonexistent/solver", SolverKind::Cbc, {}};
    CHECK_THROWS_AS(invoke_external(model_of(two_by_two_instance()), req), SolverEnvironmentError);
}

TEST_CASE("solver: oracle refuses oversized models") {
    const CanonicalModel m = model_of(internal_medicine_scenario(1));
    CHECK(oracle_free_decisions(m) > kOracleMaxFree);
    CHECK_THROWS_AS(exhaustive_oracle(m), OracleSizeError);
}

TEST_CASE("solver: short time limit on a large model ends cleanly") {
    const CanonicalModel m = model_of(internal_medicine_scenario(1));
    SolveRequest req;
    req.time_limit = 1;
    const RawSolution r = invoke_external(m, req);
    CHECK((r.status == SolveStatus::Feasible || r.status == SolveStatus::TimeoutNoSolution ||
           r.status == SolveStatus::Optimal));
}

TEST_CASE("solver: solution file parsers") {
    const auto cbc = parse_cbc_solution(
        "Optimal - objective value -20.00000000\n"
        "      0 C0000001               1                       0\n"
        "      3 C0000004               1                       0\n");
    CHECK(cbc.status == SolveStatus::Optimal);
    CHECK(cbc.values.at("C0000001") == 1);
    CHECK(cbc.values.at("C0000004") == 1);

    CHECK(parse_cbc_solution("Infeasible - objective value 0.00000000\n").status == SolveStatus::Infeasible);
}

TEST_CASE("extraction: all-zero solution leaves every optional duty unassigned") {
    RosterInstance inst = base_instance(3, 2);
    inst.duty_templates = {make_duty("O", 8 * 60, 16 * 60, false)};
    const DerivedSets der = derive_all(inst);
    RawSolution raw;
    raw.status = SolveStatus::Optimal;
    const RosterSolution r = extract_roster(raw, inst, der);
    CHECK(r.assignments.empty());
    CHECK(r.unassigned_duties.size() == 3);
}

TEST_CASE("extraction: fractional decision values are rejected") {
    const RosterInstance inst = two_by_two_instance();
    const DerivedSets der = derive_all(inst);
    RawSolution raw;
    raw.status = SolveStatus::Optimal;
    raw.values["x[p01,A@2026-03-02]"] = 0.5;
    CHECK_THROWS_AS(extract_roster(raw, inst, der), IntegralityError);
}
