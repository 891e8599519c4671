#include "helpers.hpp"

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/instance_io.hpp"
#include "roster/oracle.hpp"
#include "roster/roster.hpp"
#include "roster/scenarios.hpp"
#include "roster/service.hpp"

#include <doctest.h>
#include <httplib.h>

#include <thread>

using namespace roster;
using namespace roster::testing;
using nlohmann::json;

namespace {

/// Service on an ephemeral port with an in-memory store.
struct Running {
    RosterService service;
    int port = -1;
    std::thread thread;

    Running() : service(config()) {
        port = service.bind();
        REQUIRE(port > 0);
        thread = std::thread([this] { service.listen(); });
    }
    ~Running() {
        service.stop();
        thread.join();
    }

    static ServiceConfig config() {
        ServiceConfig c;
        c.store_path = ":memory:";
        c.port = 0;
        c.planner_key = "secret";
        c.solve_defaults.time_limit = 60;
        return c;
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(120, 0);
        return c;
    }

    std::string login(const std::string& user, const std::string& role) const {
        auto c = client();
        json body = {{"user", user}, {"role", role}};
        if (role == "planner")
            body["key"] = "secret";
        auto res = c.Post("/api/login", body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        return json::parse(res->body)["token"];
    }
};

httplib::Headers auth(const std::string& token) { return {{"Authorization", "Bearer " + token}}; }

json body_of(const httplib::Result& res) {
    REQUIRE(res);
    return json::parse(res->body);
}

}  // namespace

TEST_CASE("service: roles and instance CRUD") {
    Running srv;
    auto c = srv.client();
    const auto planner = srv.login("alice", "planner");
    const auto physician = srv.login("p01", "physician");

    auto bad_key = c.Post("/api/login", json{{"user", "x"}, {"role", "planner"}, {"key", "wrong"}}.dump(), "application/json");
    REQUIRE(bad_key);
    CHECK(bad_key->status == 403);
    CHECK(c.Get("/api/instances")->status == 401);

    const json create = {{"id", "demo"}, {"instance", instance_to_json(two_by_two_instance())}};
    CHECK(c.Post("/api/instances", auth(physician), create.dump(), "application/json")->status == 403);
    auto res = c.Post("/api/instances", auth(planner), create.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(body_of(res)["version"] == 1);

    res = c.Get("/api/instances/demo", auth(physician));
    CHECK(res->status == 200);
    CHECK(instance_from_json(body_of(res)["instance"]) == two_by_two_instance());

    // collection item update with optimistic versioning
    json item = instance_to_json(two_by_two_instance())["physicians"][0];
    item["name"] = "Dr. Renamed";
    res = c.Put("/api/instances/demo/collections/physicians/p01", auth(planner),
                json{{"expected_version", 1}, {"item", item}}.dump(), "application/json");
    CHECK(res->status == 200);
    CHECK(body_of(res)["version"] == 2);
    res = c.Put("/api/instances/demo/collections/physicians/p01", auth(planner),
                json{{"expected_version", 1}, {"item", item}}.dump(), "application/json");
    CHECK(res->status == 409);

    // schema-invalid edit
    json bad = item;
    bad["employment_rate"] = 3.0;
    res = c.Put("/api/instances/demo/collections/physicians/p01", auth(planner),
                json{{"expected_version", 2}, {"item", bad}}.dump(), "application/json");
    CHECK(res->status == 400);

    res = c.Get("/api/instances/demo/collections/physicians", auth(planner));
    CHECK(body_of(res)["items"][0]["name"] == "Dr. Renamed");
    CHECK(c.Get("/api/instances/demo/collections/nothing", auth(planner))->status == 404);
    CHECK(c.Post("/api/instances", auth(planner), "{not json", "application/json")->status == 400);
}

TEST_CASE("service: preference caps are enforced by the server") {
    Running srv;
    auto c = srv.client();
    const auto planner = srv.login("alice", "planner");
    RosterInstance inst = internal_medicine_scenario(1);
    std::erase_if(inst.preferences, [](const auto& r) { return r.physician == "p01"; });
    for (auto& p : inst.physicians)
        if (p.id == "p01")
            p.absences.clear();
    REQUIRE(c.Post("/api/instances", auth(planner), json{{"id", "im"}, {"instance", instance_to_json(inst)}}.dump(),
                   "application/json")->status == 201);
    const auto p01 = srv.login("p01", "physician");

    json prefs = json::array();
    for (int d = 0; d < 11; ++d)
        prefs.push_back({{"target", "instance"},
                         {"instance", instance_id("N1", Date(2026, 3, 1) + d)},
                         {"level", "undesired"}});
    auto res = c.Post("/api/instances/im/preferences/p01", auth(p01),
                      json{{"expected_version", 0}, {"preferences", prefs}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    const json err = body_of(res);
    CHECK(err["error"] == "preference-cap");
    CHECK(err["message"].get<std::string>().find("cap of 10") != std::string::npos);
    REQUIRE(err["caps"].size() == 1);
    CHECK(err["caps"][0]["limit"] == 10);
    CHECK(err["caps"][0]["used"] == 11);

    prefs.erase(prefs.size() - 1);
    res = c.Post("/api/instances/im/preferences/p01", auth(p01),
                 json{{"expected_version", 0}, {"preferences", prefs}}.dump(), "application/json");
    CHECK(res->status == 200);
    // a second submission based on the same version loses
    res = c.Post("/api/instances/im/preferences/p01", auth(p01),
                 json{{"expected_version", 0}, {"preferences", prefs}}.dump(), "application/json");
    CHECK(res->status == 409);
    // physicians only submit their own
    res = c.Post("/api/instances/im/preferences/p02", auth(p01),
                 json{{"expected_version", 0}, {"preferences", json::array()}}.dump(), "application/json");
    CHECK(res->status == 403);
    res = c.Get("/api/instances/im/preferences/p01", auth(p01));
    CHECK(body_of(res)["preferences"].size() == 10);
}

TEST_CASE("service: solve, adjust, publish and calendar export") {
    Running srv;
    auto c = srv.client();
    const auto planner = srv.login("alice", "planner");
    const auto p01 = srv.login("p01", "physician");
    RosterInstance inst = two_by_two_instance();
    inst.duty_templates[1].time = {20 * 60, 32 * 60};
    inst.rest_rules = {{"*", "*", 11 * 60, {}}};
    REQUIRE(c.Post("/api/instances", auth(planner), json{{"id", "demo"}, {"instance", instance_to_json(inst)}}.dump(),
                   "application/json")->status == 201);

    CHECK(c.Post("/api/instances/demo/solve", auth(p01), "{}", "application/json")->status == 403);
    auto res = c.Post("/api/instances/demo/solve", auth(planner), json{{"gap", 0}}.dump(), "application/json");
    REQUIRE(res);
    REQUIRE(res->status == 202);
    const std::string job_id = body_of(res)["id"];

    // edits after submission do not reach the running job
    RosterInstance edited = inst;
    edited.duty_templates[0].mandatory = false;
    c.Put("/api/instances/demo", auth(planner), json{{"expected_version", 1}, {"instance", instance_to_json(edited)}}.dump(),
          "application/json");

    const JobRecord job = srv.service.wait_job(job_id, std::chrono::seconds(120));
    REQUIRE(job.state == JobState::Done);
    res = c.Get("/api/jobs/" + job_id, auth(planner));
    CHECK(body_of(res)["state"] == "done");
    CHECK(body_of(res).contains("report"));

    const DerivedSets der = derive_all(inst);
    const RawSolution oracle = exhaustive_oracle(build_model(inst, der, inst.weights));
    res = c.Get("/api/instances/demo/roster", auth(planner));
    REQUIRE(res->status == 200);
    const json draft = body_of(res);
    CHECK(draft["status"] == "draft");
    CHECK(draft["roster"]["solver"]["objective"].get<double>() == doctest::Approx(oracle.objective));
    CHECK(draft["roster"]["assignments"].size() == 2);

    // drafts are invisible to physicians
    CHECK(c.Get("/api/instances/demo/roster", auth(p01))->status == 404);

    // manual adjustment creating a rest clash is stored but cannot be published
    json adjust = {{"assignments", json::array({{{"physician", "p01"}, {"instance", "A@2026-03-02"}},
                                                {{"physician", "p01"}, {"instance", "B@2026-03-02"}}})}};
    res = c.Post("/api/instances/demo/roster/adjust", auth(planner), adjust.dump(), "application/json");
    REQUIRE(res->status == 200);
    json adjusted = body_of(res);
    CHECK(adjusted["publishable"] == false);
    REQUIRE(adjusted["validation"]["hard"].size() == 1);
    CHECK(adjusted["validation"]["hard"][0]["family"].get<std::string>().rfind("14", 0) == 0);
    res = c.Post("/api/instances/demo/roster/publish", auth(planner), json{{"version", adjusted["version"]}}.dump(),
                 "application/json");
    CHECK(res->status == 422);
    CHECK(body_of(res)["findings"].size() == 1);

    // p01 takes the night duty, p02 the day duty
    adjust = {{"assignments", json::array({{{"physician", "p02"}, {"instance", "A@2026-03-02"}},
                                           {{"physician", "p01"}, {"instance", "B@2026-03-02"}}})}};
    res = c.Post("/api/instances/demo/roster/adjust", auth(planner), adjust.dump(), "application/json");
    adjusted = body_of(res);
    CHECK(adjusted["publishable"] == true);
    res = c.Post("/api/instances/demo/roster/publish", auth(planner), json{{"version", adjusted["version"]}}.dump(),
                 "application/json");
    CHECK(res->status == 200);

    res = c.Get("/api/instances/demo/roster", auth(p01));
    REQUIRE(res->status == 200);
    CHECK(body_of(res)["status"] == "published");
    CHECK(body_of(res)["hard_violations"] == 0);

    res = c.Get("/api/instances/demo/roster/versions", auth(planner));
    CHECK(body_of(res).size() == 4);

    res = c.Get("/api/instances/demo/calendar/p01.ics", auth(p01));
    REQUIRE(res->status == 200);
    CHECK(res->get_header_value("Content-Type").find("text/calendar") == 0);
    CHECK(res->body.find("DTSTART:20260302T200000") != std::string::npos);
    CHECK(res->body.find("DTEND:20260303T080000") != std::string::npos);
    CHECK(c.Get("/api/instances/demo/calendar/p02.ics", auth(p01))->status == 403);

    res = c.Get("/api/instances/demo/roster/report", auth(p01));
    REQUIRE(res->status == 200);
    CHECK(body_of(res)["kind"] == "report");
}

TEST_CASE("service: clashing manual assignments are rejected before queueing") {
    Running srv;
    auto c = srv.client();
    const auto planner = srv.login("alice", "planner");
    RosterInstance inst = two_by_two_instance();
    inst.rest_rules = {{"*", "*", 0, {}}};
    inst.manual_assignments = {{"A@2026-03-02", "p01"}, {"B@2026-03-02", "p01"}};
    REQUIRE(c.Post("/api/instances", auth(planner), json{{"id", "clash"}, {"instance", instance_to_json(inst)}}.dump(),
                   "application/json")->status == 201);
    auto res = c.Post("/api/instances/clash/solve", auth(planner), "{}", "application/json");
    REQUIRE(res);
    CHECK(res->status == 422);
    CHECK(body_of(res)["error"] == "build-infeasible");
    CHECK(body_of(res)["clashes"].size() >= 1);
}

TEST_CASE("run_job: solver failures are recorded with their stage") {
    Store store(":memory:");
    store.put_instance("demo", two_by_two_instance(), 0);
    const JobRecord job = store.create_job("demo", 1, json::object());
    SolveRequest req;
    req.solver = SolverConfig{"/nonexistent/solver", SolverKind::Cbc, {}};
    const JobRecord done = run_job(store, job.id, req);
    CHECK(done.state == JobState::Failed);
    CHECK(done.failure["stage"] == "solve");
    CHECK(done.failure["cause"] == "solver-environment");
}
