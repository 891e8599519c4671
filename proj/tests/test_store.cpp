#include "helpers.hpp"

#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/roster.hpp"
#include "roster/scenarios.hpp"
#include "roster/store.hpp"

#include <doctest.h>

#include <filesystem>

using namespace roster;
using namespace roster::testing;

namespace {

RosterSolution two_by_two_roster(bool broken) {
    const RosterInstance inst = two_by_two_instance();
    RosterSolution r;
    r.department = inst.department;
    r.period_start = inst.period.start;
    r.period_end = inst.period.end;
    r.assignments = {{"p01", "A@2026-03-02"}};
    if (!broken)
        r.assignments.push_back({"p02", "B@2026-03-02"});
    normalize_roster(r, derive_all(inst));
    return r;
}

}  // namespace

TEST_CASE("store: instance round trip and version conflicts") {
    Store store(":memory:");
    const RosterInstance inst = internal_medicine_scenario(1);
    CHECK(store.put_instance("im", inst, 0) == 1);
    const auto loaded = store.get_instance("im");
    REQUIRE(loaded);
    CHECK(loaded->version == 1);
    CHECK(loaded->instance == inst);
    CHECK_THROWS_AS(store.put_instance("im", inst, 0), VersionConflictError);
    CHECK(store.put_instance("im", inst, 1) == 2);
    CHECK_THROWS_AS(store.put_instance("im", inst, 1), VersionConflictError);
    CHECK(store.list_instances() == std::vector<std::string>{"im"});
    CHECK_FALSE(store.get_instance("missing"));
}

TEST_CASE("store: concurrent preference submissions for the same physician") {
    Store store(":memory:");
    store.put_instance("demo", two_by_two_instance(), 0);
    PreferenceRecord r;
    r.physician = "p01";
    r.instance = "A@2026-03-02";
    r.level = PreferenceLevel::Desired;
    CHECK(store.put_preferences("demo", "p01", {r}, 0) == 1);
    r.level = PreferenceLevel::Undesired;
    CHECK_THROWS_AS(store.put_preferences("demo", "p01", {r}, 0), VersionConflictError);

    const auto snap = store.snapshot("demo");
    REQUIRE(snap);
    REQUIRE(snap->instance.preferences.size() == 1);
    CHECK(snap->instance.preferences[0].level == PreferenceLevel::Desired);
}

TEST_CASE("store: publish gate and append-only history") {
    Store store(":memory:");
    store.put_instance("demo", two_by_two_instance(), 0);
    const nlohmann::json finding = {{"family", "1"}, {"message", "B@2026-03-02 is not covered"}};
    const auto broken =
        store.append_roster_version("demo", two_by_two_roster(true), VersionStatus::Adjusted, "planner", nlohmann::json::array({finding}));
    CHECK(broken.hard_violations == 1);
    try {
        store.publish("demo", broken.version, "planner");
        FAIL("publish should be rejected");
    } catch (const PublishRejectedError& e) {
        CHECK(e.findings().size() == 1);
        CHECK(e.findings()[0]["family"] == "1");
    }
    CHECK_FALSE(store.published_roster("demo"));

    const auto clean = store.append_roster_version("demo", two_by_two_roster(false), VersionStatus::Draft, "solver",
                                                   nlohmann::json::array());
    const auto published = store.publish("demo", clean.version, "planner");
    CHECK(published.status == VersionStatus::Published);
    CHECK(published.based_on == clean.version);
    REQUIRE(store.published_roster("demo"));
    CHECK(store.published_roster("demo")->roster == two_by_two_roster(false));
    CHECK(store.roster_history("demo").size() == 3);
    CHECK(store.latest_roster("demo")->version == published.version);
    CHECK(store.get_roster_version("demo", broken.version)->hard_violations == 1);
}

TEST_CASE("store: job state transitions are monotone") {
    Store store(":memory:");
    store.put_instance("demo", two_by_two_instance(), 0);
    JobRecord job = store.create_job("demo", 1, {{"gap", 0}});
    CHECK(job.state == JobState::Queued);
    job.state = JobState::Running;
    store.update_job(job);
    job.state = JobState::Queued;
    CHECK_THROWS_AS(store.update_job(job), StoreError);
    job.state = JobState::Done;
    job.roster_version = 1;
    store.update_job(job);
    job.state = JobState::Failed;
    CHECK_THROWS_AS(store.update_job(job), StoreError);
    const auto back = store.get_job(job.id);
    REQUIRE(back);
    CHECK(back->state == JobState::Done);
    CHECK(back->params["gap"] == 0);
}

TEST_CASE("store: file-backed store persists across reopen") {
    const auto dir = std::filesystem::temp_directory_path() / ("roster-store-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto path = (dir / "roster.db").string();
    {
        Store store(path);
        store.put_instance("demo", two_by_two_instance(), 0);
        store.append_roster_version("demo", two_by_two_roster(false), VersionStatus::Draft, "solver",
                                    nlohmann::json::array());
    }
    {
        Store store(path);
        REQUIRE(store.get_instance("demo"));
        CHECK(store.get_instance("demo")->instance == two_by_two_instance());
        CHECK(store.latest_roster("demo")->roster == two_by_two_roster(false));
    }
    std::filesystem::remove_all(dir);
}
