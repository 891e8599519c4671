#pragma once

// Durable single-file store for instances, preference submissions, roster
// versions and solve jobs. Every write runs in its own transaction; roster
// versions are append-only.

#include "roster/model.hpp"
#include "roster/roster.hpp"

#include <json.hpp>

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

struct sqlite3;

namespace roster {

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Publishing refused because the version has hard findings.
class PublishRejectedError : public std::runtime_error {
public:
    PublishRejectedError(const std::string& what, nlohmann::json findings)
        : std::runtime_error(what), findings_(std::move(findings)) {}
    const nlohmann::json& findings() const { return findings_; }

private:
    nlohmann::json findings_;
};

enum class VersionStatus { Draft, Adjusted, Published };
const char* to_string(VersionStatus s);
VersionStatus parse_version_status(const std::string& s);

struct StoredInstance {
    std::string id;
    int version = 0;
    RosterInstance instance;
};

struct StoredPreferences {
    std::string instance_id;
    std::string physician;
    int version = 0;
    std::vector<PreferenceRecord> records;
};

struct StoredRosterVersion {
    std::string roster_id;  // the instance id
    int version = 0;
    VersionStatus status = VersionStatus::Draft;
    std::string author;
    std::string timestamp;
    RosterSolution roster;
    int hard_violations = 0;
    nlohmann::json findings = nlohmann::json::array();
    std::optional<int> based_on;
};

enum class JobState { Queued, Running, Done, Failed };
const char* to_string(JobState s);
JobState parse_job_state(const std::string& s);

struct JobRecord {
    std::string id;
    std::string instance_id;
    int instance_version = 0;
    nlohmann::json params = nlohmann::json::object();
    JobState state = JobState::Queued;
    nlohmann::json failure;  // {stage, cause, message, detail}
    std::optional<int> roster_version;
    nlohmann::json report;
    std::string created;
    std::string started;
    std::string finished;
};

class Store {
public:
    /// Opens or creates the store; ":memory:" gives a private in-memory store.
    explicit Store(const std::string& path);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    /// Creates (expected_version 0) or replaces (expected_version = current) an instance.
    /// Returns the new version; throws VersionConflictError on a stale expectation.
    int put_instance(const std::string& id, const RosterInstance& inst, int expected_version);
    std::optional<StoredInstance> get_instance(const std::string& id) const;
    std::vector<std::string> list_instances() const;

    int put_preferences(const std::string& instance_id, const std::string& physician,
                        const std::vector<PreferenceRecord>& records, int expected_version);
    std::optional<StoredPreferences> get_preferences(const std::string& instance_id, const std::string& physician) const;
    std::vector<StoredPreferences> all_preferences(const std::string& instance_id) const;

    /// Instance with every stored preference submission merged in, plus the instance version.
    std::optional<StoredInstance> snapshot(const std::string& instance_id) const;

    /// Appends a draft or adjusted version; published versions come only from publish().
    StoredRosterVersion append_roster_version(const std::string& roster_id, const RosterSolution& roster,
                                              VersionStatus status, const std::string& author,
                                              const nlohmann::json& findings, std::optional<int> based_on = {});
    /// Appends a published copy of `version`; rejects versions with hard findings.
    StoredRosterVersion publish(const std::string& roster_id, int version, const std::string& author);
    std::optional<StoredRosterVersion> get_roster_version(const std::string& roster_id, int version) const;
    std::optional<StoredRosterVersion> latest_roster(const std::string& roster_id) const;
    std::optional<StoredRosterVersion> published_roster(const std::string& roster_id) const;
    std::vector<StoredRosterVersion> roster_history(const std::string& roster_id) const;

    JobRecord create_job(const std::string& instance_id, int instance_version, const nlohmann::json& params);
    /// Moves a job forward; backwards or repeated terminal transitions throw StoreError.
    void update_job(const JobRecord& job);
    std::optional<JobRecord> get_job(const std::string& id) const;
    std::vector<JobRecord> list_jobs() const;

private:
    struct Tx;
    void exec(const char* sql) const;
    StoredRosterVersion append_locked(const std::string& roster_id, const RosterSolution& roster, VersionStatus status,
                                      const std::string& author, const nlohmann::json& findings,
                                      std::optional<int> based_on);
    std::optional<StoredRosterVersion> roster_query(const std::string& sql, const std::string& id,
                                                    std::optional<int> version) const;

    sqlite3* db_ = nullptr;
    mutable std::recursive_mutex mu_;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace roster
