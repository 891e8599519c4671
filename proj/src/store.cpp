#include "roster/store.hpp"

#include "roster/errors.hpp"
#include "roster/instance_io.hpp"

#include <sqlite3.h>

#include <chrono>
#include <ctime>
#include <map>

namespace roster {

namespace {

const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS instances (
  id TEXT PRIMARY KEY,
  version INTEGER NOT NULL,
  payload TEXT NOT NULL,
  updated TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS preferences (
  instance_id TEXT NOT NULL,
  physician TEXT NOT NULL,
  version INTEGER NOT NULL,
  payload TEXT NOT NULL,
  updated TEXT NOT NULL,
  PRIMARY KEY (instance_id, physician)
);
CREATE TABLE IF NOT EXISTS roster_versions (
  roster_id TEXT NOT NULL,
  version INTEGER NOT NULL,
  status TEXT NOT NULL,
  author TEXT NOT NULL,
  created TEXT NOT NULL,
  payload TEXT NOT NULL,
  hard_violations INTEGER NOT NULL,
  findings TEXT NOT NULL,
  based_on INTEGER,
  PRIMARY KEY (roster_id, version)
);
CREATE TABLE IF NOT EXISTS published (
  roster_id TEXT PRIMARY KEY,
  version INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS jobs (
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  id TEXT UNIQUE,
  instance_id TEXT NOT NULL,
  instance_version INTEGER NOT NULL,
  params TEXT NOT NULL,
  state TEXT NOT NULL,
  failure TEXT,
  roster_version INTEGER,
  report TEXT,
  created TEXT NOT NULL,
  started TEXT,
  finished TEXT
);
CREATE TRIGGER IF NOT EXISTS roster_versions_no_update BEFORE UPDATE ON roster_versions
BEGIN SELECT RAISE(ABORT, 'roster versions are append-only'); END;
CREATE TRIGGER IF NOT EXISTS roster_versions_no_delete BEFORE DELETE ON roster_versions
BEGIN SELECT RAISE(ABORT, 'roster versions are append-only'); END;
)sql";

class Stmt {
public:
    Stmt(sqlite3* db, const std::string& sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &st_, nullptr) != SQLITE_OK)
            throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
    ~Stmt() { sqlite3_finalize(st_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int i, const std::string& v) {
        check(sqlite3_bind_text(st_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Stmt& bind(int i, int v) {
        check(sqlite3_bind_int(st_, i, v));
        return *this;
    }
    Stmt& bind(int i, std::optional<int> v) {
        check(v ? sqlite3_bind_int(st_, i, *v) : sqlite3_bind_null(st_, i));
        return *this;
    }
    Stmt& bind_null(int i) {
        check(sqlite3_bind_null(st_, i));
        return *this;
    }
    bool step() {
        const int rc = sqlite3_step(st_);
        if (rc == SQLITE_ROW)
            return true;
        if (rc == SQLITE_DONE)
            return false;
        throw StoreError(std::string("statement failed: ") + sqlite3_errmsg(db_));
    }
    std::string text(int c) const {
        const auto* p = sqlite3_column_text(st_, c);
        return p ? reinterpret_cast<const char*>(p) : "";
    }
    int integer(int c) const { return sqlite3_column_int(st_, c); }
    bool null(int c) const { return sqlite3_column_type(st_, c) == SQLITE_NULL; }

private:
    void check(int rc) {
        if (rc != SQLITE_OK)
            throw StoreError(std::string("bind failed: ") + sqlite3_errmsg(db_));
    }
    sqlite3* db_;
    sqlite3_stmt* st_ = nullptr;
};

nlohmann::json parse_json(const std::string& s) {
    if (s.empty())
        return nullptr;
    return nlohmann::json::parse(s);
}

std::string dump_or_empty(const nlohmann::json& j) { return j.is_null() ? "" : j.dump(); }

std::vector<PreferenceRecord> preferences_from_text(const std::string& text) {
    std::vector<PreferenceRecord> out;
    for (const auto& j : nlohmann::json::parse(text))
        out.push_back(preference_from_json(j));
    return out;
}

int job_rank(JobState s) {
    switch (s) {
        case JobState::Queued: return 0;
        case JobState::Running: return 1;
        default: return 2;
    }
}

}  // namespace

const char* to_string(VersionStatus s) {
    switch (s) {
        case VersionStatus::Draft: return "draft";
        case VersionStatus::Adjusted: return "adjusted";
        case VersionStatus::Published: return "published";
    }
    return "draft";
}

VersionStatus parse_version_status(const std::string& s) {
    if (s == "draft")
        return VersionStatus::Draft;
    if (s == "adjusted")
        return VersionStatus::Adjusted;
    if (s == "published")
        return VersionStatus::Published;
    throw DocumentError("unknown roster version status '" + s + "'");
}

const char* to_string(JobState s) {
    switch (s) {
        case JobState::Queued: return "queued";
        case JobState::Running: return "running";
        case JobState::Done: return "done";
        case JobState::Failed: return "failed";
    }
    return "queued";
}

JobState parse_job_state(const std::string& s) {
    if (s == "queued")
        return JobState::Queued;
    if (s == "running")
        return JobState::Running;
    if (s == "done")
        return JobState::Done;
    if (s == "failed")
        return JobState::Failed;
    throw DocumentError("unknown job state '" + s + "'");
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Store::Tx {
    const Store& s;
    bool done = false;
    explicit Tx(const Store& store) : s(store) { s.exec("BEGIN IMMEDIATE"); }
    void commit() {
        s.exec("COMMIT");
        done = true;
    }
    ~Tx() {
        if (!done)
            sqlite3_exec(s.db_, "ROLLBACK", nullptr, nullptr, nullptr);
    }
};

Store::Store(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX, nullptr) !=
        SQLITE_OK) {
        const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        db_ = nullptr;
        throw StoreError("cannot open store '" + path + "': " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    if (path != ":memory:")
        exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA foreign_keys=ON");
    exec(kSchema);
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) const {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        const std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError(msg);
    }
}

int Store::put_instance(const std::string& id, const RosterInstance& inst, int expected_version) {
    std::lock_guard lock(mu_);
    const std::string payload = encode_instance(inst);
    Tx tx(*this);
    int current = 0;
    {
        Stmt q(db_, "SELECT version FROM instances WHERE id = ?");
        q.bind(1, id);
        if (q.step())
            current = q.integer(0);
    }
    if (current != expected_version)
        throw VersionConflictError("instance '" + id + "' is at version " + std::to_string(current) + ", expected " +
                                   std::to_string(expected_version));
    Stmt w(db_, "INSERT INTO instances (id, version, payload, updated) VALUES (?, ?, ?, ?) "
                "ON CONFLICT(id) DO UPDATE SET version = excluded.version, payload = excluded.payload, updated = excluded.updated");
    w.bind(1, id).bind(2, current + 1).bind(3, payload).bind(4, utc_timestamp());
    w.step();
    tx.commit();
    return current + 1;
}

std::optional<StoredInstance> Store::get_instance(const std::string& id) const {
    std::lock_guard lock(mu_);
    Stmt q(db_, "SELECT version, payload FROM instances WHERE id = ?");
    q.bind(1, id);
    if (!q.step())
        return std::nullopt;
    return StoredInstance{id, q.integer(0), decode_instance(q.text(1))};
}

std::vector<std::string> Store::list_instances() const {
    std::lock_guard lock(mu_);
    Stmt q(db_, "SELECT id FROM instances ORDER BY id");
    std::vector<std::string> out;
    while (q.step())
        out.push_back(q.text(0));
    return out;
}

int Store::put_preferences(const std::string& instance_id, const std::string& physician,
                           const std::vector<PreferenceRecord>& records, int expected_version) {
    std::lock_guard lock(mu_);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records)
        arr.push_back(preference_to_json(r));
    Tx tx(*this);
    int current = 0;
    {
        Stmt q(db_, "SELECT version FROM preferences WHERE instance_id = ? AND physician = ?");
        q.bind(1, instance_id).bind(2, physician);
        if (q.step())
            current = q.integer(0);
    }
    if (current != expected_version)
        throw VersionConflictError("preferences of '" + physician + "' are at version " + std::to_string(current) +
                                   ", expected " + std::to_string(expected_version));
    Stmt w(db_, "INSERT INTO preferences (instance_id, physician, version, payload, updated) VALUES (?, ?, ?, ?, ?) "
                "ON CONFLICT(instance_id, physician) DO UPDATE SET version = excluded.version, payload = excluded.payload, "
                "updated = excluded.updated");
    w.bind(1, instance_id).bind(2, physician).bind(3, current + 1).bind(4, arr.dump()).bind(5, utc_timestamp());
    w.step();
    tx.commit();
    return current + 1;
}

std::optional<StoredPreferences> Store::get_preferences(const std::string& instance_id, const std::string& physician) const {
    std::lock_guard lock(mu_);
    Stmt q(db_, "SELECT version, payload FROM preferences WHERE instance_id = ? AND physician = ?");
    q.bind(1, instance_id).bind(2, physician);
    if (!q.step())
        return std::nullopt;
    return StoredPreferences{instance_id, physician, q.integer(0), preferences_from_text(q.text(1))};
}

std::vector<StoredPreferences> Store::all_preferences(const std::string& instance_id) const {
    std::lock_guard lock(mu_);
    Stmt q(db_, "SELECT physician, version, payload FROM preferences WHERE instance_id = ? ORDER BY physician");
    q.bind(1, instance_id);
    std::vector<StoredPreferences> out;
    while (q.step())
        out.push_back({instance_id, q.text(0), q.integer(1), preferences_from_text(q.text(2))});
    return out;
}

std::optional<StoredInstance> Store::snapshot(const std::string& instance_id) const {
    std::lock_guard lock(mu_);
    auto base = get_instance(instance_id);
    if (!base)
        return std::nullopt;
    const auto submitted = all_preferences(instance_id);
    if (submitted.empty())
        return base;
    std::map<std::string, const StoredPreferences*> by_physician;
    for (const auto& s : submitted)
        by_physician[s.physician] = &s;
    auto& prefs = base->instance.preferences;
    std::vector<PreferenceRecord> merged;
    for (const auto& r : prefs)
        if (!by_physician.count(r.physician))
            merged.push_back(r);
    for (const auto& s : submitted)
        merged.insert(merged.end(), s.records.begin(), s.records.end());
    prefs = std::move(merged);
    return base;
}

StoredRosterVersion Store::append_locked(const std::string& roster_id, const RosterSolution& roster, VersionStatus status,
                                         const std::string& author, const nlohmann::json& findings,
                                         std::optional<int> based_on) {
    int next = 1;
    {
        Stmt q(db_, "SELECT COALESCE(MAX(version), 0) FROM roster_versions WHERE roster_id = ?");
        q.bind(1, roster_id);
        if (q.step())
            next = q.integer(0) + 1;
    }
    StoredRosterVersion v;
    v.roster_id = roster_id;
    v.version = next;
    v.status = status;
    v.author = author;
    v.timestamp = utc_timestamp();
    v.roster = roster;
    v.findings = findings.is_array() ? findings : nlohmann::json::array();
    v.hard_violations = static_cast<int>(v.findings.size());
    v.based_on = based_on;
    Stmt w(db_, "INSERT INTO roster_versions (roster_id, version, status, author, created, payload, hard_violations, findings, "
                "based_on) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)");
    w.bind(1, roster_id)
        .bind(2, next)
        .bind(3, std::string(to_string(status)))
        .bind(4, author)
        .bind(5, v.timestamp)
        .bind(6, encode_roster(roster))
        .bind(7, v.hard_violations)
        .bind(8, v.findings.dump())
        .bind(9, based_on);
    w.step();
    return v;
}

StoredRosterVersion Store::append_roster_version(const std::string& roster_id, const RosterSolution& roster,
                                                 VersionStatus status, const std::string& author,
                                                 const nlohmann::json& findings, std::optional<int> based_on) {
    if (status == VersionStatus::Published)
        throw StoreError("published versions are created by publish()");
    std::lock_guard lock(mu_);
    Tx tx(*this);
    auto v = append_locked(roster_id, roster, status, author, findings, based_on);
    tx.commit();
    return v;
}

StoredRosterVersion Store::publish(const std::string& roster_id, int version, const std::string& author) {
    std::lock_guard lock(mu_);
    Tx tx(*this);
    auto src = get_roster_version(roster_id, version);
    if (!src)
        throw StoreError("roster '" + roster_id + "' has no version " + std::to_string(version));
    if (src->hard_violations > 0)
        throw PublishRejectedError("version " + std::to_string(version) + " has " + std::to_string(src->hard_violations) +
                                       " hard violation(s)",
                                   src->findings);
    auto v = append_locked(roster_id, src->roster, VersionStatus::Published, author, nlohmann::json::array(), version);
    Stmt w(db_, "INSERT INTO published (roster_id, version) VALUES (?, ?) "
                "ON CONFLICT(roster_id) DO UPDATE SET version = excluded.version");
    w.bind(1, roster_id).bind(2, v.version);
    w.step();
    tx.commit();
    return v;
}

std::optional<StoredRosterVersion> Store::roster_query(const std::string& sql, const std::string& id,
                                                       std::optional<int> version) const {
    Stmt q(db_, sql);
    q.bind(1, id);
    if (version)
        q.bind(2, *version);
    if (!q.step())
        return std::nullopt;
    StoredRosterVersion v;
    v.roster_id = q.text(0);
    v.version = q.integer(1);
    v.status = parse_version_status(q.text(2));
    v.author = q.text(3);
    v.timestamp = q.text(4);
    v.roster = decode_roster(q.text(5));
    v.hard_violations = q.integer(6);
    v.findings = parse_json(q.text(7));
    if (!q.null(8))
        v.based_on = q.integer(8);
    return v;
}

namespace {
const char* kVersionColumns =
    "SELECT roster_id, version, status, author, created, payload, hard_violations, findings, based_on FROM roster_versions ";
}

std::optional<StoredRosterVersion> Store::get_roster_version(const std::string& roster_id, int version) const {
    std::lock_guard lock(mu_);
    return roster_query(std::string(kVersionColumns) + "WHERE roster_id = ? AND version = ?", roster_id, version);
}

std::optional<StoredRosterVersion> Store::latest_roster(const std::string& roster_id) const {
    std::lock_guard lock(mu_);
    return roster_query(std::string(kVersionColumns) + "WHERE roster_id = ? ORDER BY version DESC LIMIT 1", roster_id,
                        std::nullopt);
}

std::optional<StoredRosterVersion> Store::published_roster(const std::string& roster_id) const {
    std::lock_guard lock(mu_);
    return roster_query(std::string(kVersionColumns) +
                            "WHERE roster_id = ? AND version = (SELECT version FROM published WHERE roster_id = roster_versions.roster_id)",
                        roster_id, std::nullopt);
}

std::vector<StoredRosterVersion> Store::roster_history(const std::string& roster_id) const {
    std::lock_guard lock(mu_);
    std::vector<StoredRosterVersion> out;
    for (int v = 1;; ++v) {
        auto r = roster_query(std::string(kVersionColumns) + "WHERE roster_id = ? AND version = ?", roster_id, v);
        if (!r)
            break;
        out.push_back(std::move(*r));
    }
    return out;
}

JobRecord Store::create_job(const std::string& instance_id, int instance_version, const nlohmann::json& params) {
    std::lock_guard lock(mu_);
    Tx tx(*this);
    JobRecord j;
    j.instance_id = instance_id;
    j.instance_version = instance_version;
    j.params = params;
    j.created = utc_timestamp();
    {
        Stmt w(db_, "INSERT INTO jobs (instance_id, instance_version, params, state, created) VALUES (?, ?, ?, ?, ?)");
        w.bind(1, instance_id).bind(2, instance_version).bind(3, params.dump()).bind(4, std::string("queued")).bind(5, j.created);
        w.step();
    }
    j.id = "job-" + std::to_string(sqlite3_last_insert_rowid(db_));
    Stmt u(db_, "UPDATE jobs SET id = ? WHERE seq = ?");
    u.bind(1, j.id).bind(2, static_cast<int>(sqlite3_last_insert_rowid(db_)));
    u.step();
    tx.commit();
    return j;
}

void Store::update_job(const JobRecord& job) {
    std::lock_guard lock(mu_);
    Tx tx(*this);
    auto cur = get_job(job.id);
    if (!cur)
        throw StoreError("unknown job '" + job.id + "'");
    const int from = job_rank(cur->state);
    const int to = job_rank(job.state);
    if (to < from || (from == 2))
        throw StoreError(std::string("job '") + job.id + "' cannot move from " + to_string(cur->state) + " to " +
                         to_string(job.state));
    Stmt w(db_, "UPDATE jobs SET state = ?, failure = ?, roster_version = ?, report = ?, started = ?, finished = ? WHERE id = ?");
    w.bind(1, std::string(to_string(job.state)))
        .bind(2, dump_or_empty(job.failure))
        .bind(3, job.roster_version)
        .bind(4, dump_or_empty(job.report))
        .bind(5, job.started)
        .bind(6, job.finished)
        .bind(7, job.id);
    w.step();
    tx.commit();
}

namespace {

JobRecord job_from_row(const Stmt& q) {
    JobRecord j;
    j.id = q.text(0);
    j.instance_id = q.text(1);
    j.instance_version = q.integer(2);
    j.params = parse_json(q.text(3));
    j.state = parse_job_state(q.text(4));
    j.failure = parse_json(q.text(5));
    if (!q.null(6))
        j.roster_version = q.integer(6);
    j.report = parse_json(q.text(7));
    j.created = q.text(8);
    j.started = q.text(9);
    j.finished = q.text(10);
    return j;
}

const char* kJobColumns =
    "SELECT id, instance_id, instance_version, params, state, failure, roster_version, report, created, started, finished "
    "FROM jobs ";

}  // namespace

std::optional<JobRecord> Store::get_job(const std::string& id) const {
    std::lock_guard lock(mu_);
    Stmt q(db_, std::string(kJobColumns) + "WHERE id = ?");
    q.bind(1, id);
    if (!q.step())
        return std::nullopt;
    return job_from_row(q);
}

std::vector<JobRecord> Store::list_jobs() const {
    std::lock_guard lock(mu_);
    Stmt q(db_, std::string(kJobColumns) + "ORDER BY seq");
    std::vector<JobRecord> out;
    while (q.step())
        out.push_back(job_from_row(q));
    return out;
}

}  // namespace roster
