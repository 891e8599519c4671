#include "roster/service.hpp"

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/ical.hpp"
#include "roster/instance_check.hpp"
#include "roster/instance_io.hpp"
#include "roster/pipeline.hpp"
#include "roster/report.hpp"
#include "roster/validator.hpp"

#include <httplib.h>

#include <condition_variable>
#include <cstdlib>
#include <map>
#include <random>
#include <thread>

namespace roster {

using nlohmann::json;

namespace {

/// Handler-level failure carrying an HTTP status and a JSON body.
struct HttpError {
    int status;
    json body;
};

HttpError http_error(int status, const std::string& code, const std::string& message, json extra = json::object()) {
    json body = {{"error", code}, {"message", message}};
    for (auto& [k, v] : extra.items())
        body[k] = v;
    return {status, body};
}

enum class Role { Physician, Planner };

struct Session {
    std::string user;
    Role role;
};

const std::map<std::string, std::string> kCollections = {
    {"qualifications", "qualifications"},   {"physicians", "physicians"},
    {"duty-templates", "duty_templates"},   {"shift-templates", "shift_templates"},
    {"blocks", "blocks"},                   {"pools", "pools"},
    {"rest-rules", "rest_rules"},           {"weekly-sets", "weekly_sets"},
    {"manual-assignments", "manual_assignments"}, {"preference-caps", "preference_caps"}};

const std::map<std::string, std::string> kSettings = {{"period", "period"},
                                                      {"department", "department"},
                                                      {"weekend-policy", "weekend_policy"},
                                                      {"carryover", "carryover"},
                                                      {"weights", "weights"}};

json parse_body(const httplib::Request& req) {
    if (req.body.empty())
        return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw http_error(400, "malformed-json", e.what());
    }
}

int expected_version(const json& body) {
    if (!body.contains("expected_version") || !body["expected_version"].is_number_integer())
        throw http_error(400, "missing-expected-version", "request must carry an integer expected_version");
    return body["expected_version"].get<int>();
}

json findings_json(const std::vector<Finding>& findings) {
    json arr = json::array();
    for (const auto& f : findings)
        arr.push_back({{"severity", f.severity == Severity::Error ? "error" : "warning"}, {"code", f.code}, {"message", f.message}});
    return arr;
}

json hard_json(const std::vector<ViolationFinding>& findings) {
    json arr = json::array();
    for (const auto& f : findings)
        arr.push_back(finding_to_json(f));
    return arr;
}

json job_json(const JobRecord& j) {
    json params = j.params;
    params.erase("snapshot");
    json out = {{"id", j.id},
                {"instance_id", j.instance_id},
                {"instance_version", j.instance_version},
                {"params", params},
                {"state", to_string(j.state)},
                {"created", j.created},
                {"started", j.started},
                {"finished", j.finished}};
    if (!j.failure.is_null())
        out["failure"] = j.failure;
    if (j.roster_version)
        out["roster_version"] = *j.roster_version;
    if (!j.report.is_null())
        out["report"] = j.report;
    return out;
}

json version_summary(const StoredRosterVersion& v) {
    json out = {{"roster_id", v.roster_id},   {"version", v.version},  {"status", to_string(v.status)},
                {"author", v.author},         {"timestamp", v.timestamp}, {"hard_violations", v.hard_violations}};
    if (v.based_on)
        out["based_on"] = *v.based_on;
    return out;
}

json version_json(const StoredRosterVersion& v) {
    json out = version_summary(v);
    out["roster"] = roster_to_json(v.roster);
    out["findings"] = v.findings;
    return out;
}

SolveRequest request_from(const json& params, const SolveRequest& defaults) {
    SolveRequest req = defaults;
    if (params.contains("gap"))
        req.gap = params["gap"].get<double>();
    if (params.contains("time_limit"))
        req.time_limit = params["time_limit"].get<double>();
    if (params.contains("backend")) {
        const auto b = params["backend"].get<std::string>();
        if (b == "oracle")
            req.backend = Backend::Oracle;
        else if (b == "external")
            req.backend = Backend::External;
        else
            throw http_error(400, "bad-request", "backend must be 'external' or 'oracle'");
    }
    return req;
}

std::string random_token() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

std::string ics_stamp_now() {
    std::string s = utc_timestamp();  // YYYY-MM-DDTHH:MM:SSZ
    std::string out;
    for (char c : s)
        if (c != '-' && c != ':')
            out += c;
    return out;
}

}  // namespace

ServiceConfig service_config_from_env() {
    ServiceConfig c;
    if (const char* s = std::getenv("ROSTER_STORE"); s && *s)
        c.store_path = s;
    if (const char* l = std::getenv("ROSTER_LISTEN"); l && *l) {
        const std::string v = l;
        const auto colon = v.rfind(':');
        if (colon == std::string::npos)
            throw ConfigError("ROSTER_LISTEN must be host:port");
        c.host = v.substr(0, colon);
        c.port = std::stoi(v.substr(colon + 1));
    }
    if (const char* k = std::getenv("ROSTER_PLANNER_KEY"); k && *k)
        c.planner_key = k;
    return c;
}

JobRecord run_job(Store& store, const std::string& job_id, const SolveRequest& defaults) {
    auto job = store.get_job(job_id);
    if (!job)
        throw StoreError("unknown job '" + job_id + "'");
    job->state = JobState::Running;
    job->started = utc_timestamp();
    store.update_job(*job);
    try {
        const RosterInstance inst = job->params.contains("snapshot")
                                        ? instance_from_json(job->params["snapshot"])
                                        : store.get_instance(job->instance_id).value().instance;
        const SolveRequest req = request_from(job->params, defaults);
        PipelineResult r = run_pipeline(inst, req);
        const auto v = store.append_roster_version(job->instance_id, r.roster, VersionStatus::Draft, "solver",
                                                   hard_json(r.hard_findings));
        job->roster_version = v.version;
        job->report = report_to_json(r.report);
        job->state = JobState::Done;
    } catch (const PipelineError& e) {
        job->failure = e.to_json();
        job->state = JobState::Failed;
    } catch (const HttpError& e) {
        job->failure = {{"stage", "request"}, {"cause", "bad-request"}, {"message", e.body.value("message", "")}};
        job->state = JobState::Failed;
    } catch (const std::exception& e) {
        job->failure = {{"stage", "internal"}, {"cause", "exception"}, {"message", e.what()}};
        job->state = JobState::Failed;
    }
    job->finished = utc_timestamp();
    store.update_job(*job);
    return *job;
}

struct RosterService::Impl {
    ServiceConfig cfg;
    Store store;
    httplib::Server http;
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::string, Session> sessions;
    std::vector<std::thread> workers;
    int bound_port = -1;

    explicit Impl(ServiceConfig c) : cfg(std::move(c)), store(cfg.store_path) { routes(); }

    ~Impl() {
        http.stop();
        std::vector<std::thread> ws;
        {
            std::lock_guard lock(mu);
            ws.swap(workers);
        }
        for (auto& t : ws)
            if (t.joinable())
                t.join();
    }

    // ---- plumbing -------------------------------------------------------

    static void send(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(2), "application/json");
    }

    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    Handler guarded(Handler h) {
        return [h](const httplib::Request& req, httplib::Response& res) {
            try {
                h(req, res);
            } catch (const HttpError& e) {
                send(res, e.status, e.body);
            } catch (const VersionConflictError& e) {
                send(res, 409, {{"error", "version-conflict"}, {"message", e.what()}});
            } catch (const PublishRejectedError& e) {
                send(res, 422, {{"error", "hard-violations"}, {"message", e.what()}, {"findings", e.findings()}});
            } catch (const BuildInfeasibleError& e) {
                send(res, 422, {{"error", "build-infeasible"}, {"message", e.what()}, {"clashes", e.clashes()}});
            } catch (const DocumentError& e) {
                send(res, 400, {{"error", "invalid-document"}, {"message", e.what()}});
            } catch (const ConfigError& e) {
                send(res, 400, {{"error", "invalid-configuration"}, {"message", e.what()}});
            } catch (const json::exception& e) {
                send(res, 400, {{"error", "invalid-document"}, {"message", e.what()}});
            } catch (const std::exception& e) {
                send(res, 500, {{"error", "internal"}, {"message", e.what()}});
            }
        };
    }

    Session session(const httplib::Request& req) {
        const auto h = req.get_header_value("Authorization");
        const std::string prefix = "Bearer ";
        if (h.rfind(prefix, 0) != 0)
            throw http_error(401, "unauthenticated", "missing bearer token");
        std::lock_guard lock(mu);
        auto it = sessions.find(h.substr(prefix.size()));
        if (it == sessions.end())
            throw http_error(401, "unauthenticated", "unknown token");
        return it->second;
    }

    Session planner(const httplib::Request& req) {
        auto s = session(req);
        if (s.role != Role::Planner)
            throw http_error(403, "forbidden", "planner role required");
        return s;
    }

    StoredInstance instance_or_404(const std::string& id) {
        auto si = store.get_instance(id);
        if (!si)
            throw http_error(404, "not-found", "unknown instance '" + id + "'");
        return std::move(*si);
    }

    /// Parses, checks and stores a modified instance document.
    json save_document(const std::string& id, const json& doc, int expected) {
        RosterInstance inst = instance_from_json(doc);
        const auto findings = validate_instance(inst);
        if (count_errors(findings) > 0)
            throw http_error(400, "invalid-instance", "instance has " + std::to_string(count_errors(findings)) + " error(s)",
                             {{"findings", findings_json(findings)}});
        const int v = store.put_instance(id, inst, expected);
        return {{"id", id}, {"version", v}, {"warnings", findings_json(findings)}};
    }

    static std::size_t item_position(const json& arr, const std::string& key) {
        for (std::size_t i = 0; i < arr.size(); ++i)
            if (arr[i].contains("id") && arr[i]["id"] == key)
                return i;
        if (!key.empty() && std::all_of(key.begin(), key.end(), ::isdigit)) {
            const auto i = static_cast<std::size_t>(std::stoul(key));
            if (i < arr.size() && !arr[i].contains("id"))
                return i;
        }
        throw http_error(404, "not-found", "no item '" + key + "'");
    }

    static const std::string& collection_key(const std::string& name) {
        auto it = kCollections.find(name);
        if (it == kCollections.end())
            throw http_error(404, "not-found", "unknown collection '" + name + "'");
        return it->second;
    }

    void start_worker(const std::string& job_id) {
        std::lock_guard lock(mu);
        workers.emplace_back([this, job_id] {
            try {
                run_job(store, job_id, cfg.solve_defaults);
            } catch (const std::exception&) {
            }
            cv.notify_all();
        });
    }

    // ---- routes ---------------------------------------------------------

    void routes() {
        http.Post("/api/login", guarded([this](const auto& req, auto& res) {
            const json b = parse_body(req);
            const std::string user = b.value("user", "");
            const std::string role = b.value("role", "physician");
            if (user.empty())
                throw http_error(400, "bad-request", "user is required");
            Session s{user, Role::Physician};
            if (role == "planner") {
                if (b.value("key", "") != cfg.planner_key)
                    throw http_error(403, "forbidden", "wrong planner key");
                s.role = Role::Planner;
            } else if (role != "physician") {
                throw http_error(400, "bad-request", "role must be 'physician' or 'planner'");
            }
            const std::string token = random_token();
            {
                std::lock_guard lock(mu);
                sessions[token] = s;
            }
            send(res, 200, {{"token", token}, {"user", user}, {"role", role}});
        }));

        http.Get("/api/instances", guarded([this](const auto& req, auto& res) {
            session(req);
            json arr = json::array();
            for (const auto& id : store.list_instances()) {
                auto si = store.get_instance(id);
                arr.push_back({{"id", id}, {"version", si->version}, {"department", si->instance.department}});
            }
            send(res, 200, arr);
        }));

        http.Post("/api/instances", guarded([this](const auto& req, auto& res) {
            planner(req);
            const json b = parse_body(req);
            const std::string id = b.value("id", "");
            if (id.empty() || id.find('/') != std::string::npos)
                throw http_error(400, "bad-request", "a slash-free id is required");
            if (!b.contains("instance"))
                throw http_error(400, "bad-request", "instance document is required");
            send(res, 201, save_document(id, b["instance"], 0));
        }));

        http.Get(R"(/api/instances/([^/]+))", guarded([this](const auto& req, auto& res) {
            session(req);
            const auto si = instance_or_404(req.matches[1]);
            send(res, 200, {{"id", si.id}, {"version", si.version}, {"instance", instance_to_json(si.instance)}});
        }));

        http.Put(R"(/api/instances/([^/]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            const json b = parse_body(req);
            if (!b.contains("instance"))
                throw http_error(400, "bad-request", "instance document is required");
            instance_or_404(req.matches[1]);
            send(res, 200, save_document(req.matches[1], b["instance"], expected_version(b)));
        }));

        // Sub-collections.
        http.Get(R"(/api/instances/([^/]+)/collections/([a-z-]+))", guarded([this](const auto& req, auto& res) {
            session(req);
            const auto si = instance_or_404(req.matches[1]);
            const json doc = instance_to_json(si.instance);
            send(res, 200, {{"version", si.version}, {"items", doc[collection_key(req.matches[2])]}});
        }));

        http.Post(R"(/api/instances/([^/]+)/collections/([a-z-]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            const json b = parse_body(req);
            const auto si = instance_or_404(req.matches[1]);
            json doc = instance_to_json(si.instance);
            if (!b.contains("item"))
                throw http_error(400, "bad-request", "item is required");
            doc[collection_key(req.matches[2])].push_back(b["item"]);
            send(res, 201, save_document(si.id, doc, expected_version(b)));
        }));

        http.Put(R"(/api/instances/([^/]+)/collections/([a-z-]+)/([^/]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            const json b = parse_body(req);
            const auto si = instance_or_404(req.matches[1]);
            json doc = instance_to_json(si.instance);
            json& arr = doc[collection_key(req.matches[2])];
            if (!b.contains("item"))
                throw http_error(400, "bad-request", "item is required");
            arr[item_position(arr, req.matches[3])] = b["item"];
            send(res, 200, save_document(si.id, doc, expected_version(b)));
        }));

        http.Delete(R"(/api/instances/([^/]+)/collections/([a-z-]+)/([^/]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            if (!req.has_param("expected_version"))
                throw http_error(400, "missing-expected-version", "expected_version query parameter is required");
            const int expected = std::stoi(req.get_param_value("expected_version"));
            const auto si = instance_or_404(req.matches[1]);
            json doc = instance_to_json(si.instance);
            json& arr = doc[collection_key(req.matches[2])];
            arr.erase(arr.begin() + static_cast<long>(item_position(arr, req.matches[3])));
            send(res, 200, save_document(si.id, doc, expected));
        }));

        http.Get(R"(/api/instances/([^/]+)/settings/([a-z-]+))", guarded([this](const auto& req, auto& res) {
            session(req);
            auto it = kSettings.find(req.matches[2]);
            if (it == kSettings.end())
                throw http_error(404, "not-found", "unknown setting");
            const auto si = instance_or_404(req.matches[1]);
            send(res, 200, {{"version", si.version}, {"value", instance_to_json(si.instance)[it->second]}});
        }));

        http.Put(R"(/api/instances/([^/]+)/settings/([a-z-]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            auto it = kSettings.find(req.matches[2]);
            if (it == kSettings.end())
                throw http_error(404, "not-found", "unknown setting");
            const json b = parse_body(req);
            if (!b.contains("value"))
                throw http_error(400, "bad-request", "value is required");
            const auto si = instance_or_404(req.matches[1]);
            json doc = instance_to_json(si.instance);
            doc[it->second] = b["value"];
            send(res, 200, save_document(si.id, doc, expected_version(b)));
        }));

        // Preferences.
        http.Get(R"(/api/instances/([^/]+)/preferences/([^/]+))", guarded([this](const auto& req, auto& res) {
            const auto s = session(req);
            const std::string who = req.matches[2];
            if (s.role == Role::Physician && s.user != who)
                throw http_error(403, "forbidden", "physicians may only read their own preferences");
            instance_or_404(req.matches[1]);
            const auto p = store.get_preferences(req.matches[1], who);
            json arr = json::array();
            if (p)
                for (const auto& r : p->records)
                    arr.push_back(preference_to_json(r));
            send(res, 200, {{"version", p ? p->version : 0}, {"preferences", arr}});
        }));

        http.Post(R"(/api/instances/([^/]+)/preferences/([^/]+))", guarded([this](const auto& req, auto& res) {
            const auto s = session(req);
            const std::string id = req.matches[1];
            const std::string who = req.matches[2];
            if (s.role == Role::Physician && s.user != who)
                throw http_error(403, "forbidden", "physicians may only submit their own preferences");
            const json b = parse_body(req);
            const int expected = expected_version(b);
            auto snap = store.snapshot(id);
            if (!snap)
                throw http_error(404, "not-found", "unknown instance '" + id + "'");
            if (!std::any_of(snap->instance.physicians.begin(), snap->instance.physicians.end(),
                             [&](const auto& p) { return p.id == who; }))
                throw http_error(404, "not-found", "unknown physician '" + who + "'");
            std::vector<PreferenceRecord> records;
            for (json r : b.value("preferences", json::array())) {
                if (!r.contains("physician"))
                    r["physician"] = who;
                auto rec = preference_from_json(r);
                if (rec.physician != who)
                    throw http_error(400, "bad-request", "preference belongs to another physician");
                records.push_back(rec);
            }
            RosterInstance candidate = snap->instance;
            auto& prefs = candidate.preferences;
            prefs.erase(std::remove_if(prefs.begin(), prefs.end(), [&](const auto& r) { return r.physician == who; }),
                        prefs.end());
            prefs.insert(prefs.end(), records.begin(), records.end());
            const auto caps = check_preference_caps(candidate, who);
            if (!caps.empty()) {
                json violated = json::array();
                for (const auto& c : candidate.preference_caps) {
                    const int limit = cap_limit(c, candidate.period);
                    const int used = cap_usage(c, candidate.period, candidate.preferences, who);
                    if (used > limit)
                        violated.push_back({{"level", to_string(c.level)},
                                            {"target", c.target == PreferenceTarget::Weekly ? "weekly" : "instance"},
                                            {"unit", c.unit == CapUnit::Days ? "days" : "selections"},
                                            {"scope", c.scope == CapScope::AllDays ? "all" : "weekends-and-holidays"},
                                            {"limit", limit},
                                            {"used", used}});
                }
                throw http_error(400, "preference-cap", caps.front().message, {{"caps", violated}});
            }
            const auto findings = validate_instance(candidate);
            if (count_errors(findings) > 0)
                throw http_error(400, "invalid-preferences", "preferences reference unknown or forbidden entries",
                                 {{"findings", findings_json(findings)}});
            const int v = store.put_preferences(id, who, records, expected);
            send(res, 200, {{"version", v}, {"count", records.size()}});
        }));

        // Solving.
        http.Post(R"(/api/instances/([^/]+)/solve)", guarded([this](const auto& req, auto& res) {
            planner(req);
            const json b = parse_body(req);
            auto snap = store.snapshot(req.matches[1]);
            if (!snap)
                throw http_error(404, "not-found", "unknown instance");
            request_from(b, cfg.solve_defaults);
            const auto findings = validate_instance(snap->instance);
            if (count_errors(findings) > 0)
                throw http_error(400, "invalid-instance", "instance has errors", {{"findings", findings_json(findings)}});
            const DerivedSets der = derive_all(snap->instance);
            const auto clashes = find_build_clashes(snap->instance, der);
            if (!clashes.empty())
                throw BuildInfeasibleError(clashes);
            json params = json::object();
            for (const char* k : {"gap", "time_limit", "backend"})
                if (b.contains(k))
                    params[k] = b[k];
            params["snapshot"] = instance_to_json(snap->instance);
            const JobRecord job = store.create_job(snap->id, snap->version, params);
            start_worker(job.id);
            send(res, 202, job_json(job));
        }));

        http.Get(R"(/api/jobs/([^/]+))", guarded([this](const auto& req, auto& res) {
            planner(req);
            const auto j = store.get_job(req.matches[1]);
            if (!j)
                throw http_error(404, "not-found", "unknown job");
            send(res, 200, job_json(*j));
        }));

        // Rosters.
        http.Get(R"(/api/instances/([^/]+)/roster)", guarded([this](const auto& req, auto& res) {
            const auto s = session(req);
            const std::string id = req.matches[1];
            std::optional<StoredRosterVersion> v;
            if (s.role == Role::Physician || req.get_param_value("published") == "1")
                v = store.published_roster(id);
            else if (req.has_param("version"))
                v = store.get_roster_version(id, std::stoi(req.get_param_value("version")));
            else
                v = store.latest_roster(id);
            if (!v)
                throw http_error(404, "not-found", "no roster available");
            send(res, 200, version_json(*v));
        }));

        http.Get(R"(/api/instances/([^/]+)/roster/versions)", guarded([this](const auto& req, auto& res) {
            planner(req);
            json arr = json::array();
            for (const auto& v : store.roster_history(req.matches[1]))
                arr.push_back(version_summary(v));
            send(res, 200, arr);
        }));

        http.Get(R"(/api/instances/([^/]+)/roster/report)", guarded([this](const auto& req, auto& res) {
            const auto s = session(req);
            const std::string id = req.matches[1];
            std::optional<StoredRosterVersion> v;
            if (s.role == Role::Physician)
                v = store.published_roster(id);
            else if (req.has_param("version"))
                v = store.get_roster_version(id, std::stoi(req.get_param_value("version")));
            else
                v = store.latest_roster(id);
            if (!v)
                throw http_error(404, "not-found", "no roster available");
            const auto si = instance_or_404(id);
            const auto der = derive_all(si.instance);
            const auto rep = quality_report(v->roster, si.instance, der, {v->roster.solver.solver_seconds, v->roster.solver.total_seconds});
            if (req.get_param_value("format") == "table")
                res.set_content(render_report_table(rep), "text/plain");
            else
                send(res, 200, report_to_json(rep));
        }));

        http.Post(R"(/api/instances/([^/]+)/roster/adjust)", guarded([this](const auto& req, auto& res) {
            const auto s = planner(req);
            const std::string id = req.matches[1];
            const json b = parse_body(req);
            auto snap = store.snapshot(id);
            if (!snap)
                throw http_error(404, "not-found", "unknown instance");
            std::optional<StoredRosterVersion> base =
                b.contains("base_version") ? store.get_roster_version(id, b["base_version"].get<int>()) : store.latest_roster(id);
            RosterSolution roster;
            if (base) {
                roster = base->roster;
            } else {
                roster.department = snap->instance.department;
                roster.period_start = snap->instance.period.start;
                roster.period_end = snap->instance.period.end;
            }
            if (b.contains("assignments")) {
                roster.assignments.clear();
                for (const auto& a : b["assignments"])
                    roster.assignments.push_back({a.at("physician"), a.at("instance")});
            }
            for (const auto& a : b.value("remove", json::array())) {
                const Assignment x{a.at("physician"), a.at("instance")};
                roster.assignments.erase(std::remove(roster.assignments.begin(), roster.assignments.end(), x),
                                         roster.assignments.end());
            }
            for (const auto& a : b.value("add", json::array()))
                roster.assignments.push_back({a.at("physician"), a.at("instance")});
            const DerivedSets der = derive_all(snap->instance);
            normalize_roster(roster, der);
            const auto v = validate_roster(roster, snap->instance, der);
            roster.solver.status = "adjusted";
            roster.solver.objective = v.soft.objective;
            const auto stored = store.append_roster_version(id, roster, VersionStatus::Adjusted, s.user, hard_json(v.hard),
                                                            base ? std::optional<int>(base->version) : std::nullopt);
            json out = version_summary(stored);
            out["publishable"] = v.hard.empty();
            out["validation"] = validation_to_json(v);
            send(res, 200, out);
        }));

        http.Post(R"(/api/instances/([^/]+)/roster/publish)", guarded([this](const auto& req, auto& res) {
            const auto s = planner(req);
            const json b = parse_body(req);
            if (!b.contains("version"))
                throw http_error(400, "bad-request", "version is required");
            const auto v = store.publish(req.matches[1], b["version"].get<int>(), s.user);
            send(res, 200, version_summary(v));
        }));

        http.Get(R"(/api/instances/([^/]+)/calendar/([^/]+)\.ics)", guarded([this](const auto& req, auto& res) {
            const auto s = session(req);
            const std::string id = req.matches[1];
            const std::string who = req.matches[2];
            if (s.role == Role::Physician && s.user != who)
                throw http_error(403, "forbidden", "physicians may only export their own calendar");
            std::optional<StoredRosterVersion> v;
            if (s.role == Role::Planner && req.has_param("version"))
                v = store.get_roster_version(id, std::stoi(req.get_param_value("version")));
            else
                v = store.published_roster(id);
            if (!v)
                throw http_error(404, "not-found", "no published roster");
            const auto si = instance_or_404(id);
            const auto der = derive_all(si.instance);
            if (!der.physician_index.count(who))
                throw http_error(404, "not-found", "unknown physician");
            res.status = 200;
            res.set_content(roster_to_ics(v->roster, si.instance, der, who, ics_stamp_now()), "text/calendar; charset=utf-8");
        }));
    }
};

RosterService::RosterService(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}

RosterService::~RosterService() = default;

int RosterService::bind() {
    if (impl_->cfg.port == 0)
        impl_->bound_port = impl_->http.bind_to_any_port(impl_->cfg.host);
    else
        impl_->bound_port = impl_->http.bind_to_port(impl_->cfg.host, impl_->cfg.port) ? impl_->cfg.port : -1;
    return impl_->bound_port;
}

bool RosterService::listen() { return impl_->http.listen_after_bind(); }

void RosterService::stop() { impl_->http.stop(); }

Store& RosterService::store() { return impl_->store; }

JobRecord RosterService::wait_job(const std::string& id, std::chrono::seconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        auto j = impl_->store.get_job(id);
        if (!j)
            throw StoreError("unknown job '" + id + "'");
        if (j->state == JobState::Done || j->state == JobState::Failed || std::chrono::steady_clock::now() >= deadline)
            return *j;
        std::unique_lock lock(impl_->mu);
        impl_->cv.wait_for(lock, std::chrono::milliseconds(50));
    }
}

}  // namespace roster
