#pragma once

// REST/JSON service: role-scoped login stub, instance and sub-collection
// CRUD, preference submission with cap enforcement, asynchronous solve jobs,
// roster retrieval, manual adjustment, publishing and calendar export.

#include "roster/solver.hpp"
#include "roster/store.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace roster {

struct ServiceConfig {
    std::string store_path = ":memory:";
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Shared secret required for planner logins.
    std::string planner_key = "planner";
    SolveRequest solve_defaults;
};

/// Reads ROSTER_STORE, ROSTER_LISTEN (host:port) and ROSTER_PLANNER_KEY.
ServiceConfig service_config_from_env();

/// Runs one solve job to a terminal state: derive, build, solve, extract,
/// validate, report; results and failures are stored with the job.
JobRecord run_job(Store& store, const std::string& job_id, const SolveRequest& defaults);

class RosterService {
public:
    explicit RosterService(ServiceConfig cfg);
    ~RosterService();
    RosterService(const RosterService&) = delete;
    RosterService& operator=(const RosterService&) = delete;

    /// Binds to cfg.port (0 picks a free port) and returns the bound port, or -1.
    int bind();
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();

    Store& store();
    /// Blocks until the job is terminal or the timeout passes.
    JobRecord wait_job(const std::string& id, std::chrono::seconds timeout);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace roster
