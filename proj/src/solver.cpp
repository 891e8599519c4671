#include "roster/solver.hpp"

#include "roster/errors.hpp"
#include "roster/mps.hpp"
#include "roster/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

#ifndef ROSTER_DEFAULT_SOLVER
#define ROSTER_DEFAULT_SOLVER ""
#endif

namespace fs = std::filesystem;

namespace roster {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal-within-gap";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::TimeoutNoSolution: return "timeout-no-solution";
    }
    return "?";
}

SolveStatus parse_solve_status(const std::string& s) {
    for (auto st : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible, SolveStatus::TimeoutNoSolution})
        if (s == to_string(st))
            return st;
    throw DocumentError("unknown solve status '" + s + "'");
}

bool has_solution(SolveStatus s) { return s == SolveStatus::Optimal || s == SolveStatus::Feasible; }

namespace {

SolverKind kind_from_path(const std::string& path) {
    const std::string base = fs::path(path).filename().string();
    return base.find("highs") != std::string::npos ? SolverKind::Highs : SolverKind::Cbc;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
}

struct TempDir {
    fs::path path;
    bool owned = false;
    explicit TempDir(const std::string& dir) {
        if (!dir.empty()) {
            path = dir;
            fs::create_directories(path);
            return;
        }
        std::string tmpl = (fs::temp_directory_path() / "roster-XXXXXX").string();
        if (!mkdtemp(tmpl.data()))
            throw std::runtime_error("cannot create temporary directory");
        path = tmpl;
        owned = true;
    }
    ~TempDir() {
        if (owned) {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    }
};

int run_process(const std::vector<std::string>& argv, const fs::path& log, const std::vector<std::string>& extra_env) {
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, 1, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&fa, 1, 2);
    posix_spawn_file_actions_addopen(&fa, 0, "/dev/null", O_RDONLY, 0);
    std::vector<char*> args;
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    std::vector<std::string> env_store;
    for (char** e = environ; *e; ++e)
        env_store.emplace_back(*e);
    for (const auto& e : extra_env)
        env_store.push_back(e);
    std::vector<char*> envp;
    for (auto& e : env_store)
        envp.push_back(e.data());
    envp.push_back(nullptr);
    pid_t pid = 0;
    const int rc = posix_spawn(&pid, argv[0].c_str(), &fa, nullptr, args.data(), envp.data());
    posix_spawn_file_actions_destroy(&fa);
    if (rc != 0)
        throw SolverEnvironmentError("cannot start solver '" + argv[0] + "': " + std::strerror(rc));
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR)
            throw SolverEnvironmentError("waiting for solver failed");
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::optional<double> find_number_after(const std::string& text, const std::string& label) {
    const std::regex re(label + R"(\s*:?\s*([-+0-9.eE]+|[-+]?inf))");
    std::smatch m;
    std::optional<double> out;
    for (auto it = text.cbegin(); std::regex_search(it, text.cend(), m, re); it = m.suffix().first) {
        try {
            out = std::stod(m[1].str());
        } catch (const std::exception&) {
        }
    }
    return out;
}

/// Proven bound from a CBC log, converted back to the maximization sense.
std::optional<double> cbc_bound(const std::string& log) {
    auto finite = [](std::optional<double> v) { return v && std::abs(*v) < 1e300 ? v : std::nullopt; };
    std::optional<double> b = finite(find_number_after(log, "best possible"));
    if (!b)
        b = finite(find_number_after(log, "Cuts at root node changed objective from [-+0-9.eE]+ to"));
    if (!b)
        b = finite(find_number_after(log, "Continuous objective value is"));
    if (b)
        *b = 0.0 - *b;
    return b;
}

}  // namespace

SolverConfig solver_config_from_env() {
    SolverConfig c;
    const char* p = std::getenv("ROSTER_SOLVER");
    c.path = p && *p ? p : ROSTER_DEFAULT_SOLVER;
    c.kind = kind_from_path(c.path);
    if (const char* k = std::getenv("ROSTER_SOLVER_KIND"); k && *k) {
        const std::string s = k;
        if (s == "cbc")
            c.kind = SolverKind::Cbc;
        else if (s == "highs")
            c.kind = SolverKind::Highs;
        else
            throw SolverEnvironmentError("ROSTER_SOLVER_KIND must be cbc or highs");
    }
    if (const char* f = std::getenv("ROSTER_SOLVER_FLAGS"); f && *f) {
        std::istringstream is(f);
        std::string tok;
        while (is >> tok)
            c.extra_flags.push_back(tok);
    }
    return c;
}

void check_request(const SolveRequest& req) {
    if (!(req.gap >= 0 && req.gap < 1))
        throw std::invalid_argument("gap must lie in [0,1)");
    if (!(req.time_limit > 0))
        throw std::invalid_argument("time limit must be positive");
}

SolutionFile parse_cbc_solution(const std::string& text) {
    SolutionFile s;
    std::istringstream is(text);
    std::string head;
    if (!std::getline(is, head))
        throw SolverProtocolError("empty CBC solution file", text);
    if (head.rfind("Optimal", 0) == 0)
        s.status = SolveStatus::Optimal;
    else if (head.rfind("Infeasible", 0) == 0 || head.rfind("Integer infeasible", 0) == 0)
        s.status = SolveStatus::Infeasible;
    else if (head.find("no integer solution") != std::string::npos)
        s.status = SolveStatus::TimeoutNoSolution;
    else if (head.rfind("Stopped", 0) == 0)
        s.status = SolveStatus::Feasible;
    else
        throw SolverProtocolError("unrecognized CBC status line '" + head + "'", text);
    if (const auto pos = head.find("objective value"); pos != std::string::npos) {
        try {
            s.objective = std::stod(head.substr(pos + 15));
        } catch (const std::exception&) {
        }
    }
    if (!has_solution(s.status))
        return s;
    std::string ln;
    while (std::getline(is, ln)) {
        std::istringstream ls(ln);
        std::string first, name;
        double value = 0;
        ls >> first;
        if (first == "**")
            ls >> first;
        if (!(ls >> name >> value))
            throw SolverProtocolError("malformed CBC solution line '" + ln + "'", text);
        s.values[name] = value;
    }
    return s;
}

SolutionFile parse_highs_solution(const std::string& text) {
    SolutionFile s;
    std::istringstream is(text);
    std::string ln;
    std::string model_status;
    bool feasible = false;
    while (std::getline(is, ln)) {
        if (ln == "Model status") {
            std::getline(is, model_status);
        } else if (ln == "# Primal solution values") {
            std::string f;
            std::getline(is, f);
            feasible = f == "Feasible";
        } else if (ln.rfind("Objective ", 0) == 0 && feasible) {
            s.objective = std::stod(ln.substr(10));
        } else if (ln.rfind("# Columns ", 0) == 0 && feasible) {
            const int n = std::stoi(ln.substr(10));
            for (int i = 0; i < n; ++i) {
                if (!std::getline(is, ln))
                    throw SolverProtocolError("truncated HiGHS solution file", text);
                std::istringstream ls(ln);
                std::string name;
                double v = 0;
                if (!(ls >> name >> v))
                    throw SolverProtocolError("malformed HiGHS solution line '" + ln + "'", text);
                s.values[name] = v;
            }
        }
    }
    if (model_status.empty())
        throw SolverProtocolError("HiGHS solution file without model status", text);
    if (model_status == "Optimal")
        s.status = SolveStatus::Optimal;
    else if (model_status == "Infeasible")
        s.status = SolveStatus::Infeasible;
    else
        s.status = feasible ? SolveStatus::Feasible : SolveStatus::TimeoutNoSolution;
    if (s.status == SolveStatus::Optimal && !feasible)
        throw SolverProtocolError("HiGHS reports optimal without a primal solution", text);
    return s;
}

void finalize_solution(const CanonicalModel& model, RawSolution& raw) {
    if (!has_solution(raw.status)) {
        raw.values.clear();
        raw.objective = 0;
        return;
    }
    std::vector<double> x(model.vars().size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& v = model.vars()[i];
        double val = 0;
        if (auto it = raw.values.find(v.name); it != raw.values.end())
            val = it->second;
        const double r = std::round(val);
        if (std::fabs(val - r) <= kIntegralityTol)
            val = r == 0 ? 0 : r;
        x[i] = val;
        raw.values[v.name] = val;
    }
    raw.objective = model.objective(x);
}

RawSolution invoke_external(const CanonicalModel& model, const SolveRequest& req) {
    check_request(req);
    const SolverConfig cfg = req.solver ? *req.solver : solver_config_from_env();
    if (cfg.path.empty())
        throw SolverEnvironmentError("no solver configured; set ROSTER_SOLVER");
    if (access(cfg.path.c_str(), X_OK) != 0)
        throw SolverEnvironmentError("solver binary '" + cfg.path + "' is missing or not executable");

    TempDir dir(req.work_dir);
    const MpsDocument doc = emit_mps(model);
    const fs::path mps = dir.path / "model.mps";
    const fs::path sol = dir.path / "solution.txt";
    const fs::path log = dir.path / "solver.log";
    write_file(mps, doc.text);
    write_file(dir.path / "model.names", doc.names.to_text());
    std::error_code ec;
    fs::remove(sol, ec);

    std::vector<std::string> argv{cfg.path};
    std::vector<std::string> env;
    if (cfg.kind == SolverKind::Cbc) {
        argv.insert(argv.end(), {mps.string(), "-maximize", "-ratioGap", fmt(req.gap), "-sec", fmt(req.time_limit)});
        argv.insert(argv.end(), cfg.extra_flags.begin(), cfg.extra_flags.end());
        argv.insert(argv.end(), {"-solve", "-solution", sol.string()});
    } else {
        const fs::path opts = dir.path / "highs.opt";
        write_file(opts, "mip_rel_gap = " + fmt(req.gap) + "\ntime_limit = " + fmt(req.time_limit) + "\n");
        argv.insert(argv.end(), {"--model_file", mps.string(), "--options_file", opts.string(), "--solution_file", sol.string()});
        argv.insert(argv.end(), cfg.extra_flags.begin(), cfg.extra_flags.end());
        const fs::path lib = fs::path(cfg.path).parent_path().parent_path() / "lib";
        if (fs::exists(lib)) {
            const char* old = std::getenv("LD_LIBRARY_PATH");
            env.push_back("LD_LIBRARY_PATH=" + lib.string() + (old && *old ? std::string(":") + old : ""));
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    const int rc = run_process(argv, log, env);
    RawSolution raw;
    raw.solver_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    raw.backend = cfg.kind == SolverKind::Cbc ? "cbc" : "highs";
    raw.gap_target = req.gap;
    raw.log = read_file(log);

    if (!fs::exists(sol)) {
        if (raw.log.find("Stopped on time") != std::string::npos || raw.log.find("Time limit reached") != std::string::npos) {
            raw.status = SolveStatus::TimeoutNoSolution;
            return raw;
        }
        throw SolverProtocolError("solver exited with code " + std::to_string(rc) + " without a solution file", raw.log);
    }
    const std::string text = read_file(sol);
    SolutionFile parsed = cfg.kind == SolverKind::Cbc ? parse_cbc_solution(text) : parse_highs_solution(text);
    raw.status = parsed.status;
    raw.reported_objective = parsed.objective;
    for (auto& [k, v] : parsed.values) {
        auto it = doc.names.columns.find(k);
        raw.values[it == doc.names.columns.end() ? k : it->second] = v;
    }
    if (cfg.kind == SolverKind::Highs)
        raw.bound = find_number_after(raw.log, "Dual bound");
    else
        raw.bound = cbc_bound(raw.log);
    finalize_solution(model, raw);
    if (raw.status == SolveStatus::Optimal && raw.gap_target == 0)
        raw.bound = raw.objective;
    return raw;
}

RawSolution solve(const CanonicalModel& model, const SolveRequest& req) {
    check_request(req);
    if (req.backend == Backend::Oracle)
        return exhaustive_oracle(model);
    return invoke_external(model, req);
}

}  // namespace roster
