// rosterctl: headless driver for the rostering pipeline.

#include "roster/build_model.hpp"
#include "roster/derive.hpp"
#include "roster/errors.hpp"
#include "roster/instance_check.hpp"
#include "roster/instance_io.hpp"
#include "roster/mps.hpp"
#include "roster/oracle.hpp"
#include "roster/pipeline.hpp"
#include "roster/report.hpp"
#include "roster/scenarios.hpp"
#include "roster/service.hpp"
#include "roster/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <csignal>
#include <iostream>
#include <iterator>

using namespace roster;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

std::string read_source(const std::string& path) {
    if (path.empty() || path == "-")
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return read_text(path);
}

RosterInstance load_instance(const std::string& path) { return decode_instance(read_source(path)); }

void write_output(const std::string& path, const std::string& text) {
    if (path == "-")
        std::cout << text;
    else
        write_text(path, text);
}

Backend parse_backend(const std::string& s) {
    if (s == "oracle")
        return Backend::Oracle;
    return Backend::External;
}

RosterService* g_service = nullptr;

void stop_service(int) {
    if (g_service)
        g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physician duty and shift rostering"};
    app.require_subcommand(1);

    // solve
    std::string solve_in = "-", roster_out = "roster.json", report_out = "report.json", derived_out, backend = "external";
    double gap = 0.03, time_limit = 600;
    auto* solve = app.add_subcommand("solve", "Solve an instance and write roster and report documents");
    solve->add_option("instance", solve_in, "Instance document, '-' for stdin");
    solve->add_option("--roster", roster_out, "Roster output path")->capture_default_str();
    solve->add_option("--report", report_out, "Report output path")->capture_default_str();
    solve->add_option("--gap", gap, "Relative optimality gap")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    solve->add_option("--time-limit", time_limit, "Solver time limit in seconds")->capture_default_str()->check(CLI::PositiveNumber);
    solve->add_option("--backend", backend, "external or oracle")->capture_default_str()->check(CLI::IsMember({"external", "oracle"}));
    solve->add_option("--dump-derived", derived_out, "Write derived sets as JSON");

    // validate
    std::string val_instance, val_roster, val_out;
    auto* validate = app.add_subcommand("validate", "Check a roster against an instance");
    validate->add_option("instance", val_instance, "Instance document")->required();
    validate->add_option("roster", val_roster, "Roster document")->required();
    validate->add_option("--out", val_out, "Write findings JSON to this path");

    // report
    std::string rep_in, rep_cmp, rep_format = "table", rep_instance;
    auto* report = app.add_subcommand("report", "Render a report document, or compute one from instance and roster");
    report->add_option("report", rep_in, "Report document, or roster document with --instance")->required();
    report->add_option("--instance", rep_instance, "Instance document; treats the positional argument as a roster");
    report->add_option("--compare", rep_cmp, "Second report to compare against");
    report->add_option("--format", rep_format, "table or doc")->capture_default_str()->check(CLI::IsMember({"table", "doc"}));

    // export-mps
    std::string mps_in = "-", mps_out = "-", names_out;
    auto* export_mps = app.add_subcommand("export-mps", "Write the optimization model in MPS format");
    export_mps->add_option("instance", mps_in, "Instance document, '-' for stdin");
    export_mps->add_option("--out", mps_out, "MPS output path")->capture_default_str();
    export_mps->add_option("--names", names_out, "Write the short-name map to this path");

    // oracle-check
    int oc_n = 100;
    std::uint64_t oc_seed = 1;
    bool oc_verbose = false;
    auto* oracle_check = app.add_subcommand("oracle-check", "Compare oracle and external solver on random tiny instances");
    oracle_check->add_option("--n", oc_n, "Number of instances")->capture_default_str()->check(CLI::PositiveNumber);
    oracle_check->add_option("--seed", oc_seed, "First seed")->capture_default_str();
    oracle_check->add_flag("--verbose", oc_verbose, "Print one line per instance");

    // demo
    std::string demo_name;
    std::uint64_t demo_seed = 1;
    std::string demo_out = "-";
    auto* demo = app.add_subcommand("demo", "Emit a bundled scenario instance");
    demo->add_option("--scenario", demo_name, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
    demo->add_option("--seed", demo_seed, "Generator seed")->capture_default_str();
    demo->add_option("--out", demo_out, "Output path")->capture_default_str();

    // serve
    std::string listen, store_path;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--listen", listen, "host:port (default from ROSTER_LISTEN)");
    serve->add_option("--store", store_path, "Store path (default from ROSTER_STORE)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (*solve) {
            const RosterInstance inst = load_instance(solve_in);
            SolveRequest req;
            req.gap = gap;
            req.time_limit = time_limit;
            req.backend = parse_backend(backend);
            if (!derived_out.empty())
                write_text(derived_out, derived_to_json(derive_all(inst)).dump(2) + "\n");
            const PipelineResult r = run_pipeline(inst, req);
            write_output(roster_out, encode_roster(r.roster));
            write_output(report_out, encode_report(r.report));
            std::cerr << "status " << to_string(r.raw.status) << ", objective " << r.raw.objective << ", hard findings "
                      << r.hard_findings.size() << ", " << r.roster.solver.total_seconds << " s\n";
            return r.hard_findings.empty() ? kExitOk : kExitFindings;
        }
        if (*validate) {
            const RosterInstance inst = load_instance(val_instance);
            const RosterSolution roster = decode_roster(read_source(val_roster));
            const DerivedSets der = derive_all(inst);
            const ValidationResult v = validate_roster(roster, inst, der);
            const nlohmann::json doc = validation_to_json(v);
            if (!val_out.empty())
                write_output(val_out, doc.dump(2) + "\n");
            for (const auto& f : v.hard)
                std::cout << "hard " << f.family << ": " << f.message << "\n";
            std::cout << v.hard.size() << " hard finding(s), recounted objective " << v.soft.objective << "\n";
            return v.hard.empty() ? kExitOk : kExitFindings;
        }
        if (*report) {
            QualityReport first;
            if (!rep_instance.empty()) {
                const RosterInstance inst = load_instance(rep_instance);
                const RosterSolution roster = decode_roster(read_source(rep_in));
                first = quality_report(roster, inst, derive_all(inst),
                                       {roster.solver.solver_seconds, roster.solver.total_seconds});
            } else {
                first = decode_report(read_source(rep_in));
            }
            if (!rep_cmp.empty()) {
                const auto deltas = compare_reports(first, decode_report(read_text(rep_cmp)));
                std::cout << render_comparison(deltas);
                return kExitOk;
            }
            std::cout << (rep_format == "doc" ? encode_report(first) : render_report_table(first));
            return kExitOk;
        }
        if (*export_mps) {
            const RosterInstance inst = load_instance(mps_in);
            const DerivedSets der = derive_all(inst);
            const CanonicalModel model = build_model(inst, der, inst.weights);
            const MpsDocument doc = emit_mps(model);
            write_output(mps_out, doc.text);
            if (!names_out.empty())
                write_text(names_out, doc.names.to_text());
            return kExitOk;
        }
        if (*oracle_check) {
            int agree = 0;
            for (int i = 0; i < oc_n; ++i) {
                const std::uint64_t seed = oc_seed + static_cast<std::uint64_t>(i);
                const RosterInstance inst = random_tiny_instance(seed);
                const DerivedSets der = derive_all(inst);
                const CanonicalModel model = build_model(inst, der, inst.weights);
                const RawSolution o = exhaustive_oracle(model);
                SolveRequest req;
                req.gap = 0;
                req.time_limit = 60;
                const RawSolution e = invoke_external(model, req);
                const bool same_status = has_solution(o.status) == has_solution(e.status);
                const bool ok = same_status && (!has_solution(o.status) || std::fabs(o.objective - e.objective) <= 1e-6);
                agree += ok ? 1 : 0;
                if (oc_verbose || !ok)
                    std::cout << "seed " << seed << (ok ? " agree " : " DISAGREE ") << to_string(o.status) << " "
                              << o.objective << " / " << to_string(e.status) << " " << e.objective << "\n";
            }
            std::cout << agree << "/" << oc_n << " agree\n";
            return agree == oc_n ? kExitOk : kExitFindings;
        }
        if (*demo) {
            write_output(demo_out, encode_instance(make_scenario(demo_name, demo_seed)));
            return kExitOk;
        }
        if (*serve) {
            ServiceConfig cfg = service_config_from_env();
            if (!store_path.empty())
                cfg.store_path = store_path;
            if (!listen.empty()) {
                const auto colon = listen.rfind(':');
                if (colon == std::string::npos)
                    throw ConfigError("--listen must be host:port");
                cfg.host = listen.substr(0, colon);
                cfg.port = std::stoi(listen.substr(colon + 1));
            }
            RosterService service(cfg);
            const int port = service.bind();
            if (port < 0)
                throw ConfigError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
            std::cerr << "listening on " << cfg.host << ":" << port << "\n";
            g_service = &service;
            std::signal(SIGINT, stop_service);
            std::signal(SIGTERM, stop_service);
            service.listen();
            g_service = nullptr;
            return kExitOk;
        }
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.to_json().dump() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
