#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "ergodic/config.hpp"
#include "ergodic/error.hpp"
#include "ergodic/hjb.hpp"
#include "ergodic/howard.hpp"
#include "ergodic/io.hpp"
#include "ergodic/mcsim.hpp"

namespace ergodic::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string config;
    std::string out_dir = "out";
    std::string strategy;
    std::string value;
    std::optional<double> rho;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<double> burn_in;
    std::optional<std::size_t> paths;
    std::optional<double> x0;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Raised for input that should end the run with exit code 1.
struct UsageError : Error {
    using Error::Error;
};

Strategy load_strategy(const std::string& source, const Problem& p) {
    if (fs::is_regular_file(source)) {
        return io::read_strategy(source, p.grid(), p.controls);
    }
    Expression expr = Expression::parse(source);
    if (!expr.is_control_free()) {
        throw UsageError("strategy expression may only depend on x");
    }
    return Strategy::from_expression(p.grid(), expr, p.controls);
}

void require_valid(const Problem& p, ordered_json& manifest, const fs::path& out) {
    const ValidationReport report = validate_problem(p);
    io::write_json(out / "validation.json", io::to_json(report));
    manifest["validation_ok"] = report.ok();
    if (const Check* c = report.first_fatal()) {
        throw UsageError("validation failed: " + c->name + ": " + c->detail);
    }
    for (const auto& c : report.checks) {
        if (!c.passed) {
            std::cerr << "warning: " << c.name << ": " << c.detail << '\n';
        }
    }
}

int cmd_solve(const Problem& p, const Options&, const fs::path& out, ordered_json& manifest) {
    require_valid(p, manifest, out);
    const SolveResult r = solve(p, initial_strategy(p));
    const Strategy& alpha = r.strategy;
    io::write_json(out / "solve_result.json", io::to_json(r));
    io::write_csv(out / "iterations.csv", io::iterations_table(r.iterations));
    io::write_csv(out / "value_function.csv",
                  io::value_table(r.evaluation.value, ode_residual(p, alpha, r.evaluation.value)));
    io::write_csv(out / "strategy.csv", io::strategy_table(alpha));
    io::write_csv(out / "density.csv", io::density_table(alpha, r.evaluation.density));
    io::write_csv(out / "bellman.csv",
                  io::bellman_table(bellman_residual(p, r.evaluation.value, r.rho_tilde)));
    for (const auto& w : r.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    double wall = 0.0;
    for (const auto& it : r.iterations) {
        wall += it.wall_time_s;
    }
    manifest["wall_time_s"] = wall;
    std::cout << "rho = " << io::format_double(r.rho_tilde) << " after " << r.iterations.size()
              << " iteration(s), " << (r.converged ? "converged" : "max_iterations reached") << '\n';
    return r.converged ? kOk : kNotConverged;
}

int cmd_evaluate(const Problem& p, const Options& opt, const fs::path& out, ordered_json& manifest) {
    require_valid(p, manifest, out);
    const Strategy alpha = load_strategy(opt.strategy, p);
    const Evaluation ev = evaluate(p, alpha);
    io::write_csv(out / "density.csv", io::density_table(alpha, ev.density));
    io::write_csv(out / "value_function.csv",
                  io::value_table(ev.value, ode_residual(p, alpha, ev.value)));
    ordered_json j;
    j["rho"] = ev.rho;
    j["normalization_constant"] = ev.density.normalization_constant;
    j["tail_mass"] = ev.density.tail_mass;
    const auto adj = adjoint_residual(p, alpha, ev.density);
    j["adjoint_residual"] = adj ? ordered_json(*adj) : ordered_json(nullptr);
    io::write_json(out / "rho.json", j);
    std::cout << "rho = " << io::format_double(ev.rho) << '\n';
    return kOk;
}

int cmd_simulate(const Problem& p, const Options& opt, const fs::path& out, ordered_json& manifest) {
    require_valid(p, manifest, out);
    const Strategy alpha =
        opt.strategy.empty() ? solve(p, initial_strategy(p)).strategy : load_strategy(opt.strategy, p);
    SimConfig cfg;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.dt) cfg.time_step = *opt.dt;
    if (opt.horizon) cfg.horizon = *opt.horizon;
    if (opt.burn_in) cfg.burn_in = *opt.burn_in;
    if (opt.paths) cfg.n_paths = *opt.paths;
    if (opt.x0) cfg.x0 = *opt.x0;
    const CrossCheckReport r = cross_validate(p, alpha, cfg, opt.rho);
    io::write_json(out / "mc_report.json", io::to_json(r, cfg));
    std::cout << "mc mean = " << io::format_double(r.mc.mean) << " +/- "
              << io::format_double(r.mc.std_error) << ", quadrature rho = "
              << io::format_double(r.rho_quadrature) << (r.passed ? " (pass)" : " (FAIL)") << '\n';
    return r.passed ? kOk : kCheckFailed;
}

int cmd_verify(const Problem& p, const Options& opt, const fs::path& out, ordered_json& manifest) {
    require_valid(p, manifest, out);
    if (!opt.rho) {
        throw UsageError("verify requires --rho");
    }
    const ValueFunction vf = io::read_value_function(opt.value, p.grid(), *opt.rho);
    const VerificationReport r = verify_solution(p, vf, *opt.rho);
    io::write_json(out / "verification.json", io::to_json(r));
    io::write_csv(out / "bellman.csv", io::bellman_table(r.residual));
    std::cout << "sup core residual = " << io::format_double(r.residual.sup_core)
              << (r.verified ? " (verified)" : " (NOT verified)") << '\n';
    return r.verified ? kOk : kCheckFailed;
}

int cmd_validate(const Problem& p, const Options&, const fs::path& out, ordered_json& manifest) {
    require_valid(p, manifest, out);
    std::cout << "all fatal checks passed\n";
    return kOk;
}

using Command = std::function<int(const Problem&, const Options&, const fs::path&, ordered_json&)>;

ordered_json new_manifest(const std::string& name, const Options& opt,
                          const std::vector<std::string>& args) {
    ordered_json manifest;
    manifest["tool"] = "ergoctl";
    manifest["version"] = kVersion;
    manifest["command"] = name;
    manifest["args"] = args;
    manifest["config"] = opt.config;
    manifest["out_dir"] = opt.out_dir;
    manifest["timestamp"] = utc_timestamp();
    manifest["problem"] = nullptr;
    return manifest;
}

int finish(ordered_json& manifest, const fs::path& out, int status, const std::string& message,
           bool echo = true) {
    if (echo && !message.empty()) {
        std::cerr << "error: " << message << '\n';
    }
    manifest["exit_status"] = status;
    manifest["message"] = message;
    try {
        fs::create_directories(out);
        io::write_json(out / "manifest.json", manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write manifest: " << e.what() << '\n';
    }
    return status;
}

int dispatch(const std::string& name, const Command& command, const Options& opt,
             const std::vector<std::string>& args) {
    const fs::path out(opt.out_dir);
    ordered_json manifest = new_manifest(name, opt, args);

    int status = kOk;
    std::string message;
    try {
        fs::create_directories(out);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: cannot create output directory: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        const Problem p = load_problem(opt.config);
        manifest["problem"] = problem_to_json(p);
        status = command(p, opt, out, manifest);
    } catch (const Error& e) {
        message = e.what();
        status = kConfigError;
    } catch (const std::exception& e) {
        message = std::string("unexpected failure: ") + e.what();
        status = kConfigError;
    }
    return finish(manifest, out, status, message);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Ergodic control solver: optimal long-run average cost by policy iteration"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config, "Problem configuration (JSON)")->required();
        sub->add_option("-o,--out-dir", opt.out_dir, "Output directory")->capture_default_str();
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "Run policy iteration to convergence");
    add_common(solve_cmd);

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Evaluate a fixed strategy");
    add_common(eval_cmd);
    eval_cmd->add_option("-s,--strategy", opt.strategy, "Strategy CSV (x,alpha) or expression in x")
        ->required();

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo cross-check of the average cost");
    add_common(sim_cmd);
    sim_cmd->add_option("-s,--strategy", opt.strategy,
                        "Strategy CSV or expression; default: the solver's converged strategy");
    sim_cmd->add_option("--seed", opt.seed, "Random seed");
    sim_cmd->add_option("--dt", opt.dt, "Euler time step");
    sim_cmd->add_option("--horizon", opt.horizon, "Simulated time per path");
    sim_cmd->add_option("--burn-in", opt.burn_in, "Discarded initial time");
    sim_cmd->add_option("--paths", opt.paths, "Number of independent paths");
    sim_cmd->add_option("--x0", opt.x0, "Initial state");
    sim_cmd->add_option("--rho", opt.rho, "Compare against this value instead of the quadrature rho");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Check that (v, rho) solves the ergodic HJB equation");
    add_common(verify_cmd);
    verify_cmd->add_option("--value", opt.value, "value_function.csv with x,v,dv,d2v columns")->required();
    verify_cmd->add_option("--rho", opt.rho, "Candidate optimal average cost")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check the standing assumptions only");
    add_common(validate_cmd);

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) {
            return kOk;
        }
        const std::vector<std::string> rest(args.begin() + std::min<std::size_t>(1, args.size()),
                                            args.end());
        ordered_json manifest = new_manifest("", opt, rest);
        return finish(manifest, opt.out_dir, kConfigError, e.what(), false);
    }

    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (*solve_cmd) return dispatch("solve", cmd_solve, opt, rest);
    if (*eval_cmd) return dispatch("evaluate", cmd_evaluate, opt, rest);
    if (*sim_cmd) return dispatch("simulate", cmd_simulate, opt, rest);
    if (*verify_cmd) return dispatch("verify", cmd_verify, opt, rest);
    return dispatch("validate", cmd_validate, opt, rest);
}

}  // namespace ergodic::cli
