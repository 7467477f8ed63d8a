#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pibound/analysis.hpp"
#include "pibound/checker.hpp"
#include "pibound/congruence.hpp"
#include "pibound/parser.hpp"
#include "pibound/printer.hpp"
#include "pibound/semantics.hpp"

namespace {

constexpr int kExitAccepted = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

pibound::Policy parse_policy(const std::string& name) {
    if (name == "leftmost")
        return pibound::Policy::Leftmost;
    if (name == "random")
        return pibound::Policy::Random;
    if (name == "fair")
        return pibound::Policy::Fair;
    throw CLI::ValidationError("--policy", "expected leftmost, random or fair");
}

pibound::VarMode parse_var_mode(const std::string& name) {
    if (name == "strict")
        return pibound::VarMode::Strict;
    if (name == "lenient")
        return pibound::VarMode::Lenient;
    throw CLI::ValidationError("--var-mode", "expected strict or lenient");
}

pibound::TypeSystem parse_system(const std::string& name) {
    if (name == "depth")
        return pibound::TypeSystem::Depth;
    if (name == "name")
        return pibound::TypeSystem::Name;
    throw CLI::ValidationError("--system", "expected depth or name");
}

} // namespace

int main(int argc, char** argv) {
    using namespace pibound;

    CLI::App app{"analyzer for a polarized pi-calculus with binary session types"};
    app.require_subcommand(1);

    // check
    auto* check_cmd = app.add_subcommand("check", "type-check a process");
    std::string check_system = "depth", check_var_mode = "lenient", check_file,
                check_env_file;
    check_cmd->add_option("--system", check_system, "type system: depth or name");
    check_cmd->add_option("--var-mode", check_var_mode, "Var rule mode: strict or lenient");
    check_cmd->add_option("--env", check_env_file, "environment declaration file");
    check_cmd->add_option("file", check_file, "process file")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "execute reduction steps");
    std::size_t run_steps = 10;
    std::string run_policy = "leftmost";
    std::uint64_t run_seed = 0;
    bool run_untyped = false;
    std::string run_file;
    run_cmd->add_option("--steps", run_steps, "maximum number of steps");
    run_cmd->add_option("--policy", run_policy, "leftmost, random or fair");
    run_cmd->add_option("--seed", run_seed, "seed for the random policy");
    run_cmd->add_flag("--untyped", run_untyped, "accept unannotated restrictions");
    run_cmd->add_option("file", run_file, "process file")->required();

    // measure
    auto* measure_cmd = app.add_subcommand("measure", "boundedness metrics along a trace");
    std::size_t measure_steps = 50;
    std::string measure_policy = "leftmost";
    std::uint64_t measure_seed = 0;
    bool measure_json = false, measure_untyped = false;
    std::string measure_file;
    measure_cmd->add_option("--steps", measure_steps, "maximum number of steps");
    measure_cmd->add_option("--policy", measure_policy, "leftmost, random or fair");
    measure_cmd->add_option("--seed", measure_seed, "seed for the random policy");
    measure_cmd->add_flag("--json", measure_json, "emit a JSON report");
    measure_cmd->add_flag("--untyped", measure_untyped, "accept unannotated restrictions");
    measure_cmd->add_option("file", measure_file, "process file")->required();

    // fidelity
    auto* fidelity_cmd = app.add_subcommand("fidelity", "check type evolution along a trace");
    std::size_t fidelity_steps = 30;
    std::string fidelity_policy = "leftmost", fidelity_env_file, fidelity_file;
    std::string fidelity_system = "depth", fidelity_var_mode = "lenient";
    std::uint64_t fidelity_seed = 0;
    fidelity_cmd->add_option("--steps", fidelity_steps, "maximum number of steps");
    fidelity_cmd->add_option("--policy", fidelity_policy, "leftmost, random or fair");
    fidelity_cmd->add_option("--seed", fidelity_seed, "seed for the random policy");
    fidelity_cmd->add_option("--system", fidelity_system, "type system: depth or name");
    fidelity_cmd->add_option("--var-mode", fidelity_var_mode, "strict or lenient");
    fidelity_cmd->add_option("--env", fidelity_env_file, "environment declaration file")
        ->required();
    fidelity_cmd->add_option("file", fidelity_file, "process file")->required();

    // normalize
    auto* normalize_cmd = app.add_subcommand("normalize", "print a normal form");
    std::string normalize_form = "inner", normalize_file;
    bool normalize_untyped = false;
    normalize_cmd->add_option("--form", normalize_form, "inner or outer");
    normalize_cmd->add_flag("--untyped", normalize_untyped,
                            "accept unannotated restrictions");
    normalize_cmd->add_option("file", normalize_file, "process file")->required();

    // depth
    auto* depth_cmd = app.add_subcommand("depth", "depth metrics of a process");
    std::size_t depth_budget_states = 50000;
    bool depth_untyped = false;
    std::string depth_file;
    depth_cmd->add_option("--oracle-budget", depth_budget_states,
                          "state budget for the exhaustive search (0 disables)");
    depth_cmd->add_flag("--untyped", depth_untyped, "accept unannotated restrictions");
    depth_cmd->add_option("file", depth_file, "process file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitAccepted;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*check_cmd) {
            ProcRef p = parse_process(read_file(check_file));
            TypeEnv env;
            if (!check_env_file.empty())
                env = parse_env(read_file(check_env_file));
            CheckResult result = check(parse_system(check_system), env, RecEnv{}, p,
                                       parse_var_mode(check_var_mode));
            std::cout << render_check_result(result);
            return accepted(result) ? kExitAccepted : kExitRejected;
        }
        if (*run_cmd) {
            ProcRef p = parse_process(read_file(run_file), {run_untyped});
            Trace trace = run(p, run_steps, parse_policy(run_policy), run_seed);
            std::cout << render_trace(trace);
            return kExitAccepted;
        }
        if (*measure_cmd) {
            ProcRef p = parse_process(read_file(measure_file), {measure_untyped});
            BoundednessReport report =
                measure(p, measure_steps, parse_policy(measure_policy), measure_seed);
            std::cout << (measure_json ? render_measure_json(report)
                                       : render_measure_text(report));
            if (measure_json)
                std::cout << "\n";
            return kExitAccepted;
        }
        if (*fidelity_cmd) {
            ProcRef p = parse_process(read_file(fidelity_file));
            TypeEnv env = parse_env(read_file(fidelity_env_file));
            FidelityOptions opts{parse_system(fidelity_system),
                                 parse_var_mode(fidelity_var_mode)};
            CheckResult initial = check(opts.system, env, RecEnv{}, p, opts.mode);
            if (!accepted(initial)) {
                std::cout << "initial process is not well-typed\n"
                          << render_check_result(initial);
                return kExitRejected;
            }
            Trace trace = run(p, fidelity_steps, parse_policy(fidelity_policy),
                              fidelity_seed);
            auto records = fidelity_check(env, trace, opts);
            std::cout << render_fidelity(records);
            bool all_ok = true;
            for (const auto& r : records)
                all_ok = all_ok && r.match && r.successor_accepted;
            std::cout << "fidelity: " << (all_ok ? "holds" : "violated") << " over "
                      << records.size() << " step(s)\n";
            return all_ok ? kExitAccepted : kExitRejected;
        }
        if (*normalize_cmd) {
            ProcRef p = parse_process(read_file(normalize_file), {normalize_untyped});
            if (normalize_form == "inner")
                std::cout << print_process(inner_normal_form(p)) << "\n";
            else if (normalize_form == "outer")
                std::cout << print_process(outer_normal_form(p)) << "\n";
            else
                throw CLI::ValidationError("--form", "expected inner or outer");
            return kExitAccepted;
        }
        if (*depth_cmd) {
            ProcRef p = parse_process(read_file(depth_file), {depth_untyped});
            std::optional<std::size_t> budget;
            if (depth_budget_states > 0)
                budget = depth_budget_states;
            DepthReport report = depth_report(p, budget);
            std::cout << "nest_raw: " << report.nest_raw << "\n";
            std::cout << "depth_estimate: " << report.depth_estimate << "\n";
            std::cout << "oracle_depth: "
                      << (report.oracle_depth ? std::to_string(*report.oracle_depth)
                                              : std::string("budget-exhausted"))
                      << "\n";
            std::cout << "restriction_count_normalized: "
                      << report.restriction_count_normalized << "\n";
            return kExitAccepted;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const pibound::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
