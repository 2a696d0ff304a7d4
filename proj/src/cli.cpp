#include "csplab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csplab/algorithms.hpp"
#include "csplab/errors.hpp"
#include "csplab/generators.hpp"
#include "csplab/harness.hpp"
#include "csplab/instance.hpp"
#include "csplab/semantics.hpp"
#include "csplab/stream.hpp"

namespace csplab {

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(f);
    } catch (const Json::exception& e) {
        throw ConfigError("bad JSON in '" + path + "': " + e.what());
    }
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

struct CliOptions {
    // gen
    std::string spec_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    // solve / run
    std::string in_path;
    bool exact = false;
    bool show_assignment = false;
    // run
    std::string algo_id;
    std::string params_json;
    std::optional<double> eps;
    std::string tie;
    std::optional<std::uint64_t> space_bits;
    std::optional<unsigned> walkers;
    std::optional<unsigned> length;
    std::string ordering = "adversarial";
    unsigned passes = 0;
    // sweep
    std::string config_path;
    // gapcheck
    std::string yes_path;
    std::string no_path;
    int trials = 50;
};

int do_gen(const CliOptions& opt, std::ostream& out) {
    GeneratorSpec spec = GeneratorSpec::from_json(read_json_file(opt.spec_path));
    if (opt.seed) spec.seed = *opt.seed;
    const GenResult res = generate(spec);
    write_text(write_instance(res.instance), opt.out_path, out);
    return 0;
}

int do_solve(const CliOptions& opt, std::ostream& out) {
    if (!opt.exact) throw ConfigError("solve currently supports --exact only");
    const Instance inst = read_instance_file(opt.in_path);
    const auto [best, argmax] = max_value(inst);
    out << best.str() << "\n";
    if (opt.show_assignment) {
        std::string bits(inst.n, '0');
        for (std::uint32_t i = 0; i < inst.n; ++i)
            if (argmax.bits[i]) bits[i] = '1';
        out << bits << "\n";
    }
    return 0;
}

int do_run(const CliOptions& opt, std::ostream& out) {
    const Instance inst = read_instance_file(opt.in_path);

    Json params = Json::object();
    if (!opt.params_json.empty()) {
        try {
            params = Json::parse(opt.params_json);
        } catch (const Json::exception& e) {
            throw ConfigError(std::string("bad --params JSON: ") + e.what());
        }
    }
    if (opt.eps) params["eps"] = *opt.eps;
    if (!opt.tie.empty()) params["tie"] = opt.tie;
    if (opt.walkers) params["walkers"] = *opt.walkers;
    if (opt.length) params["length"] = *opt.length;

    ExecutionPlan plan;
    plan.ordering = ordering_from_name(opt.ordering);
    plan.order_seed = opt.seed ? mix2(*opt.seed, 3) : 0;
    plan.algo_seed = opt.seed ? mix2(*opt.seed, 2) : 0;
    if (opt.space_bits) {
        // budgeted detectors consume the budget as a parameter; everything
        // else gets it as a hard cap on the declared state
        if (opt.algo_id == "component-growing")
            params["space_bits"] = *opt.space_bits;
        else if (opt.algo_id == "random-walk" && !opt.walkers)
            params["walkers"] = walkers_for_budget(*opt.space_bits, inst.n);
        else
            plan.space_budget = *opt.space_bits;
    }

    auto alg = make_algorithm(opt.algo_id, params, inst.family);
    plan.passes = opt.passes == 0 ? alg->required_passes() : opt.passes;

    const RunResult res = run_stream(*alg, inst, plan);
    if (!res.output.label.empty())
        out << res.output.label << "\n";
    if (res.output.value)
        out << fmt_double(*res.output.value) << "\n";
    return 0;
}

int do_sweep(const CliOptions& opt, std::ostream& out) {
    SweepConfig cfg = SweepConfig::from_json(read_json_file(opt.config_path));
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.trials > 0) cfg.trials = opt.trials;
    write_text(space_sweep_csv(cfg), opt.out_path, out);
    return 0;
}

int do_gapcheck(const CliOptions& opt, std::ostream& out) {
    const GeneratorSpec yes = GeneratorSpec::from_json(read_json_file(opt.yes_path));
    const GeneratorSpec no = GeneratorSpec::from_json(read_json_file(opt.no_path));
    const GapReport rep = gap_check(yes, no, opt.trials);
    write_text(rep.to_json().dump(2) + "\n", opt.out_path, out);
    return 0;
}

int do_algos(std::ostream& out) {
    for (const auto& info : algorithm_registry()) {
        out << info.id << "\n  params: " << info.params_doc << "\n  state bits: " << info.space_doc
            << "\n  mode: " << (info.verdict_mode ? "verdict" : "value")
            << (info.sketch ? " (sketch)" : "") << "\n";
    }
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"csplab: a streaming Max-CSP approximation lab"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* gen = app.add_subcommand("gen", "generate an instance file from a spec JSON");
    gen->add_option("--spec", opt.spec_path, "generator spec JSON file")->required();
    gen->add_option("--seed", opt.seed, "override the spec's seed");
    gen->add_option("--out", opt.out_path, "output instance file (default stdout)");

    auto* solve = app.add_subcommand("solve", "exact maxval of an instance file");
    solve->add_flag("--exact", opt.exact, "exhaustive enumeration (required)");
    solve->add_option("--in", opt.in_path, "instance file")->required();
    solve->add_flag("--assignment", opt.show_assignment, "also print one argmax");

    auto* run = app.add_subcommand("run", "run a streaming algorithm over an instance file");
    run->add_option("--algo", opt.algo_id, "algorithm id (see 'algos')")->required();
    run->add_option("--in", opt.in_path, "instance file")->required();
    run->add_option("--params", opt.params_json, "algorithm parameters as inline JSON");
    run->add_option("--eps", opt.eps, "eps shortcut (trivial, sparsify)");
    run->add_option("--tie", opt.tie, "tie rule shortcut (bias-greedy): one|zero|coin");
    run->add_option("--space-bits", opt.space_bits, "space budget in bits");
    run->add_option("--walkers", opt.walkers, "walker count (random-walk)");
    run->add_option("--length", opt.length, "walk length (random-walk)");
    run->add_option("--ordering", opt.ordering, "adversarial|random");
    run->add_option("--passes", opt.passes, "pass count (default: the algorithm's requirement)");
    run->add_option("--seed", opt.seed, "run seed (orders and algorithm randomness)");

    auto* sweep = app.add_subcommand("sweep", "advantage sweep over a space/pass grid");
    sweep->add_option("--config", opt.config_path, "sweep config JSON file")->required();
    sweep->add_option("--out", opt.out_path, "output CSV file (default stdout)");
    sweep->add_option("--seed", opt.seed, "override master seed");
    sweep->add_option("--trials", opt.trials, "override trials per cell")->default_val(0);

    auto* gapcheck = app.add_subcommand("gapcheck", "empirical maxval gap between two specs");
    gapcheck->add_option("--yes", opt.yes_path, "yes-spec JSON file")->required();
    gapcheck->add_option("--no", opt.no_path, "no-spec JSON file")->required();
    gapcheck->add_option("--trials", opt.trials, "samples per side")->default_val(50);
    gapcheck->add_option("--out", opt.out_path, "output report JSON (default stdout)");

    auto* algos = app.add_subcommand("algos", "list the algorithm registry");

    std::vector<const char*> argv;
    argv.push_back("csplab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (gen->parsed()) return do_gen(opt, out);
        if (solve->parsed()) return do_solve(opt, out);
        if (run->parsed()) return do_run(opt, out);
        if (sweep->parsed()) return do_sweep(opt, out);
        if (gapcheck->parsed()) return do_gapcheck(opt, out);
        if (algos->parsed()) return do_algos(out);
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace csplab
