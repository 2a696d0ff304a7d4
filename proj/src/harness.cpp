#include "csplab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "csplab/errors.hpp"
#include "csplab/semantics.hpp"

namespace csplab {

double hoeffding_halfwidth(int trials, double delta) {
    if (trials < 1) throw DomainError("hoeffding_halfwidth: trials must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("hoeffding_halfwidth: delta must lie in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * trials));
}

PredicateFamily spec_family(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GenKind::RandomGraph:
        case GenKind::BipartiteNoisy:
        case GenKind::MatchingChunks:
            return make_family(FamilyKind::Cut, 2);
        case GenKind::DirectedFromCut:
            return make_family(FamilyKind::Dicut, 2);
        case GenKind::BoundedDegree:
            return make_family(spec.family, spec.arity);
    }
    throw ConfigError("unhandled generator kind");
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

AlgoRef AlgoRef::from_json(const Json& j) {
    AlgoRef a;
    try {
        a.id = j.at("id").get<std::string>();
        a.params = j.value("params", Json::object());
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad algo reference: ") + e.what());
    }
    return a;
}

Json AlgoRef::to_json() const {
    Json j;
    j["id"] = id;
    j["params"] = params;
    return j;
}

Json TrialRecord::to_json() const {
    Json j;
    j["seed"] = seed;
    if (!side.empty()) j["side"] = side;
    if (value) j["value"] = *value;
    if (says_yes) j["says_yes"] = *says_yes;
    if (!label.empty()) j["label"] = label;
    if (maxval) j["maxval"] = *maxval;
    if (ratio) j["ratio"] = *ratio;
    if (violation) j["violation"] = true;
    return j;
}

Json ExperimentReport::to_json() const {
    Json j;
    j["id"] = id;
    j["version"] = kVersion;
    j["config"] = config;
    Json t = Json::array();
    for (const auto& rec : trials) t.push_back(rec.to_json());
    j["trials"] = t;
    j["aggregates"] = aggregates;
    j["wall_clock_ms"] = wall_clock_ms;
    return j;
}

namespace {

std::string config_id(const Json& config) {
    std::uint64_t h = fnv1a64(config.dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

// One seeded trial: generate, run, extract a record.
TrialRecord run_trial(const AlgoRef& algo, const GeneratorSpec& base_spec,
                      const PredicateFamily& family, Ordering ordering, unsigned passes,
                      std::optional<std::uint64_t> space_budget, std::uint64_t trial_seed) {
    GeneratorSpec spec = base_spec;
    spec.seed = mix2(trial_seed, 1);
    const GenResult gen = generate(spec);

    auto alg = make_algorithm(algo.id, algo.params, family);
    ExecutionPlan plan;
    plan.ordering = ordering;
    plan.order_seed = mix2(trial_seed, 3);
    plan.passes = passes == 0 ? alg->required_passes() : passes;
    plan.algo_seed = mix2(trial_seed, 2);
    plan.space_budget = space_budget;

    const RunResult run = run_stream(*alg, gen.instance, plan);
    TrialRecord rec;
    rec.seed = trial_seed;
    rec.value = run.output.value;
    rec.says_yes = run.output.says_yes;
    rec.label = run.output.label;
    return rec;
}

bool extract_yes_verdict(const TrialRecord& rec, const std::optional<double>& threshold,
                         const std::string& algo_id) {
    if (rec.says_yes) return *rec.says_yes;
    if (threshold && rec.value) return *rec.value >= *threshold;
    throw ConfigError("algorithm '" + algo_id +
                      "' has no verdict mode and no threshold was supplied");
}

Json advantage_aggregates(int yes_count, int no_count, int trials, double delta,
                          double success_prob) {
    const double adv =
        (static_cast<double>(yes_count) - static_cast<double>(no_count)) / trials;
    const double success =
        (static_cast<double>(yes_count) + (trials - static_cast<double>(no_count))) /
        (2.0 * trials);
    Json a;
    a["advantage"] = adv;
    a["ci_halfwidth"] = hoeffding_halfwidth(trials, delta);
    a["yes_rate"] = static_cast<double>(yes_count) / trials;
    a["no_rate"] = static_cast<double>(no_count) / trials;
    a["success_rate"] = success;
    a["meets_success_threshold"] = success >= success_prob;
    a["trials"] = trials;
    return a;
}

Json ratio_aggregates(const std::vector<TrialRecord>& trials) {
    std::vector<double> ratios;
    int violations = 0;
    double sum = 0.0;
    for (const auto& t : trials) {
        if (t.ratio) {
            ratios.push_back(*t.ratio);
            sum += *t.ratio;
        }
        if (t.violation) ++violations;
    }
    std::sort(ratios.begin(), ratios.end());
    Json a;
    a["min_ratio"] = ratios.front();
    a["mean_ratio"] = sum / static_cast<double>(ratios.size());
    a["p5_ratio"] = percentile(ratios, 5.0);
    a["violations"] = violations;
    a["trials"] = static_cast<int>(trials.size());
    return a;
}

} // namespace

bool audit_report(const ExperimentReport& report) {
    const std::string kind = report.config.value("kind", "");
    if (kind == "advantage") {
        int yes_count = 0, no_count = 0, trials = 0;
        for (const auto& t : report.trials) {
            const bool said_yes = t.says_yes
                                      ? *t.says_yes
                                      : (t.value && report.config.contains("threshold") &&
                                         *t.value >= report.config["threshold"].get<double>());
            if (t.side == "yes") {
                ++trials;
                if (said_yes) ++yes_count;
            } else if (t.side == "no" && said_yes) {
                ++no_count;
            }
        }
        Json expect = advantage_aggregates(yes_count, no_count, trials,
                                           report.config.value("delta", 0.05),
                                           report.config.value("success_prob",
                                                               kDefaultSuccessProbability));
        return expect == report.aggregates;
    }
    if (kind == "ratio") return ratio_aggregates(report.trials) == report.aggregates;
    return false;
}

// ---- advantage ---------------------------------------------------------------

AdvantageConfig AdvantageConfig::from_json(const Json& j) {
    AdvantageConfig c;
    try {
        c.algo = AlgoRef::from_json(j.at("algo"));
        c.yes = GeneratorSpec::from_json(j.at("yes"));
        c.no = GeneratorSpec::from_json(j.at("no"));
        c.ordering = ordering_from_name(j.value("ordering", "adversarial"));
        c.passes = j.value("passes", 0u);
        if (j.contains("space_budget")) c.space_budget = j.at("space_budget").get<std::uint64_t>();
        c.trials = j.value("trials", 400);
        c.master_seed = j.value("master_seed", std::uint64_t{0});
        c.delta = j.value("delta", 0.05);
        if (j.contains("threshold")) c.threshold = j.at("threshold").get<double>();
        c.success_prob = j.value("success_prob", kDefaultSuccessProbability);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad advantage config: ") + e.what());
    }
    return c;
}

Json AdvantageConfig::to_json() const {
    Json j;
    j["kind"] = "advantage";
    j["algo"] = algo.to_json();
    j["yes"] = yes.to_json();
    j["no"] = no.to_json();
    j["ordering"] = ordering_name(ordering);
    j["passes"] = passes;
    if (space_budget) j["space_budget"] = *space_budget;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["delta"] = delta;
    if (threshold) j["threshold"] = *threshold;
    j["success_prob"] = success_prob;
    return j;
}

AdvantageResult estimate_advantage(const AdvantageConfig& cfg) {
    if (cfg.trials < 100) throw ConfigError("estimate_advantage needs trials >= 100");
    Timer timer;
    const PredicateFamily family = spec_family(cfg.yes);

    AdvantageResult res;
    res.report.config = cfg.to_json();
    res.report.id = config_id(res.report.config);

    for (int i = 0; i < cfg.trials; ++i) {
        for (int side = 0; side < 2; ++side) {
            const bool is_yes = (side == 0);
            const std::uint64_t trial_seed =
                derive_seed(cfg.master_seed, 2 * static_cast<std::uint64_t>(i) + (is_yes ? 0 : 1));
            TrialRecord rec = run_trial(cfg.algo, is_yes ? cfg.yes : cfg.no, family, cfg.ordering,
                                        cfg.passes, cfg.space_budget, trial_seed);
            rec.side = is_yes ? "yes" : "no";
            const bool said_yes = extract_yes_verdict(rec, cfg.threshold, cfg.algo.id);
            if (is_yes && said_yes) ++res.yes_count;
            if (!is_yes && said_yes) ++res.no_count;
            res.report.trials.push_back(std::move(rec));
        }
    }

    res.report.aggregates = advantage_aggregates(res.yes_count, res.no_count, cfg.trials,
                                                 cfg.delta, cfg.success_prob);
    res.advantage = res.report.aggregates["advantage"].get<double>();
    res.halfwidth = res.report.aggregates["ci_halfwidth"].get<double>();
    res.report.wall_clock_ms = timer.ms();
    return res;
}

// ---- ratio --------------------------------------------------------------------

RatioConfig RatioConfig::from_json(const Json& j) {
    RatioConfig c;
    try {
        c.algo = AlgoRef::from_json(j.at("algo"));
        c.spec = GeneratorSpec::from_json(j.at("spec"));
        c.ordering = ordering_from_name(j.value("ordering", "adversarial"));
        c.passes = j.value("passes", 0u);
        if (j.contains("space_budget")) c.space_budget = j.at("space_budget").get<std::uint64_t>();
        c.trials = j.value("trials", 100);
        c.master_seed = j.value("master_seed", std::uint64_t{0});
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad ratio config: ") + e.what());
    }
    return c;
}

Json RatioConfig::to_json() const {
    Json j;
    j["kind"] = "ratio";
    j["algo"] = algo.to_json();
    j["spec"] = spec.to_json();
    j["ordering"] = ordering_name(ordering);
    j["passes"] = passes;
    if (space_budget) j["space_budget"] = *space_budget;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    return j;
}

RatioResult ratio_experiment(const RatioConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("ratio_experiment needs trials >= 1");
    Timer timer;
    const PredicateFamily family = spec_family(cfg.spec);

    RatioResult res;
    res.report.config = cfg.to_json();
    res.report.id = config_id(res.report.config);

    for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t trial_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
        GeneratorSpec spec = cfg.spec;
        spec.seed = mix2(trial_seed, 1);
        const GenResult gen = generate(spec);
        const double maxval = max_value(gen.instance).first.to_double();

        auto alg = make_algorithm(cfg.algo.id, cfg.algo.params, family);
        ExecutionPlan plan;
        plan.ordering = cfg.ordering;
        plan.order_seed = mix2(trial_seed, 3);
        plan.passes = cfg.passes == 0 ? alg->required_passes() : cfg.passes;
        plan.algo_seed = mix2(trial_seed, 2);
        plan.space_budget = cfg.space_budget;
        const RunResult run = run_stream(*alg, gen.instance, plan);
        if (!run.output.value)
            throw ConfigError("algorithm '" + cfg.algo.id + "' emits no value; ratios undefined");

        TrialRecord rec;
        rec.seed = trial_seed;
        rec.value = run.output.value;
        rec.maxval = maxval;
        rec.ratio = *run.output.value / maxval;
        rec.violation = *run.output.value > maxval + 1e-9;
        res.report.trials.push_back(std::move(rec));
    }

    res.report.aggregates = ratio_aggregates(res.report.trials);
    res.min_ratio = res.report.aggregates["min_ratio"].get<double>();
    res.mean_ratio = res.report.aggregates["mean_ratio"].get<double>();
    res.p5_ratio = res.report.aggregates["p5_ratio"].get<double>();
    res.violations = res.report.aggregates["violations"].get<int>();
    res.report.wall_clock_ms = timer.ms();
    return res;
}

// ---- sweep --------------------------------------------------------------------

SweepConfig SweepConfig::from_json(const Json& j) {
    SweepConfig c;
    try {
        c.algo = AlgoRef::from_json(j.at("algo"));
        c.yes = GeneratorSpec::from_json(j.at("yes"));
        c.no = GeneratorSpec::from_json(j.at("no"));
        c.ordering = ordering_from_name(j.value("ordering", "adversarial"));
        c.space_grid = j.at("space_bits").get<std::vector<std::uint64_t>>();
        c.pass_grid = j.value("passes", std::vector<unsigned>{1});
        c.trials = j.value("trials", 400);
        c.master_seed = j.value("master_seed", std::uint64_t{0});
        c.delta = j.value("delta", 0.05);
        if (j.contains("threshold")) c.threshold = j.at("threshold").get<double>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad sweep config: ") + e.what());
    }
    return c;
}

Json SweepConfig::to_json() const {
    Json j;
    j["kind"] = "sweep";
    j["algo"] = algo.to_json();
    j["yes"] = yes.to_json();
    j["no"] = no.to_json();
    j["ordering"] = ordering_name(ordering);
    j["space_bits"] = space_grid;
    j["passes"] = pass_grid;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["delta"] = delta;
    if (threshold) j["threshold"] = *threshold;
    return j;
}

std::string space_sweep_csv(const SweepConfig& cfg) {
    if (cfg.space_grid.empty() || cfg.pass_grid.empty())
        throw ConfigError("sweep grids must be nonempty");

    std::string csv =
        "algo,generator_yes,generator_no,n,space_bits,passes,trials,advantage,ci_halfwidth,"
        "master_seed,error\n";

    std::size_t cell = 0;
    for (std::uint64_t space : cfg.space_grid) {
        for (unsigned passes : cfg.pass_grid) {
            const std::uint64_t cell_seed = derive_seed(cfg.master_seed, cell++);
            std::string advantage, halfwidth, error;
            try {
                AdvantageConfig acfg;
                acfg.algo = cfg.algo;
                // Budgeted detectors take the grid budget as a parameter so
                // their declared space matches; everything else gets it as
                // a hard budget cap.
                if (cfg.algo.id == "component-growing") {
                    acfg.algo.params["space_bits"] = space;
                } else if (cfg.algo.id == "random-walk") {
                    acfg.algo.params["walkers"] = walkers_for_budget(space, cfg.yes.n);
                    if (passes < 2) throw ConfigError("random-walk sweep cells need passes >= 2");
                    acfg.algo.params["length"] = passes - 1;
                } else {
                    acfg.space_budget = space;
                }
                acfg.yes = cfg.yes;
                acfg.no = cfg.no;
                acfg.ordering = cfg.ordering;
                acfg.passes = passes;
                acfg.trials = cfg.trials;
                acfg.master_seed = cell_seed;
                acfg.delta = cfg.delta;
                acfg.threshold = cfg.threshold;
                const AdvantageResult r = estimate_advantage(acfg);
                advantage = fmt_double(r.advantage);
                halfwidth = fmt_double(r.halfwidth);
            } catch (const Error& e) {
                error = e.what();
                std::replace(error.begin(), error.end(), ',', ';');
                std::replace(error.begin(), error.end(), '\n', ' ');
            }
            csv += cfg.algo.id;
            csv += ',' + cfg.yes.compact_id();
            csv += ',' + cfg.no.compact_id();
            csv += ',' + std::to_string(cfg.yes.n);
            csv += ',' + std::to_string(space);
            csv += ',' + std::to_string(passes);
            csv += ',' + std::to_string(cfg.trials);
            csv += ',' + advantage;
            csv += ',' + halfwidth;
            csv += ',' + std::to_string(cfg.master_seed);
            csv += ',' + error;
            csv += '\n';
        }
    }
    return csv;
}

ExperimentReport run_report_config(const Json& config) {
    const std::string kind = config.value("kind", "");
    if (kind == "advantage") return estimate_advantage(AdvantageConfig::from_json(config)).report;
    if (kind == "ratio") return ratio_experiment(RatioConfig::from_json(config)).report;
    throw ConfigError("config kind must be advantage|ratio, got '" + kind + "'");
}

} // namespace csplab
