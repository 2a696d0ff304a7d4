#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csplab/algorithms.hpp"
#include "csplab/generators.hpp"
#include "csplab/stream.hpp"

namespace csplab {

inline constexpr const char* kVersion = "csplab 0.1.0";

// Distinguishing-success convention: a distinguisher is considered to work
// when it is correct with at least this probability. Configurable per
// experiment; only reported, never used to stop runs early.
inline constexpr double kDefaultSuccessProbability = 2.0 / 3.0;

// Distribution-free (Hoeffding) half-width sqrt(ln(2/delta) / (2 trials)).
double hoeffding_halfwidth(int trials, double delta);

// The predicate family an instance drawn from this spec will carry.
PredicateFamily spec_family(const GeneratorSpec& spec);

struct AlgoRef {
    std::string id;
    Json params = Json::object();

    static AlgoRef from_json(const Json& j);
    Json to_json() const;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    std::string side;    // "yes" / "no" for advantage runs, "" otherwise
    std::optional<double> value;
    std::optional<bool> says_yes;
    std::string label;
    std::optional<double> maxval;
    std::optional<double> ratio;
    bool violation = false; // value exceeded brute-force maxval

    Json to_json() const;
};

struct ExperimentReport {
    std::string id; // hash of the echoed config
    Json config;
    std::vector<TrialRecord> trials;
    Json aggregates;
    double wall_clock_ms = 0.0;

    Json to_json() const;
};

// Recompute the aggregates from the per-trial records and compare.
bool audit_report(const ExperimentReport& report);

struct AdvantageConfig {
    AlgoRef algo;
    GeneratorSpec yes;
    GeneratorSpec no;
    Ordering ordering = Ordering::Adversarial;
    unsigned passes = 0; // 0 = the algorithm's required pass count
    std::optional<std::uint64_t> space_budget;
    int trials = 400;
    std::uint64_t master_seed = 0;
    double delta = 0.05;
    std::optional<double> threshold; // converts value outputs to verdicts
    double success_prob = kDefaultSuccessProbability;

    static AdvantageConfig from_json(const Json& j);
    Json to_json() const;
};

struct AdvantageResult {
    double advantage = 0.0;
    double halfwidth = 0.0;
    int yes_count = 0;
    int no_count = 0;
    ExperimentReport report;
};

// advantage = P(yes-verdict | yes spec) - P(yes-verdict | no spec), each
// estimated over `trials` seeded trials. Trial i draws seeds
// derive_seed(master, 2i) and derive_seed(master, 2i+1) for the two sides.
AdvantageResult estimate_advantage(const AdvantageConfig& cfg);

struct RatioConfig {
    AlgoRef algo;
    GeneratorSpec spec;
    Ordering ordering = Ordering::Adversarial;
    unsigned passes = 0;
    std::optional<std::uint64_t> space_budget;
    int trials = 100;
    std::uint64_t master_seed = 0;

    static RatioConfig from_json(const Json& j);
    Json to_json() const;
};

struct RatioResult {
    double min_ratio = 0.0;
    double mean_ratio = 0.0;
    double p5_ratio = 0.0;
    int violations = 0;
    ExperimentReport report;
};

// Per-trial ratio = output / brute-force maxval; outputs above maxval are
// flagged as violations (expected only for additive-error algorithms).
RatioResult ratio_experiment(const RatioConfig& cfg);

struct SweepConfig {
    AlgoRef algo;
    GeneratorSpec yes;
    GeneratorSpec no;
    Ordering ordering = Ordering::Adversarial;
    std::vector<std::uint64_t> space_grid;
    std::vector<unsigned> pass_grid;
    int trials = 400;
    std::uint64_t master_seed = 0;
    double delta = 0.05;
    std::optional<double> threshold;

    static SweepConfig from_json(const Json& j);
    Json to_json() const;
};

// One advantage estimate per (space, passes) cell. Cell failures become
// rows with the error column set; the sweep continues. The CSV is
// byte-reproducible from the same config.
std::string space_sweep_csv(const SweepConfig& cfg);

// Dispatch on config["kind"] in {advantage, ratio}; returns the report.
ExperimentReport run_report_config(const Json& config);

// Shortest stable decimal rendering used in CSV cells.
std::string fmt_double(double v);

} // namespace csplab
