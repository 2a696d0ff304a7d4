#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "csplab/stream.hpp"

namespace csplab {

using Json = nlohmann::json;

// Per-vertex out/in degree counters for a directed graph, kept sorted by
// vertex id so the encoded form is canonical (order-insensitive).
struct BiasEntry {
    std::uint32_t vertex;
    std::uint32_t out;
    std::uint32_t in;
};

class BiasProfile {
public:
    void add_edge(std::uint32_t from, std::uint32_t to);
    void merge(const BiasProfile& other);

    const std::vector<BiasEntry>& entries() const { return entries_; }
    std::pair<std::uint32_t, std::uint32_t> degrees(std::uint32_t v) const;

    // (out - in) / (out + in); 0 for vertices with no incident edges.
    double bias(std::uint32_t v) const;

    // sum_v |out - in| / sum_v (out + in); 1 iff every touched vertex is
    // all-outgoing or all-incoming.
    double average_bias() const;

    std::uint64_t total_edges() const;

    void encode(BitString& out) const;
    static BiasProfile decode(BitReader& in);
    static std::uint64_t encoded_bits(std::size_t entry_count) {
        return 32 + 96 * static_cast<std::uint64_t>(entry_count);
    }

private:
    std::vector<BiasEntry> entries_;
    std::size_t find_slot(std::uint32_t v) const;
    BiasEntry& touch(std::uint32_t v);
};

// Offline bias primitives for directed graphs.
BiasProfile build_bias_profile(const Instance& inst);
double dicut_average_bias(const Instance& inst);

enum class TieRule { One, Zero, Coin };
TieRule tie_rule_from_name(const std::string& name);
const char* tie_rule_name(TieRule r);

// x_v = 1 iff out > in, 0 iff out < in, tie decided by the rule.
Assignment greedy_bias_assignment(const Instance& inst, TieRule tie, std::uint64_t seed);

// A map from vertex bias in [-1,1] to an assignment probability in [0,1].
struct RoundingFn {
    enum class Kind { Constant, Step, Piecewise };

    Kind kind = Kind::Step;
    double constant = 0.5;
    std::vector<std::pair<double, double>> points; // (bias, prob), sorted

    double operator()(double bias) const;

    static RoundingFn make_constant(double c);
    static RoundingFn make_step();
    static RoundingFn make_piecewise(std::vector<std::pair<double, double>> pts);
    static RoundingFn from_json(const Json& j);
    Json to_json() const;
};

// Expected value of the product distribution that assigns each vertex
// independently with probability rounding(bias(v)).
double dicut_oblivious_expected(const RoundingFn& rounding, const Instance& inst);

// ---- algorithm factories ----------------------------------------------

// 0-bit algorithm outputting trivial_ratio(family) - eps.
std::unique_ptr<StreamingAlgorithm> make_trivial(const PredicateFamily& family, double eps);

// Counter sketch: compress -> 1, compose -> saturating sum; state is the
// count in its minimal binary width.
std::shared_ptr<const SketchingAlgorithm> make_count_sketch();

// Per-vertex out/in counter sketch with coordinate-wise saturating sum;
// outputs the average bias.
std::shared_ptr<const SketchingAlgorithm> make_bias_count_sketch(const PredicateFamily& family);

// Uniform with-replacement constraint sample (one independent single-item
// reservoir per slot), solved exactly at output time. The sampling protocol
// is pinned: slot j replaces its held constraint at arrival t iff
// hash_real01(mix4(seed, kSparsifySampleSalt, j, t)) < 1/t.
inline constexpr std::uint64_t kSparsifySampleSalt = 0x5A3D;
std::unique_ptr<StreamingAlgorithm> make_sparsify(const PredicateFamily& family, double eps,
                                                  double sample_factor = 4.0);

// Two-pass bias-threshold assignment; reports the exact value it achieves.
std::unique_ptr<StreamingAlgorithm> make_greedy_bias(const PredicateFamily& family, TieRule tie);

// Two-pass oblivious rounding; reports the expected value it achieves.
std::unique_ptr<StreamingAlgorithm> make_oblivious_bias(const PredicateFamily& family,
                                                        RoundingFn rounding);

// Bipartiteness tracker: union-find with parity over at most
// floor(space_bits / slot) tracked vertices; on overflow evicts the
// smallest tracked component (tie: lowest root id).
std::unique_ptr<StreamingAlgorithm> make_component_growing(const PredicateFamily& family,
                                                           std::uint64_t space_bits);

// W lazy random walks from a common start vertex, one step per pass via a
// per-walker single-edge reservoir; L+1 passes; odd cycle certified by two
// walkers meeting with opposite parities.
std::unique_ptr<StreamingAlgorithm> make_random_walk(const PredicateFamily& family, unsigned walkers,
                                                     unsigned length);

// Largest walker count whose declared state fits the budget.
unsigned walkers_for_budget(std::uint64_t space_bits, std::uint32_t n);

// ---- registry -----------------------------------------------------------

struct AlgorithmInfo {
    std::string id;
    std::string params_doc; // accepted JSON parameters
    std::string space_doc;  // declared state_bits formula
    bool verdict_mode;      // emits a native yes/no verdict
    bool sketch;            // also available through make_sketch
};

const std::vector<AlgorithmInfo>& algorithm_registry();

// Construct a registered algorithm from its id and JSON parameters.
// Unknown ids and malformed parameters raise ConfigError; family
// restrictions raise FamilyError.
std::unique_ptr<StreamingAlgorithm> make_algorithm(const std::string& id, const Json& params,
                                                   const PredicateFamily& family);

std::shared_ptr<const SketchingAlgorithm> make_sketch(const std::string& id,
                                                      const PredicateFamily& family);

} // namespace csplab
