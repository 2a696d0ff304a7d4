#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csplab/instance.hpp"

namespace csplab {

enum class GenKind {
    RandomGraph,     // i.i.d. uniform distinct pairs (cut)
    BipartiteNoisy,  // planted balanced bipartition, eta fraction non-crossing (cut)
    MatchingChunks,  // T successive chunks, each a partial matching (cut)
    DirectedFromCut, // randomly orient an existing cut instance (dicut)
    BoundedDegree,   // uniform constraints with every variable in <= D of them
};

GenKind gen_kind_from_name(const std::string& name);
const char* gen_kind_name(GenKind kind);

// A parameterized distribution over instances; a pure function of its
// fields including the seed.
struct GeneratorSpec {
    GenKind kind = GenKind::RandomGraph;
    std::uint32_t n = 0;
    std::uint64_t m = 0;       // random-graph, bipartite-noisy, bounded-degree
    unsigned chunks = 0;       // matching-chunks T
    double alpha = 0.375;      // matching-chunks chunk fraction
    bool yes_mode = true;      // matching-chunks: planted (yes) vs uniform (no)
    double eta = 0.0;          // noise rate for planted kinds
    unsigned max_degree = 0;   // bounded-degree D
    FamilyKind family = FamilyKind::Cut; // bounded-degree only
    unsigned arity = 2;                  // bounded-degree only
    bool distinct_edges = false;         // random-graph: reject repeated edges
    std::uint64_t seed = 0;

    static GeneratorSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // Compact seedless identifier for CSV cells (no commas).
    std::string compact_id() const;
};

struct GenResult {
    Instance instance;
    std::optional<Assignment> planted;     // hidden bipartition where applicable
    std::vector<std::uint32_t> chunk_sizes; // matching-chunks stream structure
};

GenResult generate(const GeneratorSpec& spec);

// Individual generators.
Instance gen_random_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed,
                          bool distinct_edges = false);
GenResult gen_bipartite_noisy(std::uint32_t n, std::uint64_t m, double eta, std::uint64_t seed);
GenResult gen_matching_chunks(std::uint32_t n, unsigned chunks, double alpha, bool yes_mode,
                              double eta, std::uint64_t seed);
Instance direct_edges_randomly(const Instance& cut_instance, std::uint64_t seed);
Instance gen_bounded_degree(std::uint32_t n, unsigned max_degree, std::uint64_t m,
                            std::uint64_t seed, FamilyKind family, unsigned arity);

// Empirical maxval gap between two specs: brute-forces `trials` samples of
// each and reports gap = 5th percentile of Yes minus 95th percentile of No.
struct GapReport {
    std::vector<double> yes_values; // sorted ascending
    std::vector<double> no_values;  // sorted ascending
    double yes_mean = 0.0;
    double no_mean = 0.0;
    double gap = 0.0;

    nlohmann::json to_json() const;
};

GapReport gap_check(const GeneratorSpec& spec_yes, const GeneratorSpec& spec_no, int trials);

// Nearest-rank percentile of a sorted sample, q in [0,100].
double percentile(const std::vector<double>& sorted_values, double q);

} // namespace csplab
