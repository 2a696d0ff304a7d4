#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csplab/errors.hpp"

namespace csplab {

enum class FamilyKind { Cut, Dicut, Kand, Monarchy };

const char* family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

// A predicate family: one base predicate of arity k, truth-table backed.
// Negation-closed families apply the base predicate after per-position
// input flips, so their effective predicate set is {base(x ^ b)} over all
// masks b; cut and dicut use the zero mask only.
struct PredicateFamily {
    FamilyKind kind;
    unsigned arity;
    bool negation_closed;
    std::vector<std::uint8_t> base_table; // 2^arity entries, index bit i-1 = x_i

    bool table(std::uint32_t idx) const { return base_table[idx] != 0; }
};

// Largest supported arity; truth tables and masks are dense in 2^k.
inline constexpr unsigned kMaxArity = 16;

PredicateFamily make_family(FamilyKind kind, unsigned arity);

// Evaluate base(inputs ^ mask). inputs[i] is the value of the i+1st slot;
// mask bit i flips it. Throws ShapeError on an arity mismatch.
bool eval_predicate(const PredicateFamily& family, std::uint32_t mask,
                    std::span<const std::uint8_t> inputs);

// Expected value of the masked predicate when every input is an independent
// Bernoulli(p). Exact sum over the 2^k local inputs.
double predicate_expectation(const PredicateFamily& family, std::uint32_t mask, double p);

struct TrivialRatio {
    double value; // best instance-independent guarantee
    double p;     // maximizing Bernoulli parameter
};

// max over p in [0,1] of min over the family's effective predicates of
// E[pi(x)] under x ~ Bern(p)^k. Grid search on 10^4+1 points followed by
// local ternary refinement; value accurate to 1e-9 for the four families.
TrivialRatio trivial_ratio(const PredicateFamily& family);

} // namespace csplab
