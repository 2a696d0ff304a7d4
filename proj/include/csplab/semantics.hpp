#pragma once

#include <utility>
#include <vector>

#include "csplab/instance.hpp"
#include "csplab/rational.hpp"

namespace csplab {

// Brute-force size limit; CSPLAB_BRUTE_CAP overrides the default of 24.
unsigned brute_force_cap();

// Fraction of constraints satisfied by x, as an exact rational.
Fraction value(const Instance& inst, const Assignment& x);

// Exact maximum value and one argmax, by exhaustive enumeration of the 2^n
// assignments. Ties break to the lexicographically smallest assignment.
// Throws CapacityError when n exceeds the cap.
std::pair<Fraction, Assignment> max_value(const Instance& inst);
std::pair<Fraction, Assignment> max_value(const Instance& inst, unsigned cap);

// Expected value when x_i ~ Bernoulli(probs[i]) independently; each
// constraint's satisfaction probability is an exact sum over its 2^k local
// inputs.
double expected_value_product(const Instance& inst, const std::vector<double>& probs);

} // namespace csplab
