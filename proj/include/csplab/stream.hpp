#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "csplab/bitstring.hpp"
#include "csplab/instance.hpp"
#include "csplab/rng.hpp"

namespace csplab {

// What an algorithm reports at the end of a run: an estimate in [0,1], a
// distinguisher verdict (says_yes = "this stream looks drawn from the Yes
// distribution"), or both. label is the printable verdict name.
struct StreamOutput {
    std::optional<double> value;
    std::optional<bool> says_yes;
    std::string label;
};

// A space-bounded streaming algorithm. The inter-constraint state is the
// serialized bit string; state_size_bits() must equal serialize_state()'s
// length and is checked against the budget after every update. Randomness
// comes from the init seed only (a seed-indexed family of deterministic
// algorithms), so the seed is not charged against the budget.
class StreamingAlgorithm {
public:
    virtual ~StreamingAlgorithm() = default;

    virtual std::string id() const = 0;

    // Declared space budget s(n) in bits.
    virtual std::uint64_t declared_state_bits(std::uint32_t n) const = 0;

    virtual void init(std::uint32_t n, std::uint64_t seed) = 0;
    virtual void update(const Constraint& c) = 0;

    // Called by the runner between passes. pass is the 0-based index of the
    // pass that just ended.
    virtual void end_pass(unsigned pass) { (void)pass; }

    virtual std::uint64_t state_size_bits() const = 0;
    virtual BitString serialize_state() const = 0;

    // Rebuild the run from a serialized state; the bit string plus the seed
    // must be the entire memory of the algorithm.
    virtual void restore_state(const BitString& state, std::uint32_t n, std::uint64_t seed) = 0;

    virtual StreamOutput output() const = 0;

    virtual unsigned required_passes() const { return 1; }
};

// A sketching algorithm: per-constraint compression plus an associative,
// order-insensitive composition over bit-string summaries.
class SketchingAlgorithm {
public:
    virtual ~SketchingAlgorithm() = default;

    virtual std::string id() const = 0;
    virtual std::uint64_t declared_state_bits(std::uint32_t n) const = 0;
    virtual BitString empty_sketch(std::uint32_t n) const = 0;
    virtual BitString compress(const Constraint& c) const = 0;
    virtual BitString compose(const BitString& a, const BitString& b) const = 0;
    virtual StreamOutput output(const BitString& state) const = 0;
};

// The streaming algorithm induced by a sketch: update(S, C) = compose(S, compress(C)).
class SketchStreamAdapter final : public StreamingAlgorithm {
public:
    explicit SketchStreamAdapter(std::shared_ptr<const SketchingAlgorithm> sketch)
        : sketch_(std::move(sketch)) {}

    std::string id() const override { return sketch_->id(); }
    std::uint64_t declared_state_bits(std::uint32_t n) const override {
        return sketch_->declared_state_bits(n);
    }
    void init(std::uint32_t n, std::uint64_t) override {
        n_ = n;
        state_ = sketch_->empty_sketch(n);
    }
    void update(const Constraint& c) override {
        state_ = sketch_->compose(state_, sketch_->compress(c));
    }
    std::uint64_t state_size_bits() const override { return state_.size_bits(); }
    BitString serialize_state() const override { return state_; }
    void restore_state(const BitString& state, std::uint32_t n, std::uint64_t) override {
        n_ = n;
        state_ = state;
    }
    StreamOutput output() const override { return sketch_->output(state_); }

    const SketchingAlgorithm& sketch() const { return *sketch_; }

private:
    std::shared_ptr<const SketchingAlgorithm> sketch_;
    BitString state_;
    std::uint32_t n_ = 0;
};

enum class Ordering { Adversarial, Random };

Ordering ordering_from_name(const std::string& name);
const char* ordering_name(Ordering o);

// How one run is executed. Random ordering draws a single permutation from
// order_seed and reuses it identically in every pass.
struct ExecutionPlan {
    Ordering ordering = Ordering::Adversarial;
    std::uint64_t order_seed = 0;
    unsigned passes = 1;
    std::uint64_t algo_seed = 0;
    std::optional<std::uint64_t> space_budget; // overrides the declared budget
};

// Constraint order for one pass, as indices into inst.constraints.
std::vector<std::uint32_t> order_stream(const Instance& inst, Ordering ordering,
                                        std::uint64_t seed);

struct RunResult {
    StreamOutput output;
    BitString final_state;
    std::uint64_t peak_state_bits = 0;
};

// Feed the instance through the algorithm for plan.passes passes, asserting
// the serialized state fits the budget after init and after every update.
// A violation raises BudgetError naming the violating step.
RunResult run_stream(StreamingAlgorithm& alg, const Instance& inst, const ExecutionPlan& plan);

using ConstraintSampler = std::function<Constraint(Rng&)>;

struct AssociativityCounterexample {
    Constraint c1, c2, c3;
};

// Sample constraint triples and check
//   compose(compress(C1), compose(compress(C2), compress(C3)))
//     == compose(compose(compress(C1), compress(C2)), compress(C3))
// as bit strings. Returns the first violating triple, if any.
std::optional<AssociativityCounterexample> check_sketch_associativity(
    const SketchingAlgorithm& alg, const ConstraintSampler& sampler, int trials,
    std::uint64_t seed);

} // namespace csplab
