#include "csplab/stream.hpp"

#include <numeric>

#include "csplab/errors.hpp"

namespace csplab {

Ordering ordering_from_name(const std::string& name) {
    if (name == "adversarial") return Ordering::Adversarial;
    if (name == "random") return Ordering::Random;
    throw ConfigError("unknown ordering '" + name + "' (want adversarial|random)");
}

const char* ordering_name(Ordering o) {
    return o == Ordering::Adversarial ? "adversarial" : "random";
}

std::vector<std::uint32_t> order_stream(const Instance& inst, Ordering ordering,
                                        std::uint64_t seed) {
    if (inst.m() == 0) throw UndefinedValueError("cannot order an empty stream");
    std::vector<std::uint32_t> perm(inst.m());
    std::iota(perm.begin(), perm.end(), 0u);
    if (ordering == Ordering::Random) {
        Rng rng(seed);
        rng.shuffle(perm);
    }
    return perm;
}

RunResult run_stream(StreamingAlgorithm& alg, const Instance& inst, const ExecutionPlan& plan) {
    if (plan.passes < 1) throw ConfigError("plan needs at least one pass");
    inst.validate();

    const std::uint64_t budget =
        plan.space_budget ? *plan.space_budget : alg.declared_state_bits(inst.n);
    const auto perm = order_stream(inst, plan.ordering, plan.order_seed);

    alg.init(inst.n, plan.algo_seed);

    RunResult result;
    auto check = [&](unsigned pass, std::size_t step, const char* where) {
        const std::uint64_t bits = alg.state_size_bits();
        result.peak_state_bits = std::max(result.peak_state_bits, bits);
        if (bits > budget)
            throw BudgetError("budget exceeded: state is " + std::to_string(bits) +
                              " bits > budget " + std::to_string(budget) + " bits " + where +
                              " constraint " + std::to_string(step) + " of pass " +
                              std::to_string(pass + 1) + " (algo '" + alg.id() + "')");
    };
    check(0, 0, "before");

    for (unsigned pass = 0; pass < plan.passes; ++pass) {
        for (std::size_t i = 0; i < perm.size(); ++i) {
            alg.update(inst.constraints[perm[i]]);
            check(pass, i + 1, "after");
        }
        alg.end_pass(pass);
        check(pass, perm.size(), "at end of pass after");
    }

    result.output = alg.output();
    result.final_state = alg.serialize_state();
    return result;
}

std::optional<AssociativityCounterexample> check_sketch_associativity(
    const SketchingAlgorithm& alg, const ConstraintSampler& sampler, int trials,
    std::uint64_t seed) {
    if (trials < 1) throw DomainError("associativity check needs trials >= 1");
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const Constraint c1 = sampler(rng);
        const Constraint c2 = sampler(rng);
        const Constraint c3 = sampler(rng);
        const BitString s1 = alg.compress(c1);
        const BitString s2 = alg.compress(c2);
        const BitString s3 = alg.compress(c3);
        const BitString left = alg.compose(s1, alg.compose(s2, s3));
        const BitString right = alg.compose(alg.compose(s1, s2), s3);
        if (left != right) return AssociativityCounterexample{c1, c2, c3};
    }
    return std::nullopt;
}

} // namespace csplab
