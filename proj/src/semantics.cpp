#include "csplab/semantics.hpp"

#include <bit>
#include <cstdlib>

#include "csplab/errors.hpp"

namespace csplab {

unsigned brute_force_cap() {
    if (const char* env = std::getenv("CSPLAB_BRUTE_CAP")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 30) return static_cast<unsigned>(v);
        throw ConfigError("CSPLAB_BRUTE_CAP must be an integer in [1,30]");
    }
    return 24;
}

namespace {

bool satisfied(const Instance& inst, const Constraint& c, const Assignment& x) {
    std::uint32_t idx = 0;
    for (unsigned i = 0; i < c.arity(); ++i)
        if (x.bits[c.vars[i] - 1]) idx |= (1u << i);
    return inst.family.table(idx ^ c.mask);
}

} // namespace

Fraction value(const Instance& inst, const Assignment& x) {
    if (inst.m() == 0) throw UndefinedValueError("value of an instance with no constraints is undefined");
    if (x.bits.size() != inst.n)
        throw ShapeError("assignment length " + std::to_string(x.bits.size()) +
                         " does not match n=" + std::to_string(inst.n));
    std::int64_t sat = 0;
    for (const auto& c : inst.constraints)
        if (satisfied(inst, c, x)) ++sat;
    return Fraction(sat, static_cast<std::int64_t>(inst.m()));
}

std::pair<Fraction, Assignment> max_value(const Instance& inst) {
    return max_value(inst, brute_force_cap());
}

// Gray-code walk over all 2^n assignments: one variable flips per step, so
// only constraints incident to the flipped variable are re-evaluated.
// Assignments are packed with x_1 as the most significant bit, making the
// lexicographic tie-break a plain integer comparison.
std::pair<Fraction, Assignment> max_value(const Instance& inst, unsigned cap) {
    if (inst.m() == 0)
        throw UndefinedValueError("max value of an instance with no constraints is undefined");
    if (inst.n > cap)
        throw CapacityError("n=" + std::to_string(inst.n) + " exceeds brute-force cap " +
                            std::to_string(cap));

    const unsigned n = inst.n;
    const std::size_t m = inst.m();
    const unsigned k = inst.family.arity;

    // Flat constraint layout for the hot loop.
    std::vector<std::uint32_t> cvars(m * k);
    std::vector<std::uint32_t> cmask(m);
    std::vector<std::vector<std::uint32_t>> incident(n);
    for (std::size_t ci = 0; ci < m; ++ci) {
        const auto& c = inst.constraints[ci];
        cmask[ci] = c.mask;
        for (unsigned i = 0; i < k; ++i) {
            cvars[ci * k + i] = c.vars[i];
            incident[c.vars[i] - 1].push_back(static_cast<std::uint32_t>(ci));
        }
    }

    const auto* table = inst.family.base_table.data();
    std::uint32_t packed = 0; // bit (n - j) holds x_j, so x_1 is the MSB
    auto eval = [&](std::size_t ci) -> std::uint8_t {
        std::uint32_t idx = 0;
        for (unsigned i = 0; i < k; ++i) {
            const std::uint32_t var = cvars[ci * k + i];
            idx |= ((packed >> (n - var)) & 1u) << i;
        }
        return table[idx ^ cmask[ci]];
    };

    std::vector<std::uint8_t> sat(m);
    std::int64_t count = 0;
    for (std::size_t ci = 0; ci < m; ++ci) {
        sat[ci] = eval(ci);
        count += sat[ci];
    }

    std::int64_t best = count;
    std::uint32_t best_packed = packed; // all-zero start
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        const unsigned bitpos = static_cast<unsigned>(std::countr_zero(t));
        const std::uint32_t var = n - bitpos; // 1-based flipped variable
        packed ^= (1u << bitpos);
        for (std::uint32_t ci : incident[var - 1]) {
            const std::uint8_t now = eval(ci);
            count += static_cast<std::int64_t>(now) - sat[ci];
            sat[ci] = now;
        }
        if (count > best || (count == best && packed < best_packed)) {
            best = count;
            best_packed = packed;
        }
    }

    Assignment argmax;
    argmax.bits.resize(n);
    for (unsigned j = 1; j <= n; ++j)
        argmax.bits[j - 1] = (best_packed >> (n - j)) & 1u;
    return {Fraction(best, static_cast<std::int64_t>(m)), std::move(argmax)};
}

double expected_value_product(const Instance& inst, const std::vector<double>& probs) {
    if (inst.m() == 0)
        throw UndefinedValueError("expected value of an instance with no constraints is undefined");
    if (probs.size() != inst.n)
        throw ShapeError("probability vector length does not match n");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probabilities must lie in [0,1]");

    const unsigned k = inst.family.arity;
    double total = 0.0;
    for (const auto& c : inst.constraints) {
        double pc = 0.0;
        for (std::uint32_t y = 0; y < (1u << k); ++y) {
            if (!inst.family.table(y ^ c.mask)) continue;
            double pr = 1.0;
            for (unsigned i = 0; i < k; ++i) {
                const double pi = probs[c.vars[i] - 1];
                pr *= ((y >> i) & 1u) ? pi : (1.0 - pi);
            }
            pc += pr;
        }
        total += pc;
    }
    return total / static_cast<double>(inst.m());
}

} // namespace csplab
