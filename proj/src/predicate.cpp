#include "csplab/predicate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace csplab {

const char* family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Cut: return "cut";
        case FamilyKind::Dicut: return "dicut";
        case FamilyKind::Kand: return "kand";
        case FamilyKind::Monarchy: return "monarchy";
    }
    return "?";
}

FamilyKind family_from_name(const std::string& name) {
    if (name == "cut") return FamilyKind::Cut;
    if (name == "dicut") return FamilyKind::Dicut;
    if (name == "kand") return FamilyKind::Kand;
    if (name == "monarchy") return FamilyKind::Monarchy;
    throw ConfigError("unknown predicate family '" + name + "'");
}

PredicateFamily make_family(FamilyKind kind, unsigned arity) {
    switch (kind) {
        case FamilyKind::Cut:
        case FamilyKind::Dicut:
            if (arity != 2) throw DomainError(std::string(family_name(kind)) + " requires arity 2");
            break;
        case FamilyKind::Kand:
            if (arity < 2) throw DomainError("kand requires arity >= 2");
            break;
        case FamilyKind::Monarchy:
            if (arity < 3) throw DomainError("monarchy requires arity >= 3");
            break;
    }
    if (arity > kMaxArity) throw CapacityError("arity exceeds supported maximum 16");

    PredicateFamily f;
    f.kind = kind;
    f.arity = arity;
    f.negation_closed = (kind == FamilyKind::Kand || kind == FamilyKind::Monarchy);
    f.base_table.resize(std::size_t{1} << arity);
    const std::uint32_t all = (1u << arity) - 1u;
    for (std::uint32_t x = 0; x <= all; ++x) {
        bool v = false;
        switch (kind) {
            case FamilyKind::Cut:
                v = ((x & 1u) ^ ((x >> 1) & 1u)) != 0;
                break;
            case FamilyKind::Dicut:
                v = (x & 1u) != 0 && ((x >> 1) & 1u) == 0;
                break;
            case FamilyKind::Kand:
                v = (x == all);
                break;
            case FamilyKind::Monarchy: {
                const std::uint32_t subjects = x >> 1;
                const std::uint32_t all_subjects = all >> 1;
                v = (subjects == all_subjects) || (((x & 1u) != 0) && subjects != 0);
                break;
            }
        }
        f.base_table[x] = v ? 1 : 0;
    }
    return f;
}

bool eval_predicate(const PredicateFamily& family, std::uint32_t mask,
                    std::span<const std::uint8_t> inputs) {
    if (inputs.size() != family.arity)
        throw ShapeError("eval_predicate: expected " + std::to_string(family.arity) +
                         " inputs, got " + std::to_string(inputs.size()));
    if (mask >> family.arity)
        throw ShapeError("eval_predicate: mask wider than arity");
    std::uint32_t idx = 0;
    for (unsigned i = 0; i < family.arity; ++i)
        if (inputs[i]) idx |= (1u << i);
    return family.table(idx ^ mask);
}

double predicate_expectation(const PredicateFamily& family, std::uint32_t mask, double p) {
    const unsigned k = family.arity;
    const double q = 1.0 - p;
    double e = 0.0;
    for (std::uint32_t y = 0; y < (1u << k); ++y) {
        if (!family.table(y)) continue;
        // Pr[x = y ^ mask] with x_i ~ Bern(p)
        const std::uint32_t x = y ^ mask;
        const unsigned ones = static_cast<unsigned>(std::popcount(x));
        e += std::pow(p, ones) * std::pow(q, k - ones);
    }
    return e;
}

namespace {

// counts[b][d] = number of accepted inputs y with popcount(y ^ b) == d,
// so E_p over mask b is sum_d counts[b][d] p^d (1-p)^(k-d).
struct ExpectationTables {
    unsigned k;
    std::vector<std::vector<std::uint32_t>> counts;

    explicit ExpectationTables(const PredicateFamily& family) : k(family.arity) {
        const std::size_t nmasks = family.negation_closed ? (std::size_t{1} << k) : 1;
        counts.assign(nmasks, std::vector<std::uint32_t>(k + 1, 0));
        for (std::uint32_t y = 0; y < (1u << k); ++y) {
            if (!family.table(y)) continue;
            for (std::size_t b = 0; b < nmasks; ++b)
                counts[b][std::popcount(y ^ static_cast<std::uint32_t>(b))] += 1;
        }
    }

    double worst_expectation(double p) const {
        std::vector<double> pw(k + 1), qw(k + 1);
        pw[0] = qw[0] = 1.0;
        for (unsigned d = 1; d <= k; ++d) {
            pw[d] = pw[d - 1] * p;
            qw[d] = qw[d - 1] * (1.0 - p);
        }
        double worst = 2.0;
        for (const auto& row : counts) {
            double e = 0.0;
            for (unsigned d = 0; d <= k; ++d)
                if (row[d]) e += row[d] * pw[d] * qw[k - d];
            worst = std::min(worst, e);
        }
        return worst;
    }
};

} // namespace

TrivialRatio trivial_ratio(const PredicateFamily& family) {
    if (family.negation_closed && family.arity > 10)
        throw CapacityError("trivial_ratio: arity above 10 not supported for negation-closed families");
    const ExpectationTables tables(family);

    const int grid = 10000;
    double best_p = 0.0;
    double best_v = -1.0;
    auto consider = [&](double p) {
        const double v = tables.worst_expectation(p);
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    };
    for (int i = 0; i <= grid; ++i) consider(static_cast<double>(i) / grid);

    // Local ternary refinement inside the bracketing grid cells.
    double lo = std::max(0.0, best_p - 1.0 / grid);
    double hi = std::min(1.0, best_p + 1.0 / grid);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        consider(m1);
        consider(m2);
        if (tables.worst_expectation(m1) < tables.worst_expectation(m2))
            lo = m1;
        else
            hi = m2;
    }
    return TrivialRatio{best_v, best_p};
}

} // namespace csplab
