#pragma once

// Test-side oracles, written as straight re-implementations from the
// predicate formulas and plain exhaustive enumeration. They intentionally
// share no code with the library paths they check.

#include <cstdint>
#include <vector>

#include "csplab/instance.hpp"

namespace oracle {

// Formula-based predicate evaluation (no truth tables).
inline bool predicate(csplab::FamilyKind kind, unsigned k, std::uint32_t mask,
                      const std::vector<std::uint8_t>& inputs) {
    std::vector<std::uint8_t> x(inputs);
    for (unsigned i = 0; i < k; ++i)
        if ((mask >> i) & 1u) x[i] ^= 1u;
    switch (kind) {
        case csplab::FamilyKind::Cut:
            return x[0] != x[1];
        case csplab::FamilyKind::Dicut:
            return x[0] == 1 && x[1] == 0;
        case csplab::FamilyKind::Kand: {
            for (unsigned i = 0; i < k; ++i)
                if (!x[i]) return false;
            return true;
        }
        case csplab::FamilyKind::Monarchy: {
            bool all_subjects = true, any_subject = false;
            for (unsigned i = 1; i < k; ++i) {
                all_subjects = all_subjects && x[i];
                any_subject = any_subject || x[i];
            }
            return all_subjects || (x[0] && any_subject);
        }
    }
    return false;
}

inline bool satisfies(const csplab::Instance& inst, const csplab::Constraint& c,
                      const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint8_t> local;
    for (auto v : c.vars) local.push_back(bits[v - 1]);
    return predicate(inst.family.kind, inst.family.arity, c.mask, local);
}

// Exhaustive maxval by direct enumeration, counting with the formula
// evaluator above.
inline double brute_maxval(const csplab::Instance& inst) {
    const unsigned n = inst.n;
    std::size_t best = 0;
    for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
        std::vector<std::uint8_t> bits(n);
        for (unsigned i = 0; i < n; ++i) bits[i] = (a >> i) & 1u;
        std::size_t sat = 0;
        for (const auto& c : inst.constraints)
            if (satisfies(inst, c, bits)) ++sat;
        best = std::max(best, sat);
    }
    return static_cast<double>(best) / static_cast<double>(inst.m());
}

// Exact satisfaction probability of one constraint at p = 1/2, by
// enumerating its 2^k local inputs.
inline double constraint_prob_half(const csplab::Instance& inst, const csplab::Constraint& c) {
    const unsigned k = inst.family.arity;
    std::size_t accept = 0;
    for (std::uint32_t y = 0; y < (1u << k); ++y) {
        std::vector<std::uint8_t> local(k);
        for (unsigned i = 0; i < k; ++i) local[i] = (y >> i) & 1u;
        if (predicate(inst.family.kind, k, c.mask, local)) ++accept;
    }
    return static_cast<double>(accept) / static_cast<double>(1u << k);
}

// Convenience builders.
inline csplab::Constraint edge(std::uint32_t a, std::uint32_t b, std::uint32_t mask = 0) {
    csplab::Constraint c;
    c.vars = {a, b};
    c.mask = mask;
    return c;
}

inline csplab::Instance cut_instance(std::uint32_t n,
                                     std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    csplab::Instance inst;
    inst.n = n;
    inst.family = csplab::make_family(csplab::FamilyKind::Cut, 2);
    for (auto [a, b] : edges) inst.constraints.push_back(edge(a, b));
    return inst;
}

inline csplab::Instance dicut_instance(std::uint32_t n,
                                       std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
    csplab::Instance inst;
    inst.n = n;
    inst.family = csplab::make_family(csplab::FamilyKind::Dicut, 2);
    for (auto [a, b] : edges) inst.constraints.push_back(edge(a, b));
    return inst;
}

inline csplab::Instance triangle_cut() { return cut_instance(3, {{1, 2}, {2, 3}, {1, 3}}); }

inline csplab::Instance dicut_3cycle() { return dicut_instance(3, {{1, 2}, {2, 3}, {3, 1}}); }

} // namespace oracle
