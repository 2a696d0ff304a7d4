#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csplab/predicate.hpp"

namespace csplab {

// One constraint: an ordered tuple of distinct 1-based variable indices plus
// a negation mask (bit i flips the i+1st slot). Cut/dicut use mask 0.
struct Constraint {
    std::vector<std::uint32_t> vars;
    std::uint32_t mask = 0;

    unsigned arity() const { return static_cast<unsigned>(vars.size()); }

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.vars == b.vars && a.mask == b.mask;
    }
};

struct Assignment {
    std::vector<std::uint8_t> bits; // bits[i] is x_{i+1}

    friend bool operator==(const Assignment& a, const Assignment& b) { return a.bits == b.bits; }
};

// An instance doubles as the stream: the constraint list order is the
// adversarial arrival order.
struct Instance {
    std::uint32_t n = 0;
    PredicateFamily family;
    std::vector<Constraint> constraints;

    std::size_t m() const { return constraints.size(); }

    // Full invariant check: index ranges, distinctness, mask widths,
    // zero masks for families that are not negation-closed.
    void validate() const;
};

void validate_constraint(const Constraint& c, const PredicateFamily& family, std::uint32_t n);

// Line-based text format, canonical bytes:
//   MAXCSP 1
//   family <cut|dicut|kand|monarchy> k <arity>
//   n <n> m <m>
//   c <mask as k binary chars> <j_1> ... <j_k>      (m lines, stream order)
std::string write_instance(const Instance& inst);
Instance parse_instance(const std::string& text);
Instance read_instance_file(const std::string& path);
void write_instance_file(const Instance& inst, const std::string& path);

std::uint64_t fnv1a64(const std::string& data);

// FNV-1a digest of the canonical text form, as fixed-width hex.
std::string instance_digest(const Instance& inst);

} // namespace csplab
