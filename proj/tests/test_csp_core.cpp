#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csplab/errors.hpp"
#include "csplab/instance.hpp"
#include "csplab/rng.hpp"
#include "csplab/semantics.hpp"
#include "oracle.hpp"

using namespace csplab;

namespace {

Instance random_instance(FamilyKind kind, unsigned k, std::uint32_t n, std::size_t m, Rng& rng) {
    Instance inst;
    inst.n = n;
    inst.family = make_family(kind, k);
    while (inst.constraints.size() < m) {
        Constraint c;
        while (c.vars.size() < k) {
            const auto v = static_cast<std::uint32_t>(rng.below(n)) + 1;
            if (std::find(c.vars.begin(), c.vars.end(), v) == c.vars.end()) c.vars.push_back(v);
        }
        c.mask = inst.family.negation_closed ? static_cast<std::uint32_t>(rng.below(1u << k)) : 0;
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

Assignment random_assignment(std::uint32_t n, Rng& rng) {
    Assignment x;
    x.bits.resize(n);
    for (auto& b : x.bits) b = static_cast<std::uint8_t>(rng.below(2));
    return x;
}

} // namespace

TEST_CASE("truth tables match the formula re-implementation for k <= 6") {
    struct Case {
        FamilyKind kind;
        unsigned kmin, kmax;
    };
    for (const Case& fc : {Case{FamilyKind::Cut, 2, 2}, Case{FamilyKind::Dicut, 2, 2},
                           Case{FamilyKind::Kand, 2, 6}, Case{FamilyKind::Monarchy, 3, 6}}) {
        for (unsigned k = fc.kmin; k <= fc.kmax; ++k) {
            const PredicateFamily fam = make_family(fc.kind, k);
            const std::uint32_t masks = fam.negation_closed ? (1u << k) : 1u;
            for (std::uint32_t mask = 0; mask < masks; ++mask) {
                for (std::uint32_t y = 0; y < (1u << k); ++y) {
                    std::vector<std::uint8_t> inputs(k);
                    for (unsigned i = 0; i < k; ++i) inputs[i] = (y >> i) & 1u;
                    CHECK_EQ(eval_predicate(fam, mask, inputs),
                             oracle::predicate(fc.kind, k, mask, inputs));
                }
            }
        }
    }
}

TEST_CASE("predicate evaluation on the named examples") {
    const auto cut = make_family(FamilyKind::Cut, 2);
    const auto dicut = make_family(FamilyKind::Dicut, 2);
    const auto kand3 = make_family(FamilyKind::Kand, 3);
    const auto mon5 = make_family(FamilyKind::Monarchy, 5);

    CHECK(eval_predicate(cut, 0b00, std::vector<std::uint8_t>{0, 1}));
    CHECK_FALSE(eval_predicate(dicut, 0b00, std::vector<std::uint8_t>{1, 1}));
    // mask 011 flips slots 2 and 3: (1,1,1) -> (1,0,0)
    CHECK_FALSE(eval_predicate(kand3, 0b110, std::vector<std::uint8_t>{1, 1, 1}));
    CHECK(eval_predicate(mon5, 0, std::vector<std::uint8_t>{1, 0, 1, 0, 0}));

    CHECK_THROWS_AS(eval_predicate(cut, 0, std::vector<std::uint8_t>{0, 1, 1}), ShapeError);
    CHECK_THROWS_AS(eval_predicate(cut, 0b100, std::vector<std::uint8_t>{0, 1}), ShapeError);
}

TEST_CASE("family construction rules") {
    CHECK_THROWS_AS(make_family(FamilyKind::Cut, 3), DomainError);
    CHECK_THROWS_AS(make_family(FamilyKind::Monarchy, 2), DomainError);
    CHECK_THROWS_AS(make_family(FamilyKind::Kand, 1), DomainError);
    CHECK_EQ(make_family(FamilyKind::Kand, 4).base_table.size(), 16);
    CHECK(make_family(FamilyKind::Monarchy, 3).negation_closed);
    CHECK_FALSE(make_family(FamilyKind::Dicut, 2).negation_closed);
}

TEST_CASE("value: triangle and small examples") {
    const Instance tri = oracle::triangle_cut();
    Assignment x;
    x.bits = {1, 0, 0};
    CHECK_EQ(value(tri, x), Fraction(2, 3));

    // assignment satisfying every constraint
    const Instance path = oracle::cut_instance(2, {{1, 2}});
    Assignment both;
    both.bits = {0, 1};
    CHECK_EQ(value(path, both), Fraction(1, 1));

    const Instance pair = oracle::dicut_instance(2, {{1, 2}, {2, 1}});
    Assignment xp;
    xp.bits = {1, 0};
    CHECK_EQ(value(pair, xp), Fraction(1, 2));
}

TEST_CASE("value: scaling-free under constraint duplication") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        Instance inst = random_instance(FamilyKind::Cut, 2, 6, 9, rng);
        Instance doubled = inst;
        doubled.constraints.insert(doubled.constraints.end(), inst.constraints.begin(),
                                   inst.constraints.end());
        const Assignment x = random_assignment(6, rng);
        CHECK_EQ(value(inst, x), value(doubled, x));
    }
}

TEST_CASE("value: errors and range invariants") {
    Instance empty;
    empty.n = 3;
    empty.family = make_family(FamilyKind::Cut, 2);
    Assignment x;
    x.bits = {0, 0, 0};
    CHECK_THROWS_AS(value(empty, x), UndefinedValueError);

    const Instance tri = oracle::triangle_cut();
    Assignment bad;
    bad.bits = {0, 0};
    CHECK_THROWS_AS(value(tri, bad), ShapeError);

    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const Instance inst = random_instance(FamilyKind::Kand, 3, 7, 11, rng);
        const Fraction v = value(inst, random_assignment(7, rng));
        CHECK_GE(v, Fraction(0, 1));
        CHECK_LE(v, Fraction(1, 1));
        CHECK_EQ(11 % v.den, 0); // reduced denominator divides m
    }
}

TEST_CASE("max_value: named examples and the lexicographic tie-break") {
    const Instance single = oracle::cut_instance(2, {{1, 2}});
    const auto [v, x] = max_value(single);
    CHECK_EQ(v, Fraction(1, 1));
    CHECK_EQ(x.bits, std::vector<std::uint8_t>{0, 1});

    CHECK_EQ(max_value(oracle::triangle_cut()).first, Fraction(2, 3));
    CHECK_EQ(max_value(oracle::dicut_3cycle()).first, Fraction(1, 3));
}

TEST_CASE("max_value: capacity cap") {
    Instance big = oracle::cut_instance(2, {{1, 2}});
    big.n = 25;
    CHECK_THROWS_AS(max_value(big), CapacityError);
    CHECK_NOTHROW(max_value(big, 25));
}

TEST_CASE("max_value agrees with the enumeration oracle on random instances") {
    Rng rng(23);
    struct Case {
        FamilyKind kind;
        unsigned k;
    };
    for (const Case& fc : {Case{FamilyKind::Cut, 2}, Case{FamilyKind::Dicut, 2},
                           Case{FamilyKind::Kand, 3}, Case{FamilyKind::Monarchy, 3}}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Instance inst = random_instance(fc.kind, fc.k, 8, 14, rng);
            CHECK_EQ(max_value(inst).first.to_double(),
                     doctest::Approx(oracle::brute_maxval(inst)).epsilon(1e-12));
        }
    }
}

TEST_CASE("max_value dominates the value of random assignments") {
    Rng rng(29);
    const Instance inst = random_instance(FamilyKind::Cut, 2, 10, 25, rng);
    const Fraction best = max_value(inst).first;
    for (int rep = 0; rep < 100; ++rep)
        CHECK_GE(best, value(inst, random_assignment(10, rng)));
}

TEST_CASE("expected_value_product: exact halves at p = 1/2") {
    Rng rng(31);
    for (int rep = 0; rep < 25; ++rep) {
        const Instance cut = random_instance(FamilyKind::Cut, 2, 9, 1 + rng.below(30), rng);
        CHECK_EQ(expected_value_product(cut, std::vector<double>(9, 0.5)), 0.5);
        const Instance dic = random_instance(FamilyKind::Dicut, 2, 9, 1 + rng.below(30), rng);
        CHECK_EQ(expected_value_product(dic, std::vector<double>(9, 0.5)), 0.25);
    }
}

TEST_CASE("expected_value_product: single kand constraint at probs 1") {
    Instance inst;
    inst.n = 3;
    inst.family = make_family(FamilyKind::Kand, 3);
    Constraint c;
    c.vars = {1, 2, 3};
    c.mask = 0;
    inst.constraints.push_back(c);
    CHECK_EQ(expected_value_product(inst, {1.0, 1.0, 1.0}), 1.0);
}

TEST_CASE("expected_value_product: cross-checked by direct enumeration at p = 1/2") {
    Rng rng(37);
    for (const auto kind : {FamilyKind::Kand, FamilyKind::Monarchy}) {
        const Instance inst = random_instance(kind, 3, 8, 12, rng);
        double expect = 0.0;
        for (const auto& c : inst.constraints) expect += oracle::constraint_prob_half(inst, c);
        expect /= static_cast<double>(inst.m());
        CHECK_EQ(expected_value_product(inst, std::vector<double>(8, 0.5)),
                 doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("expected_value_product: mask re-randomization invariance at p = 1/2") {
    Rng rng(41);
    const std::vector<double> half(8, 0.5);
    for (const auto kind : {FamilyKind::Kand, FamilyKind::Monarchy}) {
        Instance inst = random_instance(kind, 3, 8, 15, rng);
        const double base = expected_value_product(inst, half);
        for (int rep = 0; rep < 5; ++rep) {
            for (auto& c : inst.constraints)
                c.mask = static_cast<std::uint32_t>(rng.below(8));
            CHECK_EQ(expected_value_product(inst, half), base);
        }
    }
}

TEST_CASE("expected_value_product: bounded by maxval and validates inputs") {
    Rng rng(43);
    const Instance inst = random_instance(FamilyKind::Dicut, 2, 8, 20, rng);
    const double best = max_value(inst).first.to_double();
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> probs(8);
        for (auto& p : probs) p = rng.real01();
        CHECK_LE(expected_value_product(inst, probs), best + 1e-12);
    }
    CHECK_THROWS_AS(expected_value_product(inst, std::vector<double>(8, 1.5)), DomainError);
    CHECK_THROWS_AS(expected_value_product(inst, std::vector<double>(7, 0.5)), ShapeError);
}

TEST_CASE("trivial_ratio matches the known constants") {
    CHECK_EQ(trivial_ratio(make_family(FamilyKind::Cut, 2)).value, doctest::Approx(0.5).epsilon(1e-9));
    CHECK_EQ(trivial_ratio(make_family(FamilyKind::Dicut, 2)).value,
             doctest::Approx(0.25).epsilon(1e-9));
    for (unsigned k = 2; k <= 4; ++k)
        CHECK_EQ(trivial_ratio(make_family(FamilyKind::Kand, k)).value,
                 doctest::Approx(std::pow(0.5, k)).epsilon(1e-9));
    CHECK_EQ(trivial_ratio(make_family(FamilyKind::Monarchy, 5)).value,
             doctest::Approx(0.5).epsilon(1e-9));
    CHECK_EQ(trivial_ratio(make_family(FamilyKind::Cut, 2)).p, doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("instance text format: canonical fixture and byte round-trip") {
    const Instance tri = oracle::triangle_cut();
    const std::string text = write_instance(tri);
    CHECK_EQ(text, "MAXCSP 1\nfamily cut k 2\nn 3 m 3\nc 00 1 2\nc 00 2 3\nc 00 1 3\n");
    CHECK_EQ(write_instance(parse_instance(text)), text);

    Instance kand;
    kand.n = 5;
    kand.family = make_family(FamilyKind::Kand, 3);
    Constraint c;
    c.vars = {4, 1, 5};
    c.mask = 0b101;
    kand.constraints.push_back(c);
    const std::string ktext = write_instance(kand);
    CHECK_EQ(ktext, "MAXCSP 1\nfamily kand k 3\nn 5 m 1\nc 101 4 1 5\n");
    const Instance back = parse_instance(ktext);
    CHECK_EQ(back.constraints[0].mask, 0b101u);
    CHECK_EQ(back.constraints[0].vars, std::vector<std::uint32_t>{4, 1, 5});
}

TEST_CASE("instance text format: rejects malformed files") {
    CHECK_THROWS_AS(parse_instance("MAXCSP 2\n"), ParseError);
    const std::string head = "MAXCSP 1\nfamily cut k 2\nn 3 m 1\n";
    CHECK_THROWS_AS(parse_instance(head + "c 00 1 1\n"), ParseError);  // duplicate index
    CHECK_THROWS_AS(parse_instance(head + "c 00 1 4\n"), ParseError);  // out of range
    CHECK_THROWS_AS(parse_instance(head + "c 000 1 2\n"), ParseError); // wrong mask length
    CHECK_THROWS_AS(parse_instance(head + "c 01 1 2\n"), ParseError);  // cut must use zero mask
    CHECK_THROWS_AS(parse_instance(head), ParseError);                 // missing constraint line
}
