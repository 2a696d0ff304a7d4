#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <map>

#include "csplab/algorithms.hpp"
#include "csplab/errors.hpp"
#include "csplab/generators.hpp"
#include "csplab/semantics.hpp"
#include "csplab/stream.hpp"
#include "oracle.hpp"

using namespace csplab;

namespace {

// Observes the constraint sequence the runner feeds; test instrumentation
// for the runner itself, not a model algorithm.
class RecorderAlgo final : public StreamingAlgorithm {
public:
    std::string id() const override { return "recorder"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return 1u << 20; }
    void init(std::uint32_t, std::uint64_t) override { seen.clear(); }
    void update(const Constraint& c) override { seen.push_back(c); }
    std::uint64_t state_size_bits() const override { return 0; }
    BitString serialize_state() const override { return BitString{}; }
    void restore_state(const BitString&, std::uint32_t, std::uint64_t) override {}
    StreamOutput output() const override { return StreamOutput{0.0, std::nullopt, ""}; }

    std::vector<Constraint> seen;
};

// Declares 4 bits but grows one bit per update.
class OversizedAlgo final : public StreamingAlgorithm {
public:
    std::string id() const override { return "oversized"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return 4; }
    void init(std::uint32_t, std::uint64_t) override { state_ = BitString{}; }
    void update(const Constraint&) override { state_.append_bit(true); }
    std::uint64_t state_size_bits() const override { return state_.size_bits(); }
    BitString serialize_state() const override { return state_; }
    void restore_state(const BitString& s, std::uint32_t, std::uint64_t) override { state_ = s; }
    StreamOutput output() const override { return StreamOutput{0.0, std::nullopt, ""}; }

private:
    BitString state_;
};

// compose keeps the left operand when states differ; breaks associativity.
class BrokenCountSketch final : public SketchingAlgorithm {
public:
    std::string id() const override { return "broken-count"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return 64; }
    BitString empty_sketch(std::uint32_t) const override { return BitString{}; }
    BitString compress(const Constraint&) const override {
        BitString one;
        one.append_bit(true);
        return one;
    }
    BitString compose(const BitString& a, const BitString& b) const override {
        if (a != b) return a;
        const std::uint64_t sum = a.read(0, static_cast<unsigned>(a.size_bits())) +
                                  b.read(0, static_cast<unsigned>(b.size_bits()));
        BitString out;
        if (sum) out.append(sum, static_cast<unsigned>(std::bit_width(sum)));
        return out;
    }
    StreamOutput output(const BitString&) const override {
        return StreamOutput{0.0, std::nullopt, ""};
    }
};

Constraint sample_dicut_edge(Rng& rng, std::uint32_t n) {
    const std::uint32_t a = static_cast<std::uint32_t>(rng.below(n)) + 1;
    std::uint32_t b = static_cast<std::uint32_t>(rng.below(n - 1)) + 1;
    if (b >= a) ++b;
    return oracle::edge(a, b);
}

const PredicateFamily kCut = make_family(FamilyKind::Cut, 2);
const PredicateFamily kDicut = make_family(FamilyKind::Dicut, 2);

} // namespace

TEST_CASE("order_stream: adversarial is the identity, random is seed-determined") {
    const Instance inst = oracle::triangle_cut();
    CHECK_EQ(order_stream(inst, Ordering::Adversarial, 99),
             std::vector<std::uint32_t>{0, 1, 2});
    const auto p1 = order_stream(inst, Ordering::Random, 7);
    const auto p2 = order_stream(inst, Ordering::Random, 7);
    CHECK_EQ(p1, p2);
}

TEST_CASE("order_stream: permutation frequencies pass a chi-square check") {
    const Instance inst = oracle::triangle_cut();
    std::map<std::vector<std::uint32_t>, int> counts;
    const int samples = 6000;
    for (int s = 0; s < samples; ++s) counts[order_stream(inst, Ordering::Random, 1000 + s)] += 1;
    CHECK_EQ(counts.size(), 6);
    const double expected = samples / 6.0;
    double chi2 = 0.0;
    for (const auto& [perm, count] : counts) {
        CHECK_GE(count, 850);
        CHECK_LE(count, 1150);
        chi2 += (count - expected) * (count - expected) / expected;
    }
    CHECK_LT(chi2, 20.515); // df = 5 at significance 0.001
}

TEST_CASE("run_stream: constraint counter over an m=7 stream") {
    const Instance inst =
        oracle::cut_instance(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}, {2, 4}, {1, 2}});
    auto alg = make_algorithm("count", Json::object(), kCut);
    const RunResult res = run_stream(*alg, inst, ExecutionPlan{});
    CHECK_EQ(res.output.value, 7.0);
    CHECK_EQ(res.final_state.size_bits(), 3); // ceil(log2(m+1)) bits
}

TEST_CASE("run_stream: the trivial algorithm has a zero budget and constant output") {
    auto alg = make_trivial(kCut, 0.01);
    CHECK_EQ(alg->declared_state_bits(1000), 0);
    const RunResult res = run_stream(*alg, oracle::triangle_cut(), ExecutionPlan{});
    CHECK_EQ(res.output.value, 0.5 - 0.01);
    CHECK_EQ(res.peak_state_bits, 0);
}

TEST_CASE("run_stream: deterministic given instance, plan and seeds") {
    const Instance inst = direct_edges_randomly(gen_random_graph(10, 25, 5), 6);
    ExecutionPlan plan;
    plan.ordering = Ordering::Random;
    plan.order_seed = 12;
    plan.algo_seed = 34;
    auto a1 = make_algorithm("bias-greedy", Json{{"tie", "coin"}}, kDicut);
    auto a2 = make_algorithm("bias-greedy", Json{{"tie", "coin"}}, kDicut);
    plan.passes = a1->required_passes();
    const RunResult r1 = run_stream(*a1, inst, plan);
    const RunResult r2 = run_stream(*a2, inst, plan);
    CHECK_EQ(r1.output.value, r2.output.value);
    CHECK(r1.final_state == r2.final_state);
}

TEST_CASE("run_stream: pass two replays the identical permutation") {
    const Instance inst = gen_random_graph(8, 12, 3);
    RecorderAlgo rec;
    ExecutionPlan plan;
    plan.ordering = Ordering::Random;
    plan.order_seed = 77;
    plan.passes = 2;
    run_stream(rec, inst, plan);
    REQUIRE_EQ(rec.seen.size(), 24);
    for (std::size_t i = 0; i < 12; ++i) CHECK_EQ(rec.seen[i], rec.seen[12 + i]);
}

TEST_CASE("run_stream: budget violations abort naming the step") {
    OversizedAlgo alg;
    const Instance inst = gen_random_graph(6, 10, 1);
    try {
        run_stream(alg, inst, ExecutionPlan{});
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("constraint 5") != std::string::npos);
        CHECK(msg.find("pass 1") != std::string::npos);
        CHECK(msg.find("oversized") != std::string::npos);
        CHECK(msg.find("5 bits > budget 4 bits") != std::string::npos);
    }
}

TEST_CASE("run_stream: plan space_budget overrides the declared budget") {
    const Instance inst = gen_random_graph(6, 10, 2);
    auto alg = make_algorithm("count", Json::object(), kCut);
    ExecutionPlan plan;
    plan.space_budget = 2; // the count needs 3 bits from the 4th constraint on
    CHECK_THROWS_AS(run_stream(*alg, inst, plan), BudgetError);
}

TEST_CASE("sketch associativity: counter and bias-counter pass, broken compose fails") {
    auto edge_sampler = [](Rng& rng) { return sample_dicut_edge(rng, 12); };

    CHECK_FALSE(check_sketch_associativity(*make_count_sketch(), edge_sampler, 1000, 1));
    CHECK_FALSE(
        check_sketch_associativity(*make_bias_count_sketch(kDicut), edge_sampler, 1000, 2));

    const auto cex = check_sketch_associativity(BrokenCountSketch{}, edge_sampler, 1000, 3);
    REQUIRE(cex.has_value());
    // replay the counterexample to confirm it is real
    const BrokenCountSketch broken;
    const BitString l =
        broken.compose(broken.compress(cex->c1),
                       broken.compose(broken.compress(cex->c2), broken.compress(cex->c3)));
    const BitString r = broken.compose(
        broken.compose(broken.compress(cex->c1), broken.compress(cex->c2)),
        broken.compress(cex->c3));
    CHECK(l != r);
}

TEST_CASE("sketches are order-insensitive over 100 shuffles") {
    const Instance base = direct_edges_randomly(gen_random_graph(10, 20, 15), 16);
    for (const char* id : {"count", "bias-count"}) {
        auto reference = make_algorithm(id, Json::object(), kDicut);
        const BitString want = run_stream(*reference, base, ExecutionPlan{}).final_state;
        for (int s = 0; s < 100; ++s) {
            ExecutionPlan plan;
            plan.ordering = Ordering::Random;
            plan.order_seed = 400 + s;
            auto alg = make_algorithm(id, Json::object(), kDicut);
            CHECK(run_stream(*alg, base, plan).final_state == want);
        }
    }
}

TEST_CASE("the induced streaming update is compose(S, compress(C))") {
    const Instance inst = direct_edges_randomly(gen_random_graph(9, 15, 21), 22);
    const auto sketch = make_bias_count_sketch(kDicut);
    BitString folded = sketch->empty_sketch(inst.n);
    for (const auto& c : inst.constraints) folded = sketch->compose(folded, sketch->compress(c));

    SketchStreamAdapter adapter(sketch);
    const RunResult res = run_stream(adapter, inst, ExecutionPlan{});
    CHECK(res.final_state == folded);
}

namespace {

// Runs with a serialize/restore checkpoint mid-stream and checks the result
// matches an uninterrupted run: the bit string plus seed must carry the
// whole algorithm memory.
void check_resume_equivalence(const std::string& id, const Json& params,
                              const PredicateFamily& family, const Instance& inst) {
    ExecutionPlan plan;
    plan.algo_seed = 97;
    auto straight = make_algorithm(id, params, family);
    plan.passes = straight->required_passes();
    const RunResult want = run_stream(*straight, inst, plan);

    const auto perm = order_stream(inst, plan.ordering, plan.order_seed);
    auto first = make_algorithm(id, params, family);
    first->init(inst.n, plan.algo_seed);
    auto second = make_algorithm(id, params, family);
    bool swapped = false;
    StreamingAlgorithm* cur = first.get();
    std::size_t step = 0;
    const std::size_t checkpoint = inst.m() / 2 + 1;
    for (unsigned pass = 0; pass < plan.passes; ++pass) {
        for (std::size_t i = 0; i < perm.size(); ++i) {
            cur->update(inst.constraints[perm[i]]);
            if (++step == checkpoint && !swapped) {
                second->restore_state(cur->serialize_state(), inst.n, plan.algo_seed);
                cur = second.get();
                swapped = true;
            }
        }
        cur->end_pass(pass);
    }
    CHECK(cur->serialize_state() == want.final_state);
    const StreamOutput got = cur->output();
    CHECK_EQ(got.value, want.output.value);
    CHECK_EQ(got.says_yes, want.output.says_yes);
}

} // namespace

TEST_CASE("serialized state is the whole inter-constraint memory") {
    const Instance cut_inst = gen_random_graph(12, 30, 51);
    const Instance dicut_inst = direct_edges_randomly(cut_inst, 52);

    check_resume_equivalence("count", Json::object(), kCut, cut_inst);
    check_resume_equivalence("bias-count", Json::object(), kDicut, dicut_inst);
    check_resume_equivalence("sparsify", Json{{"eps", 0.3}}, kCut, cut_inst);
    check_resume_equivalence("bias-greedy", Json{{"tie", "coin"}}, kDicut, dicut_inst);
    check_resume_equivalence("bias-oblivious", Json::object(), kDicut, dicut_inst);
    check_resume_equivalence("component-growing", Json{{"space_bits", 128}}, kCut, cut_inst);
    check_resume_equivalence("component-growing", Json{{"space_bits", 4096}}, kCut, cut_inst);
    check_resume_equivalence("random-walk", Json{{"walkers", 6}, {"length", 4}}, kCut, cut_inst);
}

TEST_CASE("serialize_state length always equals state_size_bits") {
    const Instance cut_inst = gen_random_graph(11, 18, 61);
    const Instance dicut_inst = direct_edges_randomly(cut_inst, 62);
    struct Case {
        const char* id;
        Json params;
        const PredicateFamily* family;
        const Instance* inst;
    };
    const Case cases[] = {
        {"count", Json::object(), &kCut, &cut_inst},
        {"bias-count", Json::object(), &kDicut, &dicut_inst},
        {"sparsify", Json{{"eps", 0.4}}, &kCut, &cut_inst},
        {"bias-greedy", Json{{"tie", "one"}}, &kDicut, &dicut_inst},
        {"bias-oblivious", Json::object(), &kDicut, &dicut_inst},
        {"component-growing", Json{{"space_bits", 256}}, &kCut, &cut_inst},
        {"random-walk", Json{{"walkers", 4}, {"length", 3}}, &kCut, &cut_inst},
    };
    for (const auto& tc : cases) {
        auto alg = make_algorithm(tc.id, tc.params, *tc.family);
        alg->init(tc.inst->n, 7);
        CHECK_EQ(alg->serialize_state().size_bits(), alg->state_size_bits());
        const unsigned passes = alg->required_passes();
        for (unsigned pass = 0; pass < passes; ++pass) {
            for (const auto& c : tc.inst->constraints) {
                alg->update(c);
                CHECK_EQ(alg->serialize_state().size_bits(), alg->state_size_bits());
            }
            alg->end_pass(pass);
            CHECK_EQ(alg->serialize_state().size_bits(), alg->state_size_bits());
        }
    }
}
