#include "csplab/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "csplab/errors.hpp"
#include "csplab/predicate.hpp"
#include "csplab/semantics.hpp"

namespace csplab {

namespace {

// Field width for vertex ids with 0 reserved as an empty/none sentinel.
unsigned id_bits(std::uint32_t n) { return bits_for(n); }

// Field width for 0-based ids, matching ceil(log2 n).
unsigned id_bits0(std::uint32_t n) { return n <= 1 ? 1 : static_cast<unsigned>(std::bit_width(n - 1)); }

std::uint32_t sat_add32(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return s > 0xFFFFFFFFull ? 0xFFFFFFFFu : static_cast<std::uint32_t>(s);
}

void require_arity2(const Constraint& c, const char* who) {
    if (c.arity() != 2) throw ShapeError(std::string(who) + ": expected a binary constraint");
}

void require_family(const PredicateFamily& family, FamilyKind kind, const char* who) {
    if (family.kind != kind)
        throw FamilyError(std::string(who) + " requires the " + family_name(kind) + " family, got " +
                          family_name(family.kind));
}

constexpr std::uint64_t kSaltCoin = 0x7C01u;
constexpr std::uint64_t kSaltReservoir = 0x5E5Eu;
constexpr std::uint64_t kSaltRest = 0x4E57u;

} // namespace

// ---- BiasProfile ----------------------------------------------------------

std::size_t BiasProfile::find_slot(std::uint32_t v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const BiasEntry& e, std::uint32_t key) { return e.vertex < key; });
    return static_cast<std::size_t>(it - entries_.begin());
}

BiasEntry& BiasProfile::touch(std::uint32_t v) {
    std::size_t i = find_slot(v);
    if (i == entries_.size() || entries_[i].vertex != v)
        entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(i), BiasEntry{v, 0, 0});
    return entries_[i];
}

void BiasProfile::add_edge(std::uint32_t from, std::uint32_t to) {
    BiasEntry& f = touch(from);
    f.out = sat_add32(f.out, 1);
    BiasEntry& t = touch(to);
    t.in = sat_add32(t.in, 1);
}

void BiasProfile::merge(const BiasProfile& other) {
    for (const BiasEntry& e : other.entries_) {
        BiasEntry& mine = touch(e.vertex);
        mine.out = sat_add32(mine.out, e.out);
        mine.in = sat_add32(mine.in, e.in);
    }
}

std::pair<std::uint32_t, std::uint32_t> BiasProfile::degrees(std::uint32_t v) const {
    std::size_t i = find_slot(v);
    if (i == entries_.size() || entries_[i].vertex != v) return {0, 0};
    return {entries_[i].out, entries_[i].in};
}

double BiasProfile::bias(std::uint32_t v) const {
    auto [out, in] = degrees(v);
    const double deg = static_cast<double>(out) + static_cast<double>(in);
    if (deg == 0.0) return 0.0;
    return (static_cast<double>(out) - static_cast<double>(in)) / deg;
}

double BiasProfile::average_bias() const {
    double num = 0.0, den = 0.0;
    for (const BiasEntry& e : entries_) {
        num += std::abs(static_cast<double>(e.out) - static_cast<double>(e.in));
        den += static_cast<double>(e.out) + static_cast<double>(e.in);
    }
    return den == 0.0 ? 0.0 : num / den;
}

std::uint64_t BiasProfile::total_edges() const {
    std::uint64_t m = 0;
    for (const BiasEntry& e : entries_) m += e.out;
    return m;
}

void BiasProfile::encode(BitString& out) const {
    out.append(static_cast<std::uint64_t>(entries_.size()), 32);
    for (const BiasEntry& e : entries_) {
        out.append(e.vertex, 32);
        out.append(e.out, 32);
        out.append(e.in, 32);
    }
}

BiasProfile BiasProfile::decode(BitReader& in) {
    BiasProfile p;
    const std::uint64_t count = in.read(32);
    p.entries_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        BiasEntry e;
        e.vertex = static_cast<std::uint32_t>(in.read(32));
        e.out = static_cast<std::uint32_t>(in.read(32));
        e.in = static_cast<std::uint32_t>(in.read(32));
        p.entries_.push_back(e);
    }
    return p;
}

BiasProfile build_bias_profile(const Instance& inst) {
    require_family(inst.family, FamilyKind::Dicut, "bias profile");
    BiasProfile p;
    for (const auto& c : inst.constraints) {
        require_arity2(c, "bias profile");
        p.add_edge(c.vars[0], c.vars[1]);
    }
    return p;
}

double dicut_average_bias(const Instance& inst) {
    if (inst.m() == 0) throw UndefinedValueError("average bias of an empty instance is undefined");
    return build_bias_profile(inst).average_bias();
}

// ---- greedy bias ------------------------------------------------------------

TieRule tie_rule_from_name(const std::string& name) {
    if (name == "one") return TieRule::One;
    if (name == "zero") return TieRule::Zero;
    if (name == "coin") return TieRule::Coin;
    throw ConfigError("unknown tie rule '" + name + "' (want one|zero|coin)");
}

const char* tie_rule_name(TieRule r) {
    switch (r) {
        case TieRule::One: return "one";
        case TieRule::Zero: return "zero";
        case TieRule::Coin: return "coin";
    }
    return "?";
}

namespace {

std::uint8_t greedy_decision(const BiasProfile& profile, std::uint32_t v, TieRule tie,
                             std::uint64_t seed) {
    auto [out, in] = profile.degrees(v);
    if (out > in) return 1;
    if (out < in) return 0;
    switch (tie) {
        case TieRule::One: return 1;
        case TieRule::Zero: return 0;
        case TieRule::Coin: return static_cast<std::uint8_t>(mix3(seed, kSaltCoin, v) & 1u);
    }
    return 0;
}

} // namespace

Assignment greedy_bias_assignment(const Instance& inst, TieRule tie, std::uint64_t seed) {
    const BiasProfile profile = build_bias_profile(inst);
    Assignment x;
    x.bits.resize(inst.n);
    for (std::uint32_t v = 1; v <= inst.n; ++v)
        x.bits[v - 1] = greedy_decision(profile, v, tie, seed);
    return x;
}

// ---- rounding functions -----------------------------------------------------

double RoundingFn::operator()(double bias) const {
    switch (kind) {
        case Kind::Constant:
            return constant;
        case Kind::Step:
            if (bias > 0.0) return 1.0;
            if (bias < 0.0) return 0.0;
            return 0.5;
        case Kind::Piecewise: {
            if (bias <= points.front().first) return points.front().second;
            if (bias >= points.back().first) return points.back().second;
            for (std::size_t i = 1; i < points.size(); ++i) {
                if (bias <= points[i].first) {
                    const auto [x0, y0] = points[i - 1];
                    const auto [x1, y1] = points[i];
                    if (x1 == x0) return y1;
                    return y0 + (y1 - y0) * (bias - x0) / (x1 - x0);
                }
            }
            return points.back().second;
        }
    }
    return 0.5;
}

RoundingFn RoundingFn::make_constant(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("rounding constant must lie in [0,1]");
    RoundingFn r;
    r.kind = Kind::Constant;
    r.constant = c;
    return r;
}

RoundingFn RoundingFn::make_step() {
    RoundingFn r;
    r.kind = Kind::Step;
    return r;
}

RoundingFn RoundingFn::make_piecewise(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw DomainError("piecewise rounding needs at least 2 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].first >= -1.0 && pts[i].first <= 1.0))
            throw DomainError("piecewise rounding breakpoints must lie in [-1,1]");
        if (!(pts[i].second >= 0.0 && pts[i].second <= 1.0))
            throw DomainError("piecewise rounding probabilities must lie in [0,1]");
        if (i > 0 && !(pts[i].first > pts[i - 1].first))
            throw DomainError("piecewise rounding breakpoints must be strictly increasing");
    }
    RoundingFn r;
    r.kind = Kind::Piecewise;
    r.points = std::move(pts);
    return r;
}

RoundingFn RoundingFn::from_json(const Json& j) {
    const std::string kind = j.value("kind", "step");
    if (kind == "step") return make_step();
    if (kind == "const") return make_constant(j.value("value", 0.5));
    if (kind == "pwl") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : j.at("points"))
            pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return make_piecewise(std::move(pts));
    }
    throw ConfigError("unknown rounding kind '" + kind + "' (want step|const|pwl)");
}

Json RoundingFn::to_json() const {
    Json j;
    switch (kind) {
        case Kind::Constant:
            j["kind"] = "const";
            j["value"] = constant;
            break;
        case Kind::Step:
            j["kind"] = "step";
            break;
        case Kind::Piecewise: {
            j["kind"] = "pwl";
            Json pts = Json::array();
            for (const auto& [b, p] : points) pts.push_back(Json::array({b, p}));
            j["points"] = pts;
            break;
        }
    }
    return j;
}

double dicut_oblivious_expected(const RoundingFn& rounding, const Instance& inst) {
    require_family(inst.family, FamilyKind::Dicut, "oblivious rounding");
    const BiasProfile profile = build_bias_profile(inst);
    std::vector<double> probs(inst.n);
    for (std::uint32_t v = 1; v <= inst.n; ++v) {
        const double p = rounding(profile.bias(v));
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("rounding function left [0,1] at bias " +
                              std::to_string(profile.bias(v)));
        probs[v - 1] = p;
    }
    return expected_value_product(inst, probs);
}

// ---- trivial ----------------------------------------------------------------

namespace {

class TrivialAlgo final : public StreamingAlgorithm {
public:
    TrivialAlgo(const PredicateFamily& family, double eps) {
        const double ratio = trivial_ratio(family).value;
        if (!(eps > 0.0 && eps < ratio))
            throw DomainError("trivial: eps must lie in (0, " + std::to_string(ratio) + ")");
        value_ = ratio - eps;
    }

    std::string id() const override { return "trivial"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return 0; }
    void init(std::uint32_t, std::uint64_t) override {}
    void update(const Constraint&) override {}
    std::uint64_t state_size_bits() const override { return 0; }
    BitString serialize_state() const override { return BitString{}; }
    void restore_state(const BitString&, std::uint32_t, std::uint64_t) override {}
    StreamOutput output() const override { return StreamOutput{value_, std::nullopt, ""}; }

private:
    double value_ = 0.0;
};

} // namespace

std::unique_ptr<StreamingAlgorithm> make_trivial(const PredicateFamily& family, double eps) {
    return std::make_unique<TrivialAlgo>(family, eps);
}

// ---- counter sketch -----------------------------------------------------------

namespace {

constexpr std::uint64_t kCountSaturation = 1ULL << 62;

BitString encode_count(std::uint64_t v) {
    BitString bs;
    if (v == 0) return bs;
    bs.append(v, static_cast<unsigned>(std::bit_width(v)));
    return bs;
}

std::uint64_t decode_count(const BitString& bs) {
    return bs.read(0, static_cast<unsigned>(bs.size_bits()));
}

class CountSketch final : public SketchingAlgorithm {
public:
    std::string id() const override { return "count"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return 64; }
    BitString empty_sketch(std::uint32_t) const override { return encode_count(0); }
    BitString compress(const Constraint&) const override { return encode_count(1); }
    BitString compose(const BitString& a, const BitString& b) const override {
        const std::uint64_t sum = std::min(kCountSaturation, decode_count(a) + decode_count(b));
        return encode_count(sum);
    }
    StreamOutput output(const BitString& state) const override {
        return StreamOutput{static_cast<double>(decode_count(state)), std::nullopt, ""};
    }
};

} // namespace

std::shared_ptr<const SketchingAlgorithm> make_count_sketch() {
    return std::make_shared<CountSketch>();
}

// ---- bias counter sketch -------------------------------------------------------

namespace {

class BiasCountSketch final : public SketchingAlgorithm {
public:
    explicit BiasCountSketch(const PredicateFamily& family) {
        require_family(family, FamilyKind::Dicut, "bias-count");
    }

    std::string id() const override { return "bias-count"; }
    std::uint64_t declared_state_bits(std::uint32_t n) const override {
        return BiasProfile::encoded_bits(n);
    }
    BitString empty_sketch(std::uint32_t) const override {
        BitString bs;
        BiasProfile{}.encode(bs);
        return bs;
    }
    BitString compress(const Constraint& c) const override {
        require_arity2(c, "bias-count");
        BiasProfile p;
        p.add_edge(c.vars[0], c.vars[1]);
        BitString bs;
        p.encode(bs);
        return bs;
    }
    BitString compose(const BitString& a, const BitString& b) const override {
        BitReader ra(a), rb(b);
        BiasProfile pa = BiasProfile::decode(ra);
        const BiasProfile pb = BiasProfile::decode(rb);
        pa.merge(pb);
        BitString bs;
        pa.encode(bs);
        return bs;
    }
    StreamOutput output(const BitString& state) const override {
        BitReader r(state);
        return StreamOutput{BiasProfile::decode(r).average_bias(), std::nullopt, ""};
    }
};

} // namespace

std::shared_ptr<const SketchingAlgorithm> make_bias_count_sketch(const PredicateFamily& family) {
    return std::make_shared<BiasCountSketch>(family);
}

// ---- sparsify-and-solve ---------------------------------------------------------

namespace {

class SparsifyAlgo final : public StreamingAlgorithm {
public:
    SparsifyAlgo(const PredicateFamily& family, double eps, double sample_factor)
        : family_(family), eps_(eps), factor_(sample_factor) {
        if (!(eps > 0.0 && eps < 1.0)) throw DomainError("sparsify: eps must lie in (0,1)");
        if (!(sample_factor > 0.0)) throw DomainError("sparsify: sample factor must be positive");
    }

    std::string id() const override { return "sparsify"; }

    std::uint64_t sample_size(std::uint32_t n) const {
        return static_cast<std::uint64_t>(std::ceil(factor_ * n / (eps_ * eps_)));
    }

    std::uint64_t declared_state_bits(std::uint32_t n) const override {
        const unsigned k = family_.arity;
        return 64 + sample_size(n) * (k * id_bits0(n) + k);
    }

    void init(std::uint32_t n, std::uint64_t seed) override {
        n_ = n;
        seed_ = seed;
        seen_ = 0;
        Constraint blank;
        blank.vars.assign(family_.arity, 1);
        blank.mask = 0;
        slots_.assign(sample_size(n), blank);
    }

    void update(const Constraint& c) override {
        ++seen_;
        // one independent single-item reservoir per slot = a uniform
        // with-replacement sample of the stream so far
        const double inv = 1.0 / static_cast<double>(seen_);
        for (std::size_t j = 0; j < slots_.size(); ++j) {
            if (hash_real01(mix4(seed_, kSparsifySampleSalt, j, seen_)) < inv) slots_[j] = c;
        }
    }

    std::uint64_t state_size_bits() const override { return declared_state_bits(n_); }

    BitString serialize_state() const override {
        const unsigned k = family_.arity;
        const unsigned w = id_bits0(n_);
        BitString bs;
        bs.append(seen_, 64);
        for (const auto& slot : slots_) {
            for (unsigned i = 0; i < k; ++i)
                bs.append(seen_ == 0 ? 0 : slot.vars[i] - 1, w);
            bs.append(seen_ == 0 ? 0 : slot.mask, k);
        }
        return bs;
    }

    void restore_state(const BitString& state, std::uint32_t n, std::uint64_t seed) override {
        init(n, seed);
        BitReader r(state);
        seen_ = r.read(64);
        const unsigned k = family_.arity;
        const unsigned w = id_bits0(n_);
        for (auto& slot : slots_) {
            for (unsigned i = 0; i < k; ++i)
                slot.vars[i] = static_cast<std::uint32_t>(r.read(w)) + 1;
            slot.mask = static_cast<std::uint32_t>(r.read(k));
        }
    }

    StreamOutput output() const override {
        if (seen_ == 0) throw UndefinedValueError("sparsify: empty stream");
        Instance sample;
        sample.n = n_;
        sample.family = family_;
        sample.constraints = slots_;
        const auto [best, argmax] = max_value(sample);
        (void)argmax;
        return StreamOutput{best.to_double(), std::nullopt, ""};
    }

private:
    PredicateFamily family_;
    double eps_;
    double factor_;
    std::uint32_t n_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t seen_ = 0;
    std::vector<Constraint> slots_;
};

} // namespace

std::unique_ptr<StreamingAlgorithm> make_sparsify(const PredicateFamily& family, double eps,
                                                  double sample_factor) {
    return std::make_unique<SparsifyAlgo>(family, eps, sample_factor);
}

// ---- two-pass bias algorithms ----------------------------------------------------

namespace {

// Shared shell for the 2-pass profile-then-evaluate algorithms: pass 1
// builds the bias profile, pass 2 scores it against the stream.
class TwoPassBiasAlgo : public StreamingAlgorithm {
public:
    explicit TwoPassBiasAlgo(const PredicateFamily& family, const char* who) {
        require_family(family, FamilyKind::Dicut, who);
    }

    std::uint64_t declared_state_bits(std::uint32_t n) const override {
        return 2 + 64 + BiasProfile::encoded_bits(n);
    }

    void init(std::uint32_t n, std::uint64_t seed) override {
        n_ = n;
        seed_ = seed;
        phase_ = 0;
        acc_ = 0;
        profile_ = BiasProfile{};
    }

    void update(const Constraint& c) override {
        require_arity2(c, id().c_str());
        if (phase_ == 0)
            profile_.add_edge(c.vars[0], c.vars[1]);
        else if (phase_ == 1)
            accumulate(c);
    }

    void end_pass(unsigned) override {
        if (phase_ < 2) ++phase_;
    }

    std::uint64_t state_size_bits() const override {
        return 2 + 64 + BiasProfile::encoded_bits(profile_.entries().size());
    }

    BitString serialize_state() const override {
        BitString bs;
        bs.append(phase_, 2);
        bs.append(acc_, 64);
        profile_.encode(bs);
        return bs;
    }

    void restore_state(const BitString& state, std::uint32_t n, std::uint64_t seed) override {
        init(n, seed);
        BitReader r(state);
        phase_ = static_cast<std::uint8_t>(r.read(2));
        acc_ = r.read(64);
        profile_ = BiasProfile::decode(r);
    }

    StreamOutput output() const override {
        if (phase_ < 2)
            throw ConfigError(id() + " needs 2 passes (profile pass, then evaluation pass)");
        const std::uint64_t m = profile_.total_edges();
        if (m == 0) throw UndefinedValueError(id() + ": empty stream");
        return StreamOutput{final_value(m), std::nullopt, ""};
    }

    unsigned required_passes() const override { return 2; }

protected:
    virtual void accumulate(const Constraint& c) = 0;
    virtual double final_value(std::uint64_t m) const = 0;

    std::uint32_t n_ = 0;
    std::uint64_t seed_ = 0;
    std::uint8_t phase_ = 0;
    std::uint64_t acc_ = 0; // integer or bit-cast double, subclass-owned
    BiasProfile profile_;
};

class GreedyBiasAlgo final : public TwoPassBiasAlgo {
public:
    GreedyBiasAlgo(const PredicateFamily& family, TieRule tie)
        : TwoPassBiasAlgo(family, "bias-greedy"), tie_(tie) {}

    std::string id() const override { return "bias-greedy"; }

private:
    void accumulate(const Constraint& c) override {
        const std::uint8_t xu = greedy_decision(profile_, c.vars[0], tie_, seed_);
        const std::uint8_t xv = greedy_decision(profile_, c.vars[1], tie_, seed_);
        if (xu == 1 && xv == 0) ++acc_;
    }

    double final_value(std::uint64_t m) const override {
        return static_cast<double>(acc_) / static_cast<double>(m);
    }

    TieRule tie_;
};

class ObliviousBiasAlgo final : public TwoPassBiasAlgo {
public:
    ObliviousBiasAlgo(const PredicateFamily& family, RoundingFn rounding)
        : TwoPassBiasAlgo(family, "bias-oblivious"), rounding_(std::move(rounding)) {}

    std::string id() const override { return "bias-oblivious"; }

private:
    double prob(std::uint32_t v) const {
        const double p = rounding_(profile_.bias(v));
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("rounding function left [0,1] at bias " +
                              std::to_string(profile_.bias(v)));
        return p;
    }

    void accumulate(const Constraint& c) override {
        const double add = prob(c.vars[0]) * (1.0 - prob(c.vars[1]));
        acc_ = std::bit_cast<std::uint64_t>(std::bit_cast<double>(acc_) + add);
    }

    double final_value(std::uint64_t m) const override {
        return std::bit_cast<double>(acc_) / static_cast<double>(m);
    }

    RoundingFn rounding_;
};

} // namespace

std::unique_ptr<StreamingAlgorithm> make_greedy_bias(const PredicateFamily& family, TieRule tie) {
    return std::make_unique<GreedyBiasAlgo>(family, tie);
}

std::unique_ptr<StreamingAlgorithm> make_oblivious_bias(const PredicateFamily& family,
                                                        RoundingFn rounding) {
    return std::make_unique<ObliviousBiasAlgo>(family, std::move(rounding));
}

// ---- component growing -------------------------------------------------------------

namespace {

// Union-find with parity over a capacity-bounded tracked vertex set. The
// serialized form is a fixed array of (vertex, parent, parity) slots of
// 2*ceil(log2(n+1))+1 bits each; vertex 0 marks an empty slot, and the
// latched odd-cycle flag is the reserved slot pattern (0, 0, 1).
class ComponentGrowingAlgo final : public StreamingAlgorithm {
public:
    ComponentGrowingAlgo(const PredicateFamily& family, std::uint64_t space_bits)
        : space_bits_(space_bits) {
        require_family(family, FamilyKind::Cut, "component-growing");
    }

    std::string id() const override { return "component-growing"; }
    std::uint64_t declared_state_bits(std::uint32_t) const override { return space_bits_; }

    void init(std::uint32_t n, std::uint64_t) override {
        n_ = n;
        idw_ = id_bits(n);
        slot_bits_ = 2 * idw_ + 1;
        cap_ = space_bits_ / slot_bits_;
        if (cap_ < 2)
            throw DomainError("component-growing: " + std::to_string(space_bits_) +
                              " bits is below the 2-vertex minimum at n=" + std::to_string(n));
        found_ = false;
        vertex_.clear();
        parent_.clear();
        parity_.clear();
        slot_of_.clear();
        comp_size_.clear();
    }

    void update(const Constraint& c) override {
        require_arity2(c, "component-growing");
        if (found_) return;
        const std::uint32_t u = c.vars[0];
        const std::uint32_t v = c.vars[1];

        // Make room for untracked endpoints, evicting whole components
        // smallest-first (tie: lowest root id). Evictions may untrack an
        // endpoint we were counting on, so re-examine each time.
        for (;;) {
            const unsigned need = (slot_of_.count(u) ? 0 : 1) + (slot_of_.count(v) ? 0 : 1);
            if (need == 0 || vertex_.size() + need <= cap_) {
                if (!slot_of_.count(u)) insert_vertex(u);
                if (!slot_of_.count(v)) insert_vertex(v);
                break;
            }
            evict_smallest();
        }

        const auto [ru, pu] = find(u);
        const auto [rv, pv] = find(v);
        if (ru == rv) {
            // both endpoints already have forced colors; a cut edge needs
            // opposite parities, so equality certifies an odd cycle
            if (pu == pv) set_found();
            return;
        }
        std::uint32_t big = ru, small = rv;
        if (comp_size_[rv] > comp_size_[ru] || (comp_size_[rv] == comp_size_[ru] && rv < ru))
            std::swap(big, small);
        const std::size_t s = slot_of_.at(small);
        parent_[s] = big;
        parity_[s] = pu ^ pv ^ 1;
        comp_size_[big] += comp_size_[small];
        comp_size_.erase(small);
    }

    std::uint64_t state_size_bits() const override { return cap_ * slot_bits_; }

    BitString serialize_state() const override {
        BitString bs;
        if (found_) {
            bs.append(0, idw_);
            bs.append(0, idw_);
            bs.append_bit(true);
            for (std::uint64_t s = 1; s < cap_; ++s) bs.append(0, slot_bits_);
            return bs;
        }
        for (std::size_t s = 0; s < vertex_.size(); ++s) {
            bs.append(vertex_[s], idw_);
            bs.append(parent_[s], idw_);
            bs.append_bit(parity_[s] != 0);
        }
        for (std::uint64_t s = vertex_.size(); s < cap_; ++s) bs.append(0, slot_bits_);
        return bs;
    }

    void restore_state(const BitString& state, std::uint32_t n, std::uint64_t seed) override {
        init(n, seed);
        BitReader r(state);
        for (std::uint64_t s = 0; s < cap_; ++s) {
            const std::uint32_t v = static_cast<std::uint32_t>(r.read(idw_));
            const std::uint32_t p = static_cast<std::uint32_t>(r.read(idw_));
            const bool par = r.read_bit();
            if (v == 0) {
                if (s == 0 && p == 0 && par) found_ = true;
                continue;
            }
            slot_of_[v] = vertex_.size();
            vertex_.push_back(v);
            parent_.push_back(p);
            parity_.push_back(par ? 1 : 0);
        }
        for (std::uint32_t v : vertex_) comp_size_[find(v).first] += 1;
    }

    StreamOutput output() const override {
        if (found_) return StreamOutput{std::nullopt, false, "OddCycleFound"};
        return StreamOutput{std::nullopt, true, "Consistent"};
    }

private:
    void set_found() {
        found_ = true;
        vertex_.clear();
        parent_.clear();
        parity_.clear();
        slot_of_.clear();
        comp_size_.clear();
    }

    void insert_vertex(std::uint32_t v) {
        slot_of_[v] = vertex_.size();
        vertex_.push_back(v);
        parent_.push_back(v);
        parity_.push_back(0);
        comp_size_[v] = 1;
    }

    std::pair<std::uint32_t, std::uint8_t> find(std::uint32_t v) {
        std::vector<std::uint32_t> path;
        std::uint8_t par = 0;
        std::uint32_t cur = v;
        for (;;) {
            const std::size_t s = slot_of_.at(cur);
            if (parent_[s] == cur) break;
            path.push_back(cur);
            par ^= parity_[s];
            cur = parent_[s];
        }
        std::uint8_t prefix = 0;
        for (std::uint32_t u : path) {
            const std::size_t s = slot_of_.at(u);
            const std::uint8_t step = parity_[s];
            parent_[s] = cur;
            parity_[s] = par ^ prefix;
            prefix ^= step;
        }
        return {cur, par};
    }

    // const-friendly find for bookkeeping that must not mutate
    std::pair<std::uint32_t, std::uint8_t> find(std::uint32_t v) const {
        return const_cast<ComponentGrowingAlgo*>(this)->find(v);
    }

    void evict_smallest() {
        std::uint32_t victim = 0;
        std::uint32_t best_size = 0;
        for (const auto& [root, size] : comp_size_) {
            if (victim == 0 || size < best_size || (size == best_size && root < victim)) {
                victim = root;
                best_size = size;
            }
        }
        if (victim == 0) return; // nothing tracked
        std::vector<std::uint32_t> members;
        for (std::uint32_t v : vertex_)
            if (find(v).first == victim) members.push_back(v);
        for (std::uint32_t v : members) remove_slot(v);
        comp_size_.erase(victim);
    }

    void remove_slot(std::uint32_t v) {
        const std::size_t s = slot_of_.at(v);
        const std::size_t last = vertex_.size() - 1;
        if (s != last) {
            vertex_[s] = vertex_[last];
            parent_[s] = parent_[last];
            parity_[s] = parity_[last];
            slot_of_[vertex_[s]] = s;
        }
        vertex_.pop_back();
        parent_.pop_back();
        parity_.pop_back();
        slot_of_.erase(v);
    }

    std::uint64_t space_bits_;
    std::uint32_t n_ = 0;
    unsigned idw_ = 1;
    std::uint64_t slot_bits_ = 3;
    std::uint64_t cap_ = 0;
    bool found_ = false;
    std::vector<std::uint32_t> vertex_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> parity_;
    std::unordered_map<std::uint32_t, std::size_t> slot_of_;
    std::unordered_map<std::uint32_t, std::uint32_t> comp_size_;
};

} // namespace

std::unique_ptr<StreamingAlgorithm> make_component_growing(const PredicateFamily& family,
                                                           std::uint64_t space_bits) {
    return std::make_unique<ComponentGrowingAlgo>(family, space_bits);
}

// ---- random walk detector -----------------------------------------------------------

namespace {

// W lazy random walks sharing one start vertex. Pass 0 only selects the
// start (first endpoint of the first edge); each later pass advances every
// non-resting walker along one uniform incident edge, chosen by a
// single-edge reservoir over that pass, flipping its parity. In a bipartite
// graph the parity of any walk from the start determines its endpoint's
// side, so two walkers meeting with opposite parities certify an odd cycle.
// Walks rest with probability 1/2 per pass so that walk lengths differ;
// without laziness every walker would share the same parity.
class RandomWalkAlgo final : public StreamingAlgorithm {
public:
    RandomWalkAlgo(const PredicateFamily& family, unsigned walkers, unsigned length)
        : walkers_count_(walkers), length_(length) {
        require_family(family, FamilyKind::Cut, "random-walk");
        if (walkers < 1) throw DomainError("random-walk: needs at least 1 walker");
        if (length < 1 || length > 250) throw DomainError("random-walk: length must lie in [1,250]");
    }

    std::string id() const override { return "random-walk"; }

    std::uint64_t declared_state_bits(std::uint32_t n) const override {
        const unsigned idw = id_bits(n);
        return idw + 1 + 8 + static_cast<std::uint64_t>(walkers_count_) * (2 * idw + 34);
    }

    void init(std::uint32_t n, std::uint64_t seed) override {
        n_ = n;
        seed_ = seed;
        idw_ = id_bits(n);
        start_ = 0;
        active_ = false;
        pass_ctr_ = 0;
        walkers_.assign(walkers_count_, Walker{});
    }

    void update(const Constraint& c) override {
        require_arity2(c, "random-walk");
        const std::uint32_t u = c.vars[0];
        const std::uint32_t v = c.vars[1];
        if (!active_) {
            if (start_ == 0) {
                start_ = u;
                for (auto& w : walkers_) w.vertex = start_;
            }
            return;
        }
        for (std::size_t i = 0; i < walkers_.size(); ++i) {
            Walker& w = walkers_[i];
            if (w.resting) continue;
            std::uint32_t other;
            if (w.vertex == u)
                other = v;
            else if (w.vertex == v)
                other = u;
            else
                continue;
            w.seen += 1;
            const double roll = hash_real01(mix4(seed_ ^ kSaltReservoir, i, pass_ctr_, w.seen));
            if (roll < 1.0 / static_cast<double>(w.seen)) w.candidate = other;
        }
    }

    void end_pass(unsigned) override {
        pass_ctr_ = static_cast<std::uint8_t>(pass_ctr_ + 1);
        if (!active_) {
            if (start_ == 0) return; // empty pass; stay in selection mode
            active_ = true;
        } else {
            for (auto& w : walkers_) {
                if (!w.resting && w.candidate != 0) {
                    w.vertex = w.candidate;
                    w.parity ^= 1;
                }
                w.candidate = 0;
                w.seen = 0;
            }
        }
        for (std::size_t i = 0; i < walkers_.size(); ++i)
            walkers_[i].resting =
                static_cast<std::uint8_t>(mix4(seed_ ^ kSaltRest, i, pass_ctr_, 0) & 1u);
    }

    std::uint64_t state_size_bits() const override {
        return idw_ + 1 + 8 + static_cast<std::uint64_t>(walkers_.size()) * (2 * idw_ + 34);
    }

    BitString serialize_state() const override {
        BitString bs;
        bs.append(start_, idw_);
        bs.append_bit(active_);
        bs.append(pass_ctr_, 8);
        for (const auto& w : walkers_) {
            bs.append(w.vertex, idw_);
            bs.append_bit(w.parity != 0);
            bs.append_bit(w.resting != 0);
            bs.append(w.candidate, idw_);
            bs.append(w.seen, 32);
        }
        return bs;
    }

    void restore_state(const BitString& state, std::uint32_t n, std::uint64_t seed) override {
        init(n, seed);
        BitReader r(state);
        start_ = static_cast<std::uint32_t>(r.read(idw_));
        active_ = r.read_bit();
        pass_ctr_ = static_cast<std::uint8_t>(r.read(8));
        for (auto& w : walkers_) {
            w.vertex = static_cast<std::uint32_t>(r.read(idw_));
            w.parity = r.read_bit() ? 1 : 0;
            w.resting = r.read_bit() ? 1 : 0;
            w.candidate = static_cast<std::uint32_t>(r.read(idw_));
            w.seen = static_cast<std::uint32_t>(r.read(32));
        }
    }

    StreamOutput output() const override {
        if (active_) {
            std::unordered_map<std::uint32_t, unsigned> seen_parities;
            for (const auto& w : walkers_) {
                unsigned& mask = seen_parities[w.vertex];
                mask |= (w.parity ? 2u : 1u);
                if (mask == 3u) return StreamOutput{std::nullopt, false, "OddCycleFound"};
            }
        }
        return StreamOutput{std::nullopt, true, "Consistent"};
    }

    unsigned required_passes() const override { return length_ + 1; }

private:
    struct Walker {
        std::uint32_t vertex = 0;
        std::uint8_t parity = 0;
        std::uint8_t resting = 0;
        std::uint32_t candidate = 0;
        std::uint32_t seen = 0;
    };

    unsigned walkers_count_;
    unsigned length_;
    std::uint32_t n_ = 0;
    std::uint64_t seed_ = 0;
    unsigned idw_ = 1;
    std::uint32_t start_ = 0;
    bool active_ = false;
    std::uint8_t pass_ctr_ = 0;
    std::vector<Walker> walkers_;
};

} // namespace

std::unique_ptr<StreamingAlgorithm> make_random_walk(const PredicateFamily& family,
                                                     unsigned walkers, unsigned length) {
    return std::make_unique<RandomWalkAlgo>(family, walkers, length);
}

unsigned walkers_for_budget(std::uint64_t space_bits, std::uint32_t n) {
    const unsigned idw = id_bits(n);
    const std::uint64_t header = idw + 1 + 8;
    const std::uint64_t per_walker = 2 * idw + 34;
    if (space_bits <= header + per_walker) return 1;
    return static_cast<unsigned>((space_bits - header) / per_walker);
}

// ---- registry ------------------------------------------------------------------------

const std::vector<AlgorithmInfo>& algorithm_registry() {
    static const std::vector<AlgorithmInfo> registry = {
        {"trivial", "{eps}", "0", false, false},
        {"count", "{}", "64; count held in its minimal binary width", false, true},
        {"sparsify", "{eps, cs=4}", "64 + ceil(cs*n/eps^2)*(k*ceil(log2 n) + k)", false, false},
        {"bias-greedy", "{tie: one|zero|coin}", "2 + 64 + 32 + 96n", false, false},
        {"bias-oblivious", "{rounding: {kind: step|const|pwl, ...}}", "2 + 64 + 32 + 96n", false,
         false},
        {"bias-count", "{}", "32 + 96n", false, true},
        {"component-growing", "{space_bits}", "space_bits; slots of 2*ceil(log2(n+1))+1 bits",
         true, false},
        {"random-walk", "{walkers, length} | {space_bits, length}",
         "ceil(log2(n+1)) + 9 + walkers*(2*ceil(log2(n+1)) + 34)", true, false},
    };
    return registry;
}

std::unique_ptr<StreamingAlgorithm> make_algorithm(const std::string& id, const Json& params,
                                                   const PredicateFamily& family) {
    try {
        if (id == "trivial") return make_trivial(family, params.value("eps", 0.01));
        if (id == "count")
            return std::make_unique<SketchStreamAdapter>(make_count_sketch());
        if (id == "bias-count")
            return std::make_unique<SketchStreamAdapter>(make_bias_count_sketch(family));
        if (id == "sparsify")
            return make_sparsify(family, params.value("eps", 0.1), params.value("cs", 4.0));
        if (id == "bias-greedy")
            return make_greedy_bias(family, tie_rule_from_name(params.value("tie", "coin")));
        if (id == "bias-oblivious") {
            RoundingFn r = params.contains("rounding") ? RoundingFn::from_json(params.at("rounding"))
                                                       : RoundingFn::make_step();
            return make_oblivious_bias(family, std::move(r));
        }
        if (id == "component-growing") {
            if (!params.contains("space_bits"))
                throw ConfigError("component-growing requires space_bits");
            return make_component_growing(family, params.at("space_bits").get<std::uint64_t>());
        }
        if (id == "random-walk") {
            const unsigned length = params.value("length", 9u);
            unsigned walkers;
            if (params.contains("walkers"))
                walkers = params.at("walkers").get<unsigned>();
            else if (params.contains("space_bits") && params.contains("n_hint"))
                walkers = walkers_for_budget(params.at("space_bits").get<std::uint64_t>(),
                                             params.at("n_hint").get<std::uint32_t>());
            else
                walkers = 16;
            return make_random_walk(family, walkers, length);
        }
    } catch (const Json::exception& e) {
        throw ConfigError("bad parameters for algorithm '" + id + "': " + e.what());
    }
    throw ConfigError("unknown algorithm id '" + id + "'");
}

std::shared_ptr<const SketchingAlgorithm> make_sketch(const std::string& id,
                                                      const PredicateFamily& family) {
    if (id == "count") return make_count_sketch();
    if (id == "bias-count") return make_bias_count_sketch(family);
    throw ConfigError("'" + id + "' is not a sketching algorithm");
}

} // namespace csplab
