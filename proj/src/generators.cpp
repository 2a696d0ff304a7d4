#include "csplab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "csplab/errors.hpp"
#include "csplab/rng.hpp"
#include "csplab/semantics.hpp"

namespace csplab {

GenKind gen_kind_from_name(const std::string& name) {
    if (name == "random-graph") return GenKind::RandomGraph;
    if (name == "bipartite-noisy") return GenKind::BipartiteNoisy;
    if (name == "matching-chunks") return GenKind::MatchingChunks;
    if (name == "directed-from-cut") return GenKind::DirectedFromCut;
    if (name == "bounded-degree") return GenKind::BoundedDegree;
    throw ConfigError("unknown generator kind '" + name + "'");
}

const char* gen_kind_name(GenKind kind) {
    switch (kind) {
        case GenKind::RandomGraph: return "random-graph";
        case GenKind::BipartiteNoisy: return "bipartite-noisy";
        case GenKind::MatchingChunks: return "matching-chunks";
        case GenKind::DirectedFromCut: return "directed-from-cut";
        case GenKind::BoundedDegree: return "bounded-degree";
    }
    return "?";
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
    GeneratorSpec s;
    try {
        s.kind = gen_kind_from_name(j.at("kind").get<std::string>());
        s.n = j.at("n").get<std::uint32_t>();
        s.m = j.value("m", std::uint64_t{0});
        s.chunks = j.value("T", 0u);
        s.alpha = j.value("alpha", 0.375);
        if (j.contains("mode")) {
            const std::string mode = j.at("mode").get<std::string>();
            if (mode != "yes" && mode != "no")
                throw ConfigError("generator mode must be yes|no, got '" + mode + "'");
            s.yes_mode = (mode == "yes");
        }
        s.eta = j.value("eta", 0.0);
        s.max_degree = j.value("D", 0u);
        if (j.contains("family")) s.family = family_from_name(j.at("family").get<std::string>());
        s.arity = j.value("k", 2u);
        s.distinct_edges = j.value("distinct", false);
        s.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad generator spec: ") + e.what());
    }
    return s;
}

nlohmann::json GeneratorSpec::to_json() const {
    nlohmann::json j;
    j["kind"] = gen_kind_name(kind);
    j["n"] = n;
    switch (kind) {
        case GenKind::RandomGraph:
            j["m"] = m;
            if (distinct_edges) j["distinct"] = true;
            break;
        case GenKind::BipartiteNoisy:
            j["m"] = m;
            j["eta"] = eta;
            break;
        case GenKind::MatchingChunks:
            j["T"] = chunks;
            j["alpha"] = alpha;
            j["mode"] = yes_mode ? "yes" : "no";
            j["eta"] = eta;
            break;
        case GenKind::DirectedFromCut:
            j["m"] = m;
            break;
        case GenKind::BoundedDegree:
            j["m"] = m;
            j["D"] = max_degree;
            j["family"] = family_name(family);
            j["k"] = arity;
            break;
    }
    j["seed"] = seed;
    return j;
}

std::string GeneratorSpec::compact_id() const {
    std::ostringstream out;
    out << gen_kind_name(kind) << ";n=" << n;
    switch (kind) {
        case GenKind::RandomGraph:
            out << ";m=" << m;
            if (distinct_edges) out << ";distinct=1";
            break;
        case GenKind::BipartiteNoisy:
            out << ";m=" << m << ";eta=" << eta;
            break;
        case GenKind::MatchingChunks:
            out << ";T=" << chunks << ";alpha=" << alpha << ";mode=" << (yes_mode ? "yes" : "no")
                << ";eta=" << eta;
            break;
        case GenKind::DirectedFromCut:
            out << ";m=" << m;
            break;
        case GenKind::BoundedDegree:
            out << ";m=" << m << ";D=" << max_degree << ";family=" << family_name(family)
                << ";k=" << arity;
            break;
    }
    return out.str();
}

namespace {

Constraint edge(std::uint32_t a, std::uint32_t b) {
    Constraint c;
    c.vars = {a, b};
    c.mask = 0;
    return c;
}

// Random balanced bipartition: bits[v-1] = side of v, exactly n/2 per side.
Assignment random_bipartition(std::uint32_t n, Rng& rng) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 1u);
    rng.shuffle(order);
    Assignment sigma;
    sigma.bits.assign(n, 0);
    for (std::uint32_t i = 0; i < n / 2; ++i) sigma.bits[order[i] - 1] = 1;
    return sigma;
}

} // namespace

Instance gen_random_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed,
                          bool distinct_edges) {
    if (n < 2) throw DomainError("random-graph: n must be at least 2");
    if (m < 1) throw DomainError("random-graph: m must be at least 1");
    if (distinct_edges && m > static_cast<std::uint64_t>(n) * (n - 1) / 2)
        throw DomainError("random-graph: m exceeds the number of distinct pairs");

    Rng rng(seed);
    Instance inst;
    inst.n = n;
    inst.family = make_family(FamilyKind::Cut, 2);
    inst.constraints.reserve(m);
    std::set<std::pair<std::uint32_t, std::uint32_t>> used;
    while (inst.constraints.size() < m) {
        const std::uint32_t a = static_cast<std::uint32_t>(rng.below(n)) + 1;
        std::uint32_t b = static_cast<std::uint32_t>(rng.below(n - 1)) + 1;
        if (b >= a) ++b;
        if (distinct_edges) {
            const auto key = std::minmax(a, b);
            if (!used.insert(key).second) continue;
        }
        inst.constraints.push_back(edge(a, b));
    }
    return inst;
}

GenResult gen_bipartite_noisy(std::uint32_t n, std::uint64_t m, double eta, std::uint64_t seed) {
    if (n < 2 || n % 2 != 0) throw DomainError("bipartite-noisy: n must be even and >= 2");
    if (m < 1) throw DomainError("bipartite-noisy: m must be at least 1");
    if (!(eta >= 0.0 && eta < 1.0)) throw DomainError("bipartite-noisy: eta must lie in [0,1)");

    Rng rng(seed);
    const Assignment sigma = random_bipartition(n, rng);
    std::vector<std::uint32_t> side[2];
    for (std::uint32_t v = 1; v <= n; ++v) side[sigma.bits[v - 1]].push_back(v);

    GenResult res;
    res.instance.n = n;
    res.instance.family = make_family(FamilyKind::Cut, 2);
    res.planted = sigma;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (eta > 0.0 && rng.bernoulli(eta)) {
            const auto& s = side[rng.below(2)];
            const std::uint32_t a = s[rng.below(s.size())];
            std::uint32_t bi = static_cast<std::uint32_t>(rng.below(s.size() - 1));
            const std::uint32_t b = s[bi] == a ? s[s.size() - 1] : s[bi];
            res.instance.constraints.push_back(edge(a, b));
        } else {
            const std::uint32_t a = side[0][rng.below(side[0].size())];
            const std::uint32_t b = side[1][rng.below(side[1].size())];
            res.instance.constraints.push_back(edge(a, b));
        }
    }
    return res;
}

GenResult gen_matching_chunks(std::uint32_t n, unsigned chunks, double alpha, bool yes_mode,
                              double eta, std::uint64_t seed) {
    if (n < 2 || n % 2 != 0) throw DomainError("matching-chunks: n must be even and >= 2");
    if (chunks < 1) throw DomainError("matching-chunks: T must be at least 1");
    if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("matching-chunks: alpha must lie in (0, 1/2]");
    if (!(eta >= 0.0 && eta < 1.0)) throw DomainError("matching-chunks: eta must lie in [0,1)");
    const std::uint32_t r = static_cast<std::uint32_t>(alpha * n);
    if (r == 0) throw DomainError("matching-chunks: floor(alpha*n) must be positive");

    Rng rng(seed);
    const Assignment sigma = random_bipartition(n, rng);
    std::vector<std::uint32_t> side[2];
    for (std::uint32_t v = 1; v <= n; ++v) side[sigma.bits[v - 1]].push_back(v);

    GenResult res;
    res.instance.n = n;
    res.instance.family = make_family(FamilyKind::Cut, 2);
    res.planted = sigma;

    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 1u);

    for (unsigned t = 0; t < chunks; ++t) {
        std::vector<Constraint> chunk;
        chunk.reserve(r);
        if (yes_mode) {
            // uniform partial matching of size r on the complete bipartite
            // graph across sigma
            std::vector<std::uint32_t> left = side[0];
            std::vector<std::uint32_t> right = side[1];
            rng.shuffle(left);
            rng.shuffle(right);
            std::vector<bool> used(n + 1, false);
            for (std::uint32_t i = 0; i < r; ++i) {
                chunk.push_back(edge(left[i], right[i]));
                used[left[i]] = used[right[i]] = true;
            }
            if (eta > 0.0) {
                // noise an edge into a uniform non-crossing pair, keeping
                // the chunk a matching; skipped if no disjoint pair exists
                for (auto& c : chunk) {
                    if (!rng.bernoulli(eta)) continue;
                    used[c.vars[0]] = used[c.vars[1]] = false;
                    bool replaced = false;
                    for (int attempt = 0; attempt < 10000; ++attempt) {
                        const auto& s = side[rng.below(2)];
                        const std::uint32_t a = s[rng.below(s.size())];
                        std::uint32_t bi = static_cast<std::uint32_t>(rng.below(s.size() - 1));
                        const std::uint32_t b = s[bi] == a ? s[s.size() - 1] : s[bi];
                        if (used[a] || used[b]) continue;
                        c = edge(a, b);
                        replaced = true;
                        break;
                    }
                    used[c.vars[0]] = used[c.vars[1]] = true;
                    (void)replaced;
                }
            }
        } else {
            // uniform partial matching of size r on the complete graph
            std::vector<std::uint32_t> order = all;
            rng.shuffle(order);
            for (std::uint32_t i = 0; i < r; ++i)
                chunk.push_back(edge(order[2 * i], order[2 * i + 1]));
        }
        res.chunk_sizes.push_back(static_cast<std::uint32_t>(chunk.size()));
        for (auto& c : chunk) res.instance.constraints.push_back(std::move(c));
    }
    return res;
}

Instance direct_edges_randomly(const Instance& cut_instance, std::uint64_t seed) {
    if (cut_instance.family.kind != FamilyKind::Cut)
        throw FamilyError("direct_edges_randomly expects a cut instance");

    Rng rng(seed);
    Instance out;
    out.n = cut_instance.n;
    out.family = make_family(FamilyKind::Dicut, 2);
    out.constraints.reserve(cut_instance.m());
    for (const auto& c : cut_instance.constraints) {
        const bool flip = (rng.next() & 1u) != 0;
        out.constraints.push_back(flip ? edge(c.vars[1], c.vars[0]) : edge(c.vars[0], c.vars[1]));
    }
    return out;
}

Instance gen_bounded_degree(std::uint32_t n, unsigned max_degree, std::uint64_t m,
                            std::uint64_t seed, FamilyKind family, unsigned arity) {
    if (max_degree < 1) throw DomainError("bounded-degree: D must be at least 1");
    const PredicateFamily fam = make_family(family, arity);
    if (n < arity) throw DomainError("bounded-degree: n must be at least the arity");
    if (m < 1) throw DomainError("bounded-degree: m must be at least 1");
    if (m > static_cast<std::uint64_t>(n) * max_degree / arity)
        throw DomainError("bounded-degree: m exceeds floor(n*D/k)");

    Rng rng(seed);
    Instance inst;
    inst.n = n;
    inst.family = fam;
    std::vector<unsigned> occurrences(n + 1, 0);
    // Rejection sampling can wedge near tight packings (m close to nD/k)
    // when every remaining tuple touches a saturated variable, so restart
    // the whole draw after a burst of consecutive rejections.
    int restarts = 0;
    unsigned consecutive_rejects = 0;
    while (inst.constraints.size() < m) {
        if (consecutive_rejects >= 500) {
            if (++restarts > 500)
                throw DomainError("bounded-degree: could not place m constraints under degree bound");
            inst.constraints.clear();
            std::fill(occurrences.begin(), occurrences.end(), 0u);
            consecutive_rejects = 0;
        }
        Constraint c;
        c.vars.reserve(arity);
        while (c.vars.size() < arity) {
            const std::uint32_t v = static_cast<std::uint32_t>(rng.below(n)) + 1;
            if (std::find(c.vars.begin(), c.vars.end(), v) == c.vars.end()) c.vars.push_back(v);
        }
        c.mask = fam.negation_closed ? static_cast<std::uint32_t>(rng.below(1ull << arity)) : 0;
        bool ok = true;
        for (std::uint32_t v : c.vars)
            if (occurrences[v] >= max_degree) ok = false;
        if (!ok) {
            ++consecutive_rejects;
            continue;
        }
        consecutive_rejects = 0;
        for (std::uint32_t v : c.vars) ++occurrences[v];
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

GenResult generate(const GeneratorSpec& spec) {
    GenResult res;
    switch (spec.kind) {
        case GenKind::RandomGraph:
            res.instance = gen_random_graph(spec.n, spec.m, spec.seed, spec.distinct_edges);
            break;
        case GenKind::BipartiteNoisy:
            res = gen_bipartite_noisy(spec.n, spec.m, spec.eta, spec.seed);
            break;
        case GenKind::MatchingChunks:
            res = gen_matching_chunks(spec.n, spec.chunks, spec.alpha, spec.yes_mode, spec.eta,
                                      spec.seed);
            break;
        case GenKind::DirectedFromCut: {
            const Instance base =
                gen_random_graph(spec.n, spec.m, mix2(spec.seed, 0xD1Cu), spec.distinct_edges);
            res.instance = direct_edges_randomly(base, mix2(spec.seed, 0x0D1u));
            break;
        }
        case GenKind::BoundedDegree:
            res.instance =
                gen_bounded_degree(spec.n, spec.max_degree, spec.m, spec.seed, spec.family,
                                   spec.arity);
            break;
    }
    res.instance.validate();
    return res;
}

double percentile(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw DomainError("percentile of an empty sample");
    const double rank = std::ceil(q / 100.0 * static_cast<double>(sorted_values.size()));
    const std::size_t idx =
        static_cast<std::size_t>(std::clamp<double>(rank, 1.0, static_cast<double>(sorted_values.size())));
    return sorted_values[idx - 1];
}

nlohmann::json GapReport::to_json() const {
    nlohmann::json j;
    j["yes_values"] = yes_values;
    j["no_values"] = no_values;
    j["yes_mean"] = yes_mean;
    j["no_mean"] = no_mean;
    j["gap"] = gap;
    return j;
}

GapReport gap_check(const GeneratorSpec& spec_yes, const GeneratorSpec& spec_no, int trials) {
    if (trials < 1) throw DomainError("gap_check needs trials >= 1");

    auto sample = [&](const GeneratorSpec& spec) {
        std::vector<double> values;
        values.reserve(trials);
        for (int i = 0; i < trials; ++i) {
            GeneratorSpec s = spec;
            s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i));
            const GenResult g = generate(s);
            values.push_back(max_value(g.instance).first.to_double());
        }
        std::sort(values.begin(), values.end());
        return values;
    };

    GapReport rep;
    rep.yes_values = sample(spec_yes);
    rep.no_values = sample(spec_no);
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    rep.yes_mean = mean(rep.yes_values);
    rep.no_mean = mean(rep.no_values);
    rep.gap = percentile(rep.yes_values, 5.0) - percentile(rep.no_values, 95.0);
    return rep;
}

} // namespace csplab
