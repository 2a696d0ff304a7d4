#include "csplab/instance.hpp"

#include <fstream>
#include <sstream>

#include "csplab/errors.hpp"

namespace csplab {

void validate_constraint(const Constraint& c, const PredicateFamily& family, std::uint32_t n) {
    if (c.arity() != family.arity)
        throw ShapeError("constraint arity " + std::to_string(c.arity()) +
                         " does not match family arity " + std::to_string(family.arity));
    if (c.mask >> family.arity)
        throw ShapeError("negation mask wider than arity");
    if (!family.negation_closed && c.mask != 0)
        throw ShapeError(std::string(family_name(family.kind)) + " constraints must use the zero mask");
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        if (c.vars[i] < 1 || c.vars[i] > n)
            throw ShapeError("variable index " + std::to_string(c.vars[i]) + " out of range [1," +
                             std::to_string(n) + "]");
        for (std::size_t j = i + 1; j < c.vars.size(); ++j)
            if (c.vars[i] == c.vars[j])
                throw ShapeError("duplicate variable index " + std::to_string(c.vars[i]) +
                                 " in constraint");
    }
}

void Instance::validate() const {
    if (n < 1) throw ShapeError("instance needs n >= 1");
    for (const auto& c : constraints) validate_constraint(c, family, n);
}

std::string write_instance(const Instance& inst) {
    std::string out;
    out += "MAXCSP 1\n";
    out += "family ";
    out += family_name(inst.family.kind);
    out += " k " + std::to_string(inst.family.arity) + "\n";
    out += "n " + std::to_string(inst.n) + " m " + std::to_string(inst.m()) + "\n";
    for (const auto& c : inst.constraints) {
        out += "c ";
        for (unsigned i = 0; i < inst.family.arity; ++i)
            out += ((c.mask >> i) & 1u) ? '1' : '0';
        for (std::uint32_t v : c.vars) out += " " + std::to_string(v);
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw ParseError("");
        return v;
    } catch (...) {
        throw ParseError(std::string("bad ") + what + " '" + s + "'");
    }
}

} // namespace

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of file before ") + what);
        return tokenize(line);
    };

    auto magic = next_line("header");
    if (magic.size() != 2 || magic[0] != "MAXCSP" || magic[1] != "1")
        throw ParseError("missing 'MAXCSP 1' header");

    auto fam = next_line("family line");
    if (fam.size() != 4 || fam[0] != "family" || fam[2] != "k")
        throw ParseError("malformed family line");
    const FamilyKind kind = family_from_name(fam[1]);
    const unsigned arity = static_cast<unsigned>(parse_u64(fam[3], "arity"));

    auto size_line = next_line("size line");
    if (size_line.size() != 4 || size_line[0] != "n" || size_line[2] != "m")
        throw ParseError("malformed size line");
    const std::uint64_t n = parse_u64(size_line[1], "n");
    const std::uint64_t m = parse_u64(size_line[3], "m");
    if (n < 1 || n > 0xFFFFFFFFull) throw ParseError("n out of range");

    Instance inst;
    inst.n = static_cast<std::uint32_t>(n);
    inst.family = make_family(kind, arity);
    inst.constraints.reserve(m);

    for (std::uint64_t i = 0; i < m; ++i) {
        auto toks = next_line("constraint line");
        if (toks.size() != 2 + arity || toks[0] != "c")
            throw ParseError("malformed constraint line " + std::to_string(i + 1));
        const std::string& maskstr = toks[1];
        if (maskstr.size() != arity)
            throw ParseError("mask '" + maskstr + "' has wrong length (want " +
                             std::to_string(arity) + ")");
        Constraint c;
        for (unsigned b = 0; b < arity; ++b) {
            if (maskstr[b] == '1')
                c.mask |= (1u << b);
            else if (maskstr[b] != '0')
                throw ParseError("mask '" + maskstr + "' is not binary");
        }
        c.vars.reserve(arity);
        for (unsigned j = 0; j < arity; ++j) {
            std::uint64_t v = parse_u64(toks[2 + j], "variable index");
            c.vars.push_back(static_cast<std::uint32_t>(v));
        }
        try {
            validate_constraint(c, inst.family, inst.n);
        } catch (const ShapeError& e) {
            throw ParseError("constraint line " + std::to_string(i + 1) + ": " + e.what());
        }
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

Instance read_instance_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open instance file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_instance(ss.str());
}

void write_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write instance file '" + path + "'");
    f << write_instance(inst);
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string instance_digest(const Instance& inst) {
    std::uint64_t h = fnv1a64(write_instance(inst));
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = d[h & 0xf];
        h >>= 4;
    }
    return s;
}

} // namespace csplab
