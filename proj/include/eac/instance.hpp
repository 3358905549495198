#pragma once

// Instance files: JSON descriptions of (A, L, W, solver settings), validated strictly.
// Every error message starts with the JSON path of the offending field.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "checker.hpp"
#include "solver.hpp"

namespace eac
{

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Instance {
    std::string id;
    std::string description;
    std::vector<EllipticFactor> factors;
    bool pairwise_nonisogenous = false;
    bool no_cm = false;
    /// Basis vectors of L as written in the file.
    std::vector<std::vector<std::string>> L_literals;
    ComplexSubspace L;
    WDescriptor W;
    /// True when the file asks for the fibre counts to be measured rather than stating them.
    bool measure_bidegree = false;
    SolverOptions solver;
    /// Whether solver.target_count was given in the file.
    bool target_given = false;
    /// FNV-1a hash of the canonical serialisation of the file.
    std::uint64_t hash = 0;

    ProductVariety variety() const
    {
        return ProductVariety(factors, pairwise_nonisogenous);
    }
};

inline std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

namespace detail
{

using nlohmann::json;

inline void allow_keys(const json &obj, const std::string &path, std::initializer_list<const char *> keys)
{
    if (!obj.is_object()) throw InstanceError(path + ": expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw InstanceError(path + "." + it.key() + ": unknown key");
}

inline const json &need(const json &obj, const std::string &path, const char *key)
{
    if (!obj.contains(key)) throw InstanceError(path + "." + key + ": missing");
    return obj.at(key);
}

inline std::string need_string(const json &v, const std::string &path)
{
    if (!v.is_string()) throw InstanceError(path + ": expected a string");
    return v.get<std::string>();
}

inline bool need_bool(const json &v, const std::string &path)
{
    if (!v.is_boolean()) throw InstanceError(path + ": expected true or false");
    return v.get<bool>();
}

inline long long need_int(const json &v, const std::string &path)
{
    if (!v.is_number_integer()) throw InstanceError(path + ": expected an integer");
    return v.get<long long>();
}

inline double need_number(const json &v, const std::string &path)
{
    if (!v.is_number()) throw InstanceError(path + ": expected a number");
    return v.get<double>();
}

template <typename F>
auto wrap(const std::string &path, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (const InstanceError &) {
        throw;
    } catch (const std::exception &e) {
        throw InstanceError(path + ": " + e.what());
    }
}

inline EllipticFactor parse_factor(const json &f, const std::string &path, bool no_cm)
{
    allow_keys(f, path, {"tau_re", "tau_im"});
    const auto re_path = path + ".tau_re";
    Rational re = wrap(re_path, [&] { return parse_rational(need_string(need(f, path, "tau_re"), re_path)); });
    const auto &im = need(f, path, "tau_im");
    const auto im_path = path + ".tau_im";
    allow_keys(im, im_path, {"d", "q"});
    const long long d = need_int(need(im, im_path, "d"), im_path + ".d");
    if (d < 1 || !is_squarefree(static_cast<std::uint64_t>(d))) throw InstanceError(im_path + ".d: expected a squarefree integer >= 1");
    Rational q = wrap(im_path + ".q", [&] { return parse_rational(need_string(need(im, im_path, "q"), im_path + ".q")); });
    return wrap(path, [&] { return EllipticFactor(re, MultiQuad::sqrt(static_cast<std::uint64_t>(d), q), no_cm); });
}

inline SegrePolynomial parse_polynomial(const json &coeffs, const std::string &path)
{
    if (!coeffs.is_array() || coeffs.empty()) throw InstanceError(path + ": expected a nonempty array");
    std::vector<SegrePolynomial::Term> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const auto p = path + "[" + std::to_string(k) + "]";
        const auto &c = coeffs[k];
        allow_keys(c, p, {"monomial", "re", "im"});
        const auto &mono = need(c, p, "monomial");
        if (!mono.is_array() || mono.size() != 9) throw InstanceError(p + ".monomial: expected 9 exponents (Z0..Z8)");
        SegrePolynomial::Term t;
        for (int i = 0; i < 9; ++i) {
            const long long e = need_int(mono[i], p + ".monomial[" + std::to_string(i) + "]");
            if (e < 0 || e > 64) throw InstanceError(p + ".monomial[" + std::to_string(i) + "]: exponent out of range");
            t.monomial[i] = static_cast<int>(e);
        }
        const double re = need_number(need(c, p, "re"), p + ".re");
        const double im = c.contains("im") ? need_number(c.at("im"), p + ".im") : 0.0;
        t.coeff = {re, im};
        terms.push_back(t);
    }
    return wrap(path, [&] { return SegrePolynomial(std::move(terms)); });
}

} // namespace detail

inline Instance parse_instance(const nlohmann::json &doc)
{
    using namespace detail;
    const std::string root = "$";
    allow_keys(doc, root, {"id", "description", "factors", "flags", "L", "W", "solver"});
    Instance inst;
    if (doc.contains("id")) inst.id = need_string(doc.at("id"), "$.id");
    if (doc.contains("description")) inst.description = need_string(doc.at("description"), "$.description");

    const auto &flags = need(doc, root, "flags");
    allow_keys(flags, "$.flags", {"pairwise_nonisogenous", "no_cm"});
    inst.pairwise_nonisogenous = need_bool(need(flags, "$.flags", "pairwise_nonisogenous"), "$.flags.pairwise_nonisogenous");
    inst.no_cm = need_bool(need(flags, "$.flags", "no_cm"), "$.flags.no_cm");

    const auto &factors = need(doc, root, "factors");
    if (!factors.is_array() || factors.empty()) throw InstanceError("$.factors: expected a nonempty array");
    if (factors.size() > 16) throw InstanceError("$.factors: at most 16 factors are supported");
    for (std::size_t j = 0; j < factors.size(); ++j)
        inst.factors.push_back(parse_factor(factors[j], "$.factors[" + std::to_string(j) + "]", inst.no_cm));
    const std::size_t g = inst.factors.size();

    const auto &L = need(doc, root, "L");
    if (!L.is_array()) throw InstanceError("$.L: expected an array of basis vectors");
    std::vector<std::vector<ComplexMultiQuad>> cols;
    for (std::size_t k = 0; k < L.size(); ++k) {
        const auto p = "$.L[" + std::to_string(k) + "]";
        if (!L[k].is_array() || L[k].size() != g) throw InstanceError(p + ": expected " + std::to_string(g) + " entries");
        std::vector<std::string> lits;
        std::vector<ComplexMultiQuad> col;
        for (std::size_t j = 0; j < g; ++j) {
            const auto pj = p + "[" + std::to_string(j) + "]";
            lits.push_back(need_string(L[k][j], pj));
            col.push_back(wrap(pj, [&] { return parse_complex_literal(lits.back()); }));
        }
        inst.L_literals.push_back(lits);
        cols.push_back(col);
    }
    inst.L = cols.empty() ? ComplexSubspace::zero(g) : ComplexSubspace::span(Matrix<ComplexMultiQuad>::from_columns(cols, g));
    if (inst.L.dim() != cols.size()) throw InstanceError("$.L: basis vectors are linearly dependent");

    const auto &W = need(doc, root, "W");
    allow_keys(W, "$.W", {"kind", "coeffs", "dim", "bidegree", "assert_free", "assert_nondegenerate"});
    const auto kind = need_string(need(W, "$.W", "kind"), "$.W.kind");
    if (kind == "whole") {
        inst.W = WDescriptor::whole(g);
    } else if (kind == "point") {
        inst.W = WDescriptor::point();
    } else if (kind == "segre-hypersurface") {
        if (g != 2) throw InstanceError("$.W.kind: segre-hypersurface needs exactly 2 factors");
        inst.W.kind = WKind::segre_hypersurface;
        inst.W.F = parse_polynomial(need(W, "$.W", "coeffs"), "$.W.coeffs");
        inst.W.dim = 1;
    } else {
        throw InstanceError("$.W.kind: expected \"segre-hypersurface\", \"whole\" or \"point\"");
    }
    if (W.contains("dim")) {
        const long long d = need_int(W.at("dim"), "$.W.dim");
        if (d != static_cast<long long>(inst.W.dim))
            throw InstanceError("$.W.dim: " + kind + " has dimension " + std::to_string(inst.W.dim));
    } else if (inst.W.kind == WKind::segre_hypersurface) {
        throw InstanceError("$.W.dim: missing");
    }
    if (inst.W.kind != WKind::segre_hypersurface && W.contains("coeffs")) throw InstanceError("$.W.coeffs: only for segre-hypersurface");
    if (W.contains("bidegree")) {
        if (inst.W.kind != WKind::segre_hypersurface) throw InstanceError("$.W.bidegree: only for segre-hypersurface");
        const auto &b = W.at("bidegree");
        if (b.is_string() && b.get<std::string>() == "measure") {
            inst.measure_bidegree = true;
        } else {
            if (!b.is_array() || b.size() != 2) throw InstanceError("$.W.bidegree: expected [m, n] or \"measure\"");
            const long long m = need_int(b[0], "$.W.bidegree[0]"), n = need_int(b[1], "$.W.bidegree[1]");
            if (m < 0 || n < 0) throw InstanceError("$.W.bidegree: counts must be nonnegative");
            inst.W.bidegree = Bidegree{static_cast<int>(m), static_cast<int>(n)};
        }
    }
    if (W.contains("assert_free")) inst.W.assert_free = need_bool(W.at("assert_free"), "$.W.assert_free");
    if (W.contains("assert_nondegenerate"))
        inst.W.assert_nondegenerate = need_bool(W.at("assert_nondegenerate"), "$.W.assert_nondegenerate");

    if (doc.contains("solver")) {
        const auto &s = doc.at("solver");
        allow_keys(s, "$.solver", {"tolerance", "grid", "budget_seconds", "max_cells", "seed", "target_count", "scan_threshold"});
        auto &o = inst.solver;
        auto positive = [](double v, const std::string &p) {
            if (!(v > 0)) throw InstanceError(p + ": must be positive");
            return v;
        };
        if (s.contains("tolerance")) o.tolerance = positive(need_number(s.at("tolerance"), "$.solver.tolerance"), "$.solver.tolerance");
        if (s.contains("grid")) o.grid = static_cast<int>(positive(static_cast<double>(need_int(s.at("grid"), "$.solver.grid")), "$.solver.grid"));
        if (s.contains("budget_seconds"))
            o.budget_seconds = positive(need_number(s.at("budget_seconds"), "$.solver.budget_seconds"), "$.solver.budget_seconds");
        if (s.contains("max_cells"))
            o.max_cells = static_cast<int>(positive(static_cast<double>(need_int(s.at("max_cells"), "$.solver.max_cells")), "$.solver.max_cells"));
        if (s.contains("seed")) {
            const long long seed = need_int(s.at("seed"), "$.solver.seed");
            if (seed < 0) throw InstanceError("$.solver.seed: must be nonnegative");
            o.seed = static_cast<std::uint64_t>(seed);
        }
        inst.target_given = s.contains("target_count");
        if (s.contains("target_count"))
            o.target_count =
                static_cast<int>(positive(static_cast<double>(need_int(s.at("target_count"), "$.solver.target_count")), "$.solver.target_count"));
        if (s.contains("scan_threshold"))
            o.scan_threshold = positive(need_number(s.at("scan_threshold"), "$.solver.scan_threshold"), "$.solver.scan_threshold");
    }
    inst.hash = fnv1a64(doc.dump());
    return inst;
}

inline Instance parse_instance_text(const std::string &text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw InstanceError(std::string("$: invalid JSON: ") + e.what());
    }
    return parse_instance(doc);
}

inline Instance load_instance(const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw InstanceError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_instance_text(ss.str());
    } catch (const InstanceError &e) {
        throw InstanceError(path + ": " + e.what());
    }
}

} // namespace eac
