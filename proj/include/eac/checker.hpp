#pragma once

// Freeness and rotundity of L x W inside A = E_1 x ... x E_g.
//
// With pairwise non-isogenous factors the connected abelian subvarieties are exactly the coordinate subproducts B_S = prod_{j in S} E_j,
// so every quantifier over B becomes a loop over subsets S of {0, ..., g-1}.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fiber.hpp"
#include "subspace.hpp"

namespace eac
{

enum class WKind { segre_hypersurface, whole, point };

inline const char *to_string(WKind k)
{
    switch (k) {
    case WKind::segre_hypersurface:
        return "segre-hypersurface";
    case WKind::whole:
        return "whole";
    case WKind::point:
        return "point";
    }
    return "?";
}

struct WDescriptor {
    WKind kind = WKind::segre_hypersurface;
    std::size_t dim = 1;
    /// Defining polynomial when kind is segre-hypersurface.
    std::optional<SegrePolynomial> F;
    /// Fibre counts (m, n) of a curve in E_1 x E_2.
    std::optional<Bidegree> bidegree;
    /// User assertion that W lies in no translate of a proper abelian subvariety.
    std::optional<bool> assert_free;
    /// User assertion that dim q_B(W) = min(dim W, dim A/B) for every B.
    std::optional<bool> assert_nondegenerate;

    static WDescriptor whole(std::size_t g)
    {
        WDescriptor w;
        w.kind = WKind::whole;
        w.dim = g;
        return w;
    }
    static WDescriptor point()
    {
        WDescriptor w;
        w.kind = WKind::point;
        w.dim = 0;
        return w;
    }
    static WDescriptor curve(SegrePolynomial F, std::optional<Bidegree> bd)
    {
        WDescriptor w;
        w.F = std::move(F);
        w.bidegree = bd;
        return w;
    }
};

/// Indices j in S, as a bit mask over the factors.
using FactorSubset = std::uint32_t;

inline std::string subset_name(FactorSubset S, std::size_t g)
{
    if (S == 0) return "B = 0";
    if (S == (1u << g) - 1u) return "B = A";
    std::string out = "B = ";
    bool first = true;
    for (std::size_t j = 0; j < g; ++j)
        if (S >> j & 1u) {
            out += (first ? "E" : " x E") + std::to_string(j + 1);
            first = false;
        }
    return out;
}

/// Lie algebra of B_S: the coordinate subspace spanned by e_j, j in S.
inline ComplexSubspace coordinate_subspace(FactorSubset S, std::size_t g)
{
    std::vector<std::vector<ComplexMultiQuad>> cols;
    for (std::size_t j = 0; j < g; ++j)
        if (S >> j & 1u) {
            std::vector<ComplexMultiQuad> e(g);
            e[j] = ComplexMultiQuad(1);
            cols.push_back(e);
        }
    if (cols.empty()) return ComplexSubspace::zero(g);
    return ComplexSubspace::span(Matrix<ComplexMultiQuad>::from_columns(cols, g));
}

struct UnsupportedVariety : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct AssertionContradicted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GenericityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Tri { yes, no, indeterminate };

inline const char *to_string(Tri t)
{
    return t == Tri::yes ? "yes" : t == Tri::no ? "no" : "indeterminate";
}

struct FreeWitness {
    FactorSubset subset = 0;
    /// "L" when L lies in Lie(B), "W" when W lies in a translate of B.
    std::string side;
};

struct RotundWitness {
    FactorSubset subset = 0;
    std::size_t required = 0;
    std::size_t achieved = 0;
};

struct Verdict {
    Tri free = Tri::indeterminate;
    Tri rotund = Tri::indeterminate;
    std::optional<FreeWitness> free_witness;
    std::optional<RotundWitness> rotund_witness;
    std::string free_reason;
    std::string rotund_reason;
    std::size_t dim_L = 0, dim_W = 0, g = 0;

    Tri overall() const
    {
        if (free == Tri::no || rotund == Tri::no) return Tri::no;
        if (free == Tri::yes && rotund == Tri::yes) return Tri::yes;
        return Tri::indeterminate;
    }
};

inline void require_supported(const ProductVariety &A)
{
    if (!A.subvarieties_are_coordinate())
        throw UnsupportedVariety("abelian subvarieties are enumerable only for pairwise non-isogenous factors; "
                                 "isogenous factors give non-coordinate subvarieties, which are not supported");
}

/// Complex dimension of the image of L in C^g / Lie(B_S): rank of L's basis with the S rows deleted.
inline std::size_t projected_dim(const ComplexSubspace &L, FactorSubset S)
{
    const std::size_t g = L.g();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < g; ++j)
        if (!(S >> j & 1u)) keep.push_back(j);
    if (keep.empty() || L.dim() == 0) return 0;
    return rank(select_rows(L.basis(), keep));
}

namespace detail
{

// dim q_S(W) for the projection W -> A / B_S, or nullopt when it cannot be decided.
inline std::optional<std::size_t> projected_dim_W(const WDescriptor &W, FactorSubset S, std::size_t g)
{
    const std::size_t quotient = g - static_cast<std::size_t>(std::popcount(S));
    switch (W.kind) {
    case WKind::whole:
        return quotient;
    case WKind::point:
        return 0;
    case WKind::segre_hypersurface:
        break;
    }
    if (quotient == 0) return 0;
    if (g == 2 && W.dim == 1 && W.bidegree) {
        if (S == 0) return 1;
        // W -> E_2 has degree m; W -> E_1 has degree n.
        if (S == 0b01u) return W.bidegree->m != 0 ? 1u : 0u;
        return W.bidegree->n != 0 ? 1u : 0u;
    }
    if (W.assert_nondegenerate.value_or(false)) return std::min(W.dim, quotient);
    return std::nullopt;
}

// Sampled points of W must move in every factor when freeness is asserted. A linear
// Segre form meets a fibre in at most 3 points, so a coordinate taking at most 3
// values over 12 samples means W lies in finitely many translates of a factor.
inline void spot_check_free(const WDescriptor &W, const ProductVariety &A)
{
    if (!W.F || A.g() != 2) return;
    ProductExp<double> exp(A);
    const auto pts = sample_on_curve(*W.F, exp, 12, 0x5eed);
    if (pts.size() < 8) return;
    for (std::size_t j = 0; j < 2; ++j) {
        ProductVariety Ej({A.factor(j)}, true);
        std::vector<std::complex<double>> distinct;
        for (const auto &p : pts) {
            bool seen = false;
            for (auto d : distinct) {
                std::vector<std::complex<double>> a{d}, b{p[j]};
                seen = seen || Ej.torus_distance<double>(a, b) < 1e-6;
            }
            if (!seen) distinct.push_back(p[j]);
        }
        if (distinct.size() <= 3)
            throw AssertionContradicted("W asserted free, but sampled points of W have only " +
                                        std::to_string(distinct.size()) + " distinct E" + std::to_string(j + 1) +
                                        "-coordinates, e.g. " + std::to_string(pts[0][j].real()) + "+" +
                                        std::to_string(pts[0][j].imag()) + "i");
    }
}

} // namespace detail

inline Verdict check_free(const ComplexSubspace &L, const WDescriptor &W, const ProductVariety &A, Verdict v = {})
{
    require_supported(A);
    const std::size_t g = A.g();
    v.g = g;
    v.dim_L = L.dim();
    v.dim_W = W.dim;
    const FactorSubset full = (1u << g) - 1u;
    for (FactorSubset S = 1; S < full; ++S) {
        if (coordinate_subspace(S, g).contains(L)) {
            v.free = Tri::no;
            v.free_witness = FreeWitness{S, "L"};
            v.free_reason = "L lies in Lie(" + subset_name(S, g).substr(4) + ")";
            return v;
        }
    }
    switch (W.kind) {
    case WKind::whole:
        v.free = Tri::yes;
        return v;
    case WKind::point:
        if (g >= 2) {
            v.free = Tri::no;
            v.free_witness = FreeWitness{1u, "W"};
            v.free_reason = "W is a point, a translate of every abelian subvariety's origin";
        } else {
            v.free = Tri::yes;
        }
        return v;
    case WKind::segre_hypersurface:
        break;
    }
    if (g == 2 && W.bidegree) {
        if (W.bidegree->m == 0 || W.bidegree->n == 0) {
            // m = 0: W misses the generic E_1-fibre, so it is E_1 x {pt}; n = 0 gives {pt} x E_2.
            const FactorSubset S = W.bidegree->m == 0 ? 0b01u : 0b10u;
            v.free = Tri::no;
            v.free_witness = FreeWitness{S, "W"};
            v.free_reason = "W is a translate of " + subset_name(S, g).substr(4);
            return v;
        }
        v.free = Tri::yes;
        return v;
    }
    if (W.assert_free) {
        if (*W.assert_free) detail::spot_check_free(W, A);
        v.free = *W.assert_free ? Tri::yes : Tri::no;
        if (!*W.assert_free) v.free_reason = "W asserted non-free";
        return v;
    }
    v.free = Tri::indeterminate;
    v.free_reason = "bidegree of W missing and no freeness assertion given";
    return v;
}

inline Verdict check_rotund(const ComplexSubspace &L, const WDescriptor &W, const ProductVariety &A, Verdict v = {})
{
    require_supported(A);
    const std::size_t g = A.g();
    v.g = g;
    v.dim_L = L.dim();
    v.dim_W = W.dim;
    bool undecided = false;
    for (FactorSubset S = 0; S < (1u << g); ++S) {
        const std::size_t required = g - static_cast<std::size_t>(std::popcount(S));
        const auto qW = detail::projected_dim_W(W, S, g);
        if (!qW) {
            undecided = true;
            continue;
        }
        const std::size_t achieved = projected_dim(L, S) + *qW;
        if (achieved < required) {
            v.rotund = Tri::no;
            v.rotund_witness = RotundWitness{S, required, achieved};
            v.rotund_reason = subset_name(S, g) + ": projection has dimension " + std::to_string(achieved) + " < " +
                           std::to_string(required);
            return v;
        }
    }
    v.rotund = undecided ? Tri::indeterminate : Tri::yes;
    if (undecided) v.rotund_reason = "dimension of projections of W unknown: give a bidegree or assert nondegeneracy";
    return v;
}

inline Verdict check(const ComplexSubspace &L, const WDescriptor &W, const ProductVariety &A)
{
    return check_rotund(L, W, A, check_free(L, W, A));
}

/// Cuts L by seeded random integer hyperplanes until dim L'' + dim W = g, keeping L'' x W
/// free and rotund after every cut.
inline ComplexSubspace reduce_L(const ComplexSubspace &L, const WDescriptor &W, const ProductVariety &A,
                                std::uint64_t seed, int max_retries = 64)
{
    const std::size_t g = A.g();
    if (check(L, W, A).overall() != Tri::yes) throw PreconditionError("reduce_L needs a free and rotund L x W");
    if (L.dim() + W.dim < g) throw PreconditionError("dim L + dim W < g");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-3, 3);
    ComplexSubspace current = L;
    int retries = 0;
    while (current.dim() + W.dim > g) {
        if (retries > max_retries) throw GenericityFailure("genericity failure; resample");
        Matrix<ComplexMultiQuad> eq(1, g);
        bool nonzero = false;
        for (std::size_t j = 0; j < g; ++j) {
            const int c = coeff(rng);
            eq(0, j) = ComplexMultiQuad(c);
            nonzero |= c != 0;
        }
        ++retries;
        if (!nonzero) continue;
        // Equations of the cut: those of `current` plus the new hyperplane.
        auto eqs = current.equations();
        if (current.dim() == g) eqs = Matrix<ComplexMultiQuad>(0, g);
        eqs.append_row(eq.row(0));
        auto cut = ComplexSubspace::cut_out(eqs, g);
        if (cut.dim() + 1 != current.dim()) continue;
        if (check(cut, W, A).overall() != Tri::yes) continue;
        current = cut;
    }
    return current;
}

} // namespace eac
