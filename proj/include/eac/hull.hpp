#pragma once

// Rational hulls: the smallest lattice-rational real subspace T containing a
// given subspace, so that exp_A(T) is the closure of exp_A(L), and the chain
// L = L_0 <= T_0 <= L_1 <= T_1 <= ... obtained by alternating hulls with
// complexification.

#include <vector>

#include "subspace.hpp"

namespace eac
{

struct HullResult {
    RealSubspace T;
    /// Rational covectors (rows, reduced echelon) whose common zero set is T.
    Matrix<Rational> equations;

    std::size_t dim_T() const
    {
        return T.dim();
    }
};

namespace detail
{

inline Matrix<MultiQuad> lift(const Matrix<Rational> &m)
{
    Matrix<MultiQuad> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = MultiQuad(m(r, c));
    return out;
}

} // namespace detail

/// Smallest Q-rational subspace (in lattice coordinates) containing V.
///
/// A rational covector r kills a vector v = sum_S v_S sqrt(S) iff it kills every
/// rational component v_S, since the sqrt(S) are Q-linearly independent. The
/// equations of the hull are therefore the rational kernel of the stacked
/// components of a basis of V.
inline HullResult rational_hull(const RealSubspace &V)
{
    const std::size_t n = V.ambient_dim();
    Matrix<Rational> stacked(0, n);
    for (std::size_t k = 0; k < V.dim(); ++k) {
        auto v = V.basis().col(k);
        std::vector<std::uint64_t> keys;
        for (const auto &e : v)
            for (const auto &[key, q] : e.terms()) keys.push_back(key);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (auto key : keys) {
            std::vector<Rational> row(n);
            for (std::size_t c = 0; c < n; ++c) row[c] = v[c].coeff(key);
            stacked.append_row(row);
        }
    }
    Matrix<Rational> eqs(0, n);
    if (stacked.rows() == 0) {
        eqs = Matrix<Rational>::identity(n);
    } else {
        auto ker = null_space(stacked);
        if (ker.cols() > 0) eqs = row_space_basis(ker.transpose());
    }
    return {RealSubspace::cut_out(detail::lift(eqs), n), eqs};
}

inline HullResult rational_hull(const ComplexSubspace &L, const ProductVariety &A)
{
    return rational_hull(L.realify(A));
}

/// T + iT, the smallest complex subspace containing T.
inline ComplexSubspace complexification(const RealSubspace &T, const ProductVariety &A)
{
    return complex_span(T, A);
}

struct HullChain {
    /// L_0, L_1, ..., L_k.
    std::vector<ComplexSubspace> complex_members;
    /// T_0, ..., T_{k-1} (plus the stabilised hull when the chain stalls below C^g).
    std::vector<HullResult> hulls;
    std::size_t k = 0;
    /// True when the chain reached a proper subspace that is its own hull: that subspace is
    /// the Lie algebra of an abelian subvariety containing L, so L x W is not free.
    bool stalled = false;

    bool reaches_everything() const
    {
        return !stalled;
    }
};

inline HullChain hull_chain(const ComplexSubspace &L, const ProductVariety &A)
{
    HullChain chain;
    chain.complex_members.push_back(L);
    ComplexSubspace current = L;
    while (current.dim() < A.g()) {
        auto hull = rational_hull(current, A);
        const bool fixed = hull.T.dim() == 2 * current.dim();
        chain.hulls.push_back(hull);
        if (fixed) {
            chain.stalled = true;
            break;
        }
        current = complexification(hull.T, A);
        chain.complex_members.push_back(current);
    }
    chain.k = chain.complex_members.size() - 1;
    return chain;
}

} // namespace eac
