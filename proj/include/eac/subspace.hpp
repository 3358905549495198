#pragma once

// Exact real subspaces of R^{2g} (lattice coordinates) and complex subspaces
// of C^g (standard coordinates).

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "variety.hpp"

namespace eac
{

class RealSubspace
{
public:
    /// The span of the given columns; dependent columns are dropped.
    static RealSubspace span(const Matrix<MultiQuad> &vectors)
    {
        RealSubspace s;
        s.m_ambient = vectors.rows();
        s.m_basis = select_columns(vectors, independent_columns(vectors));
        return s;
    }
    static RealSubspace whole(std::size_t ambient)
    {
        return span(Matrix<MultiQuad>::identity(ambient));
    }
    static RealSubspace zero(std::size_t ambient)
    {
        RealSubspace s;
        s.m_ambient = ambient;
        s.m_basis = Matrix<MultiQuad>(ambient, 0);
        return s;
    }
    /// Common zero set of the rows of `equations`.
    static RealSubspace cut_out(const Matrix<MultiQuad> &equations, std::size_t ambient)
    {
        if (equations.rows() == 0) return whole(ambient);
        RealSubspace s;
        s.m_ambient = ambient;
        s.m_basis = null_space(equations);
        return s;
    }

    std::size_t ambient_dim() const
    {
        return m_ambient;
    }
    std::size_t dim() const
    {
        return m_basis.cols();
    }
    std::size_t codim() const
    {
        return m_ambient - dim();
    }
    const Matrix<MultiQuad> &basis() const
    {
        return m_basis;
    }

    /// Canonical equations: the reduced row echelon basis of the annihilator.
    Matrix<MultiQuad> equations() const
    {
        if (dim() == 0) return Matrix<MultiQuad>::identity(m_ambient);
        auto ann = null_space(m_basis.transpose());
        if (ann.cols() == 0) return Matrix<MultiQuad>(0, m_ambient);
        return row_space_basis(ann.transpose());
    }

    bool contains(const RealSubspace &o) const
    {
        if (o.dim() == 0) return true;
        return rank(m_basis.hcat(o.m_basis)) == dim();
    }
    bool contains_vector(const std::vector<MultiQuad> &v) const
    {
        return rank(m_basis.hcat(Matrix<MultiQuad>::from_columns({v}, m_ambient))) == dim();
    }
    friend bool operator==(const RealSubspace &a, const RealSubspace &b)
    {
        return a.m_ambient == b.m_ambient && a.dim() == b.dim() && a.contains(b);
    }

    /// True when the subspace has a basis in Q^{2g}, i.e. it is rational for the lattice.
    bool is_rational() const
    {
        auto eqs = equations();
        for (std::size_t r = 0; r < eqs.rows(); ++r)
            for (std::size_t c = 0; c < eqs.cols(); ++c)
                if (!eqs(r, c).is_rational()) return false;
        return true;
    }

private:
    std::size_t m_ambient = 0;
    Matrix<MultiQuad> m_basis;
};

class ComplexSubspace
{
public:
    static ComplexSubspace span(const Matrix<ComplexMultiQuad> &vectors)
    {
        ComplexSubspace s;
        s.m_g = vectors.rows();
        s.m_basis = select_columns(vectors, independent_columns(vectors));
        return s;
    }
    static ComplexSubspace whole(std::size_t g)
    {
        return span(Matrix<ComplexMultiQuad>::identity(g));
    }
    static ComplexSubspace zero(std::size_t g)
    {
        ComplexSubspace s;
        s.m_g = g;
        s.m_basis = Matrix<ComplexMultiQuad>(g, 0);
        return s;
    }
    static ComplexSubspace cut_out(const Matrix<ComplexMultiQuad> &equations, std::size_t g)
    {
        if (equations.rows() == 0) return whole(g);
        ComplexSubspace s;
        s.m_g = g;
        s.m_basis = null_space(equations);
        return s;
    }

    std::size_t g() const
    {
        return m_g;
    }
    std::size_t dim() const
    {
        return m_basis.cols();
    }
    std::size_t codim() const
    {
        return m_g - dim();
    }
    const Matrix<ComplexMultiQuad> &basis() const
    {
        return m_basis;
    }

    /// Basis in column echelon form: column k has a 1 at pivot coordinate pivots()[k]
    /// and zeros at the other pivot coordinates.
    Matrix<ComplexMultiQuad> echelon_basis() const
    {
        return row_space_basis(m_basis.transpose()).transpose();
    }
    std::vector<std::size_t> pivots() const
    {
        auto t = m_basis.transpose();
        return row_reduce(t);
    }

    /// Canonical complex equations (rows), reduced row echelon so each starts with 1.
    Matrix<ComplexMultiQuad> equations() const
    {
        if (dim() == 0) return Matrix<ComplexMultiQuad>::identity(m_g);
        auto ann = null_space(m_basis.transpose());
        if (ann.cols() == 0) return Matrix<ComplexMultiQuad>(0, m_g);
        return row_space_basis(ann.transpose());
    }

    bool contains(const ComplexSubspace &o) const
    {
        if (o.dim() == 0) return true;
        return rank(m_basis.hcat(o.m_basis)) == dim();
    }
    friend bool operator==(const ComplexSubspace &a, const ComplexSubspace &b)
    {
        return a.m_g == b.m_g && a.dim() == b.dim() && a.contains(b);
    }

    /// The underlying real subspace in lattice coordinates, spanned by v and i*v.
    RealSubspace realify(const ProductVariety &A) const
    {
        if (A.g() != m_g) throw std::invalid_argument("subspace and variety dimensions differ");
        Matrix<MultiQuad> vecs(2 * m_g, 2 * dim());
        for (std::size_t k = 0; k < dim(); ++k) {
            auto v = m_basis.col(k);
            auto x = A.to_lattice_coords_exact(v);
            for (auto &e : v) e = e * ComplexMultiQuad::imag_unit();
            auto y = A.to_lattice_coords_exact(v);
            for (std::size_t r = 0; r < 2 * m_g; ++r) {
                vecs(r, 2 * k) = x[r];
                vecs(r, 2 * k + 1) = y[r];
            }
        }
        return RealSubspace::span(vecs);
    }

    /// Real and imaginary parts of the canonical complex equations, as covectors in
    /// lattice coordinates: rows [Re l_1, ..., Re l_d] and [Im l_1, ..., Im l_d].
    std::pair<Matrix<MultiQuad>, Matrix<MultiQuad>> realified_equations(const ProductVariety &A) const
    {
        auto eqs = equations();
        Matrix<MultiQuad> re(eqs.rows(), 2 * m_g), im(eqs.rows(), 2 * m_g);
        for (std::size_t r = 0; r < eqs.rows(); ++r) {
            for (std::size_t j = 0; j < m_g; ++j) {
                // l_j z_j = l_j a_j + l_j tau_j b_j
                const auto &l = eqs(r, j);
                auto lt = l * A.factor(j).tau_exact();
                re(r, 2 * j) = l.re;
                im(r, 2 * j) = l.im;
                re(r, 2 * j + 1) = lt.re;
                im(r, 2 * j + 1) = lt.im;
            }
        }
        return {re, im};
    }

    /// Numeric copy of the basis.
    std::vector<std::vector<std::complex<double>>> numeric_basis() const
    {
        std::vector<std::vector<std::complex<double>>> out(dim(), std::vector<std::complex<double>>(m_g));
        for (std::size_t k = 0; k < dim(); ++k)
            for (std::size_t j = 0; j < m_g; ++j) out[k][j] = m_basis(j, k).to_complex();
        return out;
    }

private:
    std::size_t m_g = 0;
    Matrix<ComplexMultiQuad> m_basis;
};

/// Interprets a real subspace of lattice coordinates as a subset of C^g and returns
/// the complex span of its vectors; equals the input when the input is i-invariant.
inline ComplexSubspace complex_span(const RealSubspace &T, const ProductVariety &A)
{
    Matrix<ComplexMultiQuad> vecs(A.g(), T.dim());
    for (std::size_t k = 0; k < T.dim(); ++k) {
        auto z = A.from_lattice_coords_exact(T.basis().col(k));
        for (std::size_t j = 0; j < A.g(); ++j) vecs(j, k) = z[j];
    }
    if (T.dim() == 0) return ComplexSubspace::zero(A.g());
    return ComplexSubspace::span(vecs);
}

inline std::string to_string(const Matrix<MultiQuad> &m)
{
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += r ? ", [" : "[";
        for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + m(r, c).str();
        out += "]";
    }
    return out + "]";
}

} // namespace eac
