#pragma once

// Products of elliptic curves A = E_1 x ... x E_g with E_j = C / (Z + tau_j Z).
//
// Lattice coordinates: a point z of C^g is written z_j = a_j + b_j * tau_j and
// identified with (a_1, b_1, ..., a_g, b_g) in R^{2g}. In this chart the period
// lattice is exactly Z^{2g} and the torus has covolume 1; every real subspace,
// form and homology class in the library is expressed in it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "complex_multiquad.hpp"
#include "matrix.hpp"

namespace eac
{

struct EllipticFactor {
    Rational tau_re;
    MultiQuad tau_im;
    /// User assertion that End(E) = Z.
    bool no_cm = true;

    EllipticFactor(Rational re, MultiQuad im, bool no_cm_ = true)
        : tau_re(std::move(re)), tau_im(std::move(im)), no_cm(no_cm_)
    {
        if (tau_im.is_zero() || tau_im.to_long_double() <= 0)
            throw std::invalid_argument("period ratio must have positive imaginary part, got Im(tau) = " + tau_im.str());
    }

    ComplexMultiQuad tau_exact() const
    {
        return {MultiQuad(tau_re), tau_im};
    }
    std::complex<double> tau() const
    {
        return {static_cast<double>(to_long_double(tau_re)), tau_im.to_double()};
    }
    std::complex<long double> tau_ld() const
    {
        return {to_long_double(tau_re), tau_im.to_long_double()};
    }
};

class ProductVariety
{
public:
    ProductVariety(std::vector<EllipticFactor> factors, bool pairwise_nonisogenous)
        : m_factors(std::move(factors)), m_pairwise_nonisogenous(pairwise_nonisogenous)
    {
        if (m_factors.empty()) throw std::invalid_argument("a product variety needs at least one factor");
    }

    std::size_t g() const
    {
        return m_factors.size();
    }
    std::size_t real_dim() const
    {
        return 2 * m_factors.size();
    }
    const std::vector<EllipticFactor> &factors() const
    {
        return m_factors;
    }
    const EllipticFactor &factor(std::size_t j) const
    {
        return m_factors.at(j);
    }
    bool pairwise_nonisogenous() const
    {
        return m_pairwise_nonisogenous;
    }
    bool all_no_cm() const
    {
        for (const auto &f : m_factors)
            if (!f.no_cm) return false;
        return true;
    }

    /// Abelian subvarieties are exactly the coordinate subproducts. Hom(E_i, E_j) = 0 for
    /// non-isogenous factors, so this holds with or without complex multiplication.
    bool subvarieties_are_coordinate() const
    {
        return g() == 1 || m_pairwise_nonisogenous;
    }

    template <typename Real>
    std::vector<Real> to_lattice_coords(std::span<const std::complex<Real>> z) const
    {
        if (z.size() != g()) throw std::invalid_argument("point dimension does not match g");
        std::vector<Real> out(2 * g());
        for (std::size_t j = 0; j < g(); ++j) {
            const Real t = static_cast<Real>(to_long_double(m_factors[j].tau_re));
            const Real s = static_cast<Real>(m_factors[j].tau_im.to_long_double());
            const Real b = z[j].imag() / s;
            out[2 * j] = z[j].real() - t * b;
            out[2 * j + 1] = b;
        }
        return out;
    }
    template <typename Real>
    std::vector<std::complex<Real>> from_lattice_coords(std::span<const Real> x) const
    {
        if (x.size() != 2 * g()) throw std::invalid_argument("lattice coordinate dimension does not match 2g");
        std::vector<std::complex<Real>> out(g());
        for (std::size_t j = 0; j < g(); ++j) {
            const Real t = static_cast<Real>(to_long_double(m_factors[j].tau_re));
            const Real s = static_cast<Real>(m_factors[j].tau_im.to_long_double());
            out[j] = {x[2 * j] + t * x[2 * j + 1], s * x[2 * j + 1]};
        }
        return out;
    }

    std::vector<MultiQuad> to_lattice_coords_exact(const std::vector<ComplexMultiQuad> &z) const
    {
        if (z.size() != g()) throw std::invalid_argument("point dimension does not match g");
        std::vector<MultiQuad> out(2 * g());
        for (std::size_t j = 0; j < g(); ++j) {
            MultiQuad b = z[j].im / m_factors[j].tau_im;
            out[2 * j] = z[j].re - MultiQuad(m_factors[j].tau_re) * b;
            out[2 * j + 1] = b;
        }
        return out;
    }
    std::vector<ComplexMultiQuad> from_lattice_coords_exact(const std::vector<MultiQuad> &x) const
    {
        if (x.size() != 2 * g()) throw std::invalid_argument("lattice coordinate dimension does not match 2g");
        std::vector<ComplexMultiQuad> out(g());
        for (std::size_t j = 0; j < g(); ++j)
            out[j] = ComplexMultiQuad(x[2 * j]) + ComplexMultiQuad(x[2 * j + 1]) * m_factors[j].tau_exact();
        return out;
    }

    /// Multiplication by i on C^g written in lattice coordinates (columns are images of the basis).
    Matrix<MultiQuad> complex_structure() const
    {
        Matrix<MultiQuad> J(2 * g(), 2 * g());
        for (std::size_t j = 0; j < g(); ++j) {
            std::vector<ComplexMultiQuad> e(g());
            e[j] = ComplexMultiQuad::imag_unit();
            auto ia = to_lattice_coords_exact(e);
            e[j] = ComplexMultiQuad::imag_unit() * m_factors[j].tau_exact();
            auto ib = to_lattice_coords_exact(e);
            for (std::size_t r = 0; r < 2 * g(); ++r) {
                J(r, 2 * j) = ia[r];
                J(r, 2 * j + 1) = ib[r];
            }
        }
        return J;
    }

    /// Reduces a point of C^g to the representative with lattice coordinates in [0, 1).
    template <typename Real>
    std::vector<std::complex<Real>> reduce(std::span<const std::complex<Real>> z) const
    {
        auto x = to_lattice_coords<Real>(z);
        for (auto &v : x) v -= std::floor(v);
        return from_lattice_coords<Real>(std::span<const Real>(x));
    }

    /// Flat distance in A between the classes of two points of C^g.
    template <typename Real>
    Real torus_distance(std::span<const std::complex<Real>> z, std::span<const std::complex<Real>> w) const
    {
        std::vector<std::complex<Real>> d(g());
        for (std::size_t j = 0; j < g(); ++j) d[j] = z[j] - w[j];
        auto x = to_lattice_coords<Real>(std::span<const std::complex<Real>>(d));
        Real total = 0;
        for (std::size_t j = 0; j < g(); ++j) {
            Real a = x[2 * j] - std::round(x[2 * j]);
            Real b = x[2 * j + 1] - std::round(x[2 * j + 1]);
            const auto tau = std::complex<Real>(static_cast<Real>(to_long_double(m_factors[j].tau_re)),
                                                static_cast<Real>(m_factors[j].tau_im.to_long_double()));
            Real best = std::numeric_limits<Real>::max();
            for (int p = -1; p <= 1; ++p)
                for (int q = -1; q <= 1; ++q) best = std::min(best, std::abs(std::complex<Real>(a + p) + (b + q) * tau));
            total += best * best;
        }
        return std::sqrt(total);
    }

private:
    std::vector<EllipticFactor> m_factors;
    bool m_pairwise_nonisogenous;
};

} // namespace eac
