#pragma once

// The exponential map of E_1 x E_2 followed by the Segre embedding into P^8.
//
// Factor j is sent to X^(j) = [1 : p_j : p_j'] (or [0 : 0 : 1] at the origin), and
// the Segre coordinates are Z_{3i+k} = X^(1)_i X^(2)_k, so
//   Z = [1 : p2 : p2' : p1 : p1 p2 : p1 p2' : p1' : p1' p2 : p1' p2'].

#include <algorithm>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "variety.hpp"
#include "weierstrass.hpp"

namespace eac
{

template <typename Real>
struct FactorPoint {
    /// Projective coordinates [X0 : X1 : X2]; X0 = 1 unless at infinity.
    std::array<std::complex<Real>, 3> X;
    bool at_infinity = false;
};

template <typename Real>
struct SegrePoint {
    std::array<std::complex<Real>, 9> Z;
    std::array<bool, 2> at_infinity{false, false};

    bool finite() const
    {
        return !at_infinity[0] && !at_infinity[1];
    }
};

/// Exponential map of a product of elliptic curves, one evaluator per factor.
template <typename Real>
class ProductExp
{
public:
    using Complex = std::complex<Real>;

    explicit ProductExp(const ProductVariety &A, WpOptions<Real> opts = {}) : m_A(&A)
    {
        m_ev.reserve(A.g());
        for (std::size_t j = 0; j < A.g(); ++j) {
            auto t = A.factor(j).tau_ld();
            m_ev.emplace_back(Complex(static_cast<Real>(t.real()), static_cast<Real>(t.imag())), opts);
        }
    }

    const ProductVariety &variety() const
    {
        return *m_A;
    }
    std::size_t g() const
    {
        return m_ev.size();
    }
    const WpEvaluator<Real> &evaluator(std::size_t j) const
    {
        return m_ev.at(j);
    }

    FactorPoint<Real> factor_point(std::size_t j, Complex z) const
    {
        auto v = m_ev.at(j)(z);
        FactorPoint<Real> p;
        if (v.at_infinity) {
            p.X = {Complex(0), Complex(0), Complex(1)};
            p.at_infinity = true;
        } else {
            p.X = {Complex(1), v.wp, v.wp_prime};
        }
        return p;
    }

    SegrePoint<Real> segre(Complex z1, Complex z2) const
    {
        if (g() != 2) throw std::invalid_argument("the Segre embedding is defined for g = 2");
        return combine(factor_point(0, z1), factor_point(1, z2));
    }
    SegrePoint<Real> segre(const std::vector<Complex> &z) const
    {
        if (z.size() != 2) throw std::invalid_argument("the Segre embedding is defined for g = 2");
        return segre(z[0], z[1]);
    }

    static SegrePoint<Real> combine(const FactorPoint<Real> &x, const FactorPoint<Real> &y)
    {
        SegrePoint<Real> s;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) s.Z[3 * i + k] = x.X[i] * y.X[k];
        s.at_infinity = {x.at_infinity, y.at_infinity};
        return s;
    }

private:
    const ProductVariety *m_A;
    std::vector<WpEvaluator<Real>> m_ev;
};

/// exp_segre(z1, z2): the Segre image of exp_A(z1, z2).
template <typename Real>
SegrePoint<Real> exp_segre(std::complex<Real> z1, std::complex<Real> z2, const ProductExp<Real> &exp)
{
    return exp.segre(z1, z2);
}

/// Residuals of the two Weierstrass cubics X2^2 X0 = 4 X1^3 - g2 X1 X0^2 - g3 X0^3 read off
/// the Segre coordinates (factor 1 from Z0, Z3, Z6 and factor 2 from Z0, Z1, Z2).
template <typename Real>
std::array<Real, 2> cubic_residuals(const SegrePoint<Real> &p, const ProductExp<Real> &exp)
{
    std::array<Real, 2> out{};
    for (int f = 0; f < 2; ++f) {
        if (p.at_infinity[f]) continue;
        const auto &ev = exp.evaluator(f);
        const auto &Z = p.Z;
        // Fibre coordinates of factor f, scaled by the other factor's X0 (or its first nonzero entry).
        std::complex<Real> x0, x1, x2;
        if (f == 0) {
            int k = p.at_infinity[1] ? 2 : 0;
            x0 = Z[k], x1 = Z[3 + k], x2 = Z[6 + k];
        } else {
            int i = p.at_infinity[0] ? 2 : 0;
            x0 = Z[3 * i], x1 = Z[3 * i + 1], x2 = Z[3 * i + 2];
        }
        const auto lhs = x2 * x2 * x0;
        const auto rhs = Real(4) * x1 * x1 * x1 - ev.g2() * x1 * x0 * x0 - ev.g3() * x0 * x0 * x0;
        const Real scale = std::max({Real(1), std::abs(lhs), std::abs(rhs)});
        out[f] = std::abs(lhs - rhs) / scale;
    }
    return out;
}

/// A homogeneous polynomial in the Segre coordinates Z_0, ..., Z_8.
class SegrePolynomial
{
public:
    struct Term {
        std::array<int, 9> monomial{};
        std::complex<double> coeff;
    };

    SegrePolynomial() = default;
    explicit SegrePolynomial(std::vector<Term> terms) : m_terms(std::move(terms))
    {
        if (m_terms.empty()) throw std::invalid_argument("polynomial has no terms");
        int deg = -1;
        for (const auto &t : m_terms) {
            int d = 0;
            for (int e : t.monomial) {
                if (e < 0) throw std::invalid_argument("negative exponent in monomial");
                d += e;
            }
            if (deg >= 0 && d != deg) throw std::invalid_argument("polynomial is not homogeneous");
            deg = d;
        }
        m_degree = deg;
    }

    /// Sum of coefficient * Z_k, a linear form.
    static SegrePolynomial linear(std::initializer_list<std::pair<int, std::complex<double>>> entries)
    {
        std::vector<Term> terms;
        for (auto [k, c] : entries) {
            Term t;
            t.monomial[k] = 1;
            t.coeff = c;
            terms.push_back(t);
        }
        return SegrePolynomial(std::move(terms));
    }

    const std::vector<Term> &terms() const
    {
        return m_terms;
    }
    int degree() const
    {
        return m_degree;
    }

    template <typename Real>
    std::complex<Real> evaluate(const SegrePoint<Real> &p) const
    {
        std::complex<Real> acc(0);
        for (const auto &t : m_terms) acc += coeff<Real>(t) * monomial_value(t, p);
        return acc;
    }

    /// Sum of |c_k m_k(p)|, the natural size against which a residual is small.
    template <typename Real>
    Real magnitude(const SegrePoint<Real> &p) const
    {
        Real acc = 0;
        for (const auto &t : m_terms) acc += std::abs(coeff<Real>(t) * monomial_value(t, p));
        return acc;
    }

    std::string str() const
    {
        std::string out;
        for (const auto &t : m_terms) {
            if (!out.empty()) out += " + ";
            out += "(" + std::to_string(t.coeff.real()) + (t.coeff.imag() != 0 ? "+" + std::to_string(t.coeff.imag()) + "i" : "") + ")";
            for (int k = 0; k < 9; ++k)
                if (t.monomial[k]) out += "*Z" + std::to_string(k) + (t.monomial[k] > 1 ? "^" + std::to_string(t.monomial[k]) : "");
        }
        return out;
    }

private:
    template <typename Real>
    static std::complex<Real> coeff(const Term &t)
    {
        return {static_cast<Real>(t.coeff.real()), static_cast<Real>(t.coeff.imag())};
    }
    template <typename Real>
    static std::complex<Real> monomial_value(const Term &t, const SegrePoint<Real> &p)
    {
        std::complex<Real> m(1);
        for (int k = 0; k < 9; ++k)
            for (int e = 0; e < t.monomial[k]; ++e) m *= p.Z[k];
        return m;
    }

    std::vector<Term> m_terms;
    int m_degree = 0;
};

} // namespace eac
