#pragma once

// Weierstrass elliptic functions for the lattice Z + tau Z.
//
// Two independent evaluation routes are provided:
//
//  * theta:       p(z) = pi^2 th2^2 th3^2 th4(v)^2 / th1(v)^2 - pi^2/3 (th2^4 + th3^4),  v = pi z,
//                 p'(z) = -2 pi^3 (th2 th3 th4)^2 th2(v) th3(v) th4(v) / th1(v)^3,
//                 with nome q = exp(i pi tau) (DLMF 23.6 with 2 omega_1 = 1);
//  * lattice-sum: the defining double series summed row by row, each row
//                 sum_n (z + m tau + n)^-2 in closed form pi^2 / sin^2(pi (z + m tau)).
//
// Arguments are reduced to lattice coordinates in [-1/2, 1/2) before evaluation.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace eac
{

enum class WpBackend { theta, lattice_sum };

inline const char *to_string(WpBackend b)
{
    return b == WpBackend::theta ? "theta" : "lattice-sum";
}

template <typename Real>
struct WpValue {
    std::complex<Real> wp;
    std::complex<Real> wp_prime;
    /// z is within the pole tolerance of a lattice point: the curve point is [0 : 0 : 1].
    bool at_infinity = false;
};

template <typename Real>
struct WpOptions {
    WpBackend backend = WpBackend::theta;
    /// Target relative accuracy of every series.
    Real eps = Real(1e-12);
    /// Distance to the lattice below which the value is reported as at infinity.
    Real pole_tolerance = Real(1e-12);
    /// Additive corruption of p, used only to exercise the property suite.
    Real fault_bias = 0;
};

template <typename Real>
class WpEvaluator
{
public:
    using Complex = std::complex<Real>;

    explicit WpEvaluator(Complex tau, WpOptions<Real> opts = {}) : m_tau(tau), m_opts(opts)
    {
        if (!(tau.imag() > 0)) throw std::invalid_argument("tau must lie in the upper half plane");
        setup();
    }

    Complex tau() const
    {
        return m_tau;
    }
    const WpOptions<Real> &options() const
    {
        return m_opts;
    }
    Complex g2() const
    {
        return m_g2;
    }
    Complex g3() const
    {
        return m_g3;
    }
    /// Half-period values e_1 = p(1/2), e_2 = p((1+tau)/2), e_3 = p(tau/2).
    std::array<Complex, 3> half_period_values() const
    {
        return {m_e1, m_e2, m_e3};
    }

    /// Representative of z with lattice coordinates in [-1/2, 1/2).
    Complex reduce(Complex z) const
    {
        Real b = z.imag() / m_tau.imag();
        Real a = z.real() - m_tau.real() * b;
        b -= std::floor(b + Real(0.5));
        a -= std::floor(a + Real(0.5));
        return Complex(a) + b * m_tau;
    }

    WpValue<Real> operator()(Complex z) const
    {
        const Complex zr = reduce(z);
        WpValue<Real> out;
        if (std::abs(zr) < m_opts.pole_tolerance) {
            out.at_infinity = true;
            return out;
        }
        if (m_opts.backend == WpBackend::theta)
            eval_theta(zr, out);
        else
            eval_lattice(zr, out);
        out.wp += m_opts.fault_bias;
        return out;
    }

    std::optional<Complex> wp(Complex z) const
    {
        auto v = (*this)(z);
        if (v.at_infinity) return std::nullopt;
        return v.wp;
    }
    std::optional<Complex> wp_prime(Complex z) const
    {
        auto v = (*this)(z);
        if (v.at_infinity) return std::nullopt;
        return v.wp_prime;
    }

private:
    static constexpr Real pi = std::numbers::pi_v<Real>;

    // Jacobi theta functions at v with |Im v| <= pi Im(tau) / 2 + small. Term n of
    // th3/th4 is bounded by |q|^{n^2} e^{2n|Im v|} <= exp(-pi Im(tau) (n^2 - n)), and
    // the bounds shrink faster than geometrically, so summation stops once a term
    // bound falls below eps times the running magnitude.
    struct Thetas {
        Complex t1, t2, t3, t4;
    };
    Thetas thetas(Complex v) const
    {
        const Complex i(0, 1);
        Thetas t{Complex(0), Complex(0), Complex(1), Complex(1)};
        const Real floor_tol = m_opts.eps * Real(1e-3);
        for (int n = 0; n < 200; ++n) {
            const Real h = n + Real(0.5);
            const Complex qh = std::exp(i * pi * m_tau * (h * h));
            const Complex s = std::sin(Real(2 * n + 1) * v), c = std::cos(Real(2 * n + 1) * v);
            const Complex a1 = Real(2) * qh * s * Real(n % 2 ? -1 : 1);
            const Complex a2 = Real(2) * qh * c;
            t.t1 += a1;
            t.t2 += a2;
            Complex a3(0), a4(0);
            if (n >= 1) {
                const Complex qn = std::exp(i * pi * m_tau * Real(n * n));
                const Complex cn = std::cos(Real(2 * n) * v);
                a3 = Real(2) * qn * cn;
                a4 = a3 * Real(n % 2 ? -1 : 1);
                t.t3 += a3;
                t.t4 += a4;
            }
            const Real bound = std::max({std::abs(a1), std::abs(a2), std::abs(a3)});
            if (n >= 2 && bound <= floor_tol * std::max(Real(1), std::abs(t.t1))) break;
        }
        return t;
    }

    // pi^2 csc^2(w) and pi^3 cot(w) csc^2(w) written with x = e^{2iw} (or e^{-2iw}) so
    // that rows far from the real axis neither overflow nor cancel.
    static void csc_terms(Complex w, Complex &csc2, Complex &cotcsc2)
    {
        const Complex i(0, 1);
        if (w.imag() >= 0) {
            const Complex x = std::exp(Real(2) * i * w);
            const Complex d = Real(1) - x;
            csc2 = Real(-4) * x / (d * d);
            cotcsc2 = Real(4) * i * x * (x + Real(1)) / (d * d * d);
        } else {
            const Complex y = std::exp(Real(-2) * i * w);
            const Complex d = Real(1) - y;
            csc2 = Real(-4) * y / (d * d);
            cotcsc2 = Real(-4) * i * y * (Real(1) + y) / (d * d * d);
        }
    }

    void eval_theta(Complex z, WpValue<Real> &out) const
    {
        const auto t = thetas(pi * z);
        const Complex r = t.t4 / t.t1;
        out.wp = pi * pi * m_th2 * m_th2 * m_th3 * m_th3 * r * r - pi * pi / Real(3) * (std::pow(m_th2, 4) + std::pow(m_th3, 4));
        const Complex k = m_th2 * m_th3 * m_th4;
        out.wp_prime = Real(-2) * pi * pi * pi * k * k * t.t2 * t.t3 * t.t4 / (t.t1 * t.t1 * t.t1);
    }

    void eval_lattice(Complex z, WpValue<Real> &out) const
    {
        Complex c2, cc;
        csc_terms(pi * z, c2, cc);
        Complex wp = pi * pi * c2 - pi * pi / Real(3);
        Complex wpp = Real(-2) * pi * pi * pi * cc;
        for (int m = 1; m < 400; ++m) {
            Complex delta(0), deltap(0);
            for (int sgn : {1, -1}) {
                Complex a2, ac, b2, bc;
                csc_terms(pi * (z + Real(sgn * m) * m_tau), a2, ac);
                csc_terms(pi * (Real(sgn * m) * m_tau), b2, bc);
                delta += pi * pi * (a2 - b2);
                deltap += Real(-2) * pi * pi * pi * ac;
            }
            wp += delta;
            wpp += deltap;
            // Row m contributes O(exp(-2 pi m Im tau)); stop once it is negligible.
            if (std::abs(delta) <= m_opts.eps * Real(1e-3) * std::max(Real(1), std::abs(wp)) &&
                std::abs(deltap) <= m_opts.eps * Real(1e-3) * std::max(Real(1), std::abs(wpp)))
                break;
        }
        out.wp = wp;
        out.wp_prime = wpp;
    }

    // Row sums S4(w) = sum_n (w+n)^-4 and S6(w) = sum_n (w+n)^-6 in terms of c = csc^2(pi w).
    void lattice_invariants()
    {
        Complex g4 = Real(2) * std::pow(pi, 4) / Real(90);
        Complex g6 = Real(2) * std::pow(pi, 6) / Real(945);
        for (int m = 1; m < 400; ++m) {
            Complex d4(0), d6(0);
            for (int sgn : {1, -1}) {
                Complex c, unused;
                csc_terms(pi * Real(sgn * m) * m_tau, c, unused);
                d4 += std::pow(pi, 4) / Real(3) * c * (Real(3) * c - Real(2));
                d6 += std::pow(pi, 6) / Real(15) * c * (Real(15) * c * c - Real(15) * c + Real(2));
            }
            g4 += d4;
            g6 += d6;
            if (std::abs(d4) <= m_opts.eps * Real(1e-3) * std::abs(g4) && std::abs(d6) <= m_opts.eps * Real(1e-3) * std::abs(g6))
                break;
        }
        m_g2 = Real(60) * g4;
        m_g3 = Real(140) * g6;
    }

    void setup()
    {
        const auto t0 = thetas(Complex(0));
        m_th2 = t0.t2;
        m_th3 = t0.t3;
        m_th4 = t0.t4;
        const Real c = pi * pi / Real(3);
        m_e1 = c * (std::pow(m_th3, 4) + std::pow(m_th4, 4));
        m_e2 = c * (std::pow(m_th2, 4) - std::pow(m_th4, 4));
        m_e3 = -c * (std::pow(m_th2, 4) + std::pow(m_th3, 4));
        if (m_opts.backend == WpBackend::theta) {
            m_g2 = Real(2) * (m_e1 * m_e1 + m_e2 * m_e2 + m_e3 * m_e3);
            m_g3 = Real(4) * m_e1 * m_e2 * m_e3;
        } else {
            lattice_invariants();
        }
    }

    Complex m_tau;
    WpOptions<Real> m_opts;
    Complex m_th2, m_th3, m_th4;
    Complex m_e1, m_e2, m_e3;
    Complex m_g2, m_g3;
};

/// Eisenstein invariants (g2, g3) of Z + tau Z.
template <typename Real>
std::pair<std::complex<Real>, std::complex<Real>> invariants(std::complex<Real> tau, WpBackend backend = WpBackend::theta)
{
    WpOptions<Real> opts;
    opts.backend = backend;
    WpEvaluator<Real> ev(tau, opts);
    return {ev.g2(), ev.g3()};
}

} // namespace eac
