#pragma once

// Root counting on the fibres of a Segre hypersurface by the argument principle,
// and the fibre counts (m, n) that determine the class of a curve in E_1 x E_2.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "segre.hpp"

namespace eac
{

struct ContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// The restriction to the fibre has no zeros and no poles: it is a nonzero constant.
struct DegenerateFiber : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// The restriction to the fibre vanishes identically; pick another fibre.
struct VanishingFiber : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ComplexFn = std::function<std::optional<std::complex<double>>(std::complex<double>)>;

namespace detail
{

inline double phase_step(std::complex<double> a, std::complex<double> b)
{
    return std::arg(b / a);
}

// Accumulated change of arg f along path(s), s in [s0, s1]. A step is accepted once
// its phase change is below pi/8; the contour is rejected if it meets a zero or pole.
inline double track_phase(const ComplexFn &f, const std::function<std::complex<double>(double)> &path, double s0,
                          double s1, std::complex<double> f0, std::complex<double> f1, int depth)
{
    const double step = phase_step(f0, f1);
    if (std::abs(step) < std::numbers::pi / 8 && depth > 0) return step;
    if (depth > 40) throw ContourError("contour too close to a zero; re-jitter");
    const double sm = 0.5 * (s0 + s1);
    auto fm = f(path(sm));
    if (!fm || *fm == 0.0 || !std::isfinite(std::abs(*fm))) throw ContourError("contour too close to a zero; re-jitter");
    return track_phase(f, path, s0, sm, f0, *fm, depth + 1) + track_phase(f, path, sm, s1, *fm, f1, depth + 1);
}

} // namespace detail

/// Winding number of f around 0 along the closed path(s), s in [0, 1].
inline double winding_number(const ComplexFn &f, const std::function<std::complex<double>(double)> &path, int pieces = 64)
{
    double total = 0;
    auto value = [&](double s) {
        auto v = f(path(s));
        if (!v || *v == 0.0 || !std::isfinite(std::abs(*v))) throw ContourError("contour too close to a zero; re-jitter");
        return *v;
    };
    std::complex<double> prev = value(0.0);
    const std::complex<double> first = prev;
    for (int k = 1; k <= pieces; ++k) {
        const double s1 = static_cast<double>(k) / pieces;
        const auto cur = k == pieces ? first : value(s1);
        total += detail::track_phase(f, path, static_cast<double>(k - 1) / pieces, s1, prev, cur, 0);
        prev = cur;
    }
    return total / (2 * std::numbers::pi);
}

inline int integral_winding(double w)
{
    const double r = std::round(w);
    if (std::abs(w - r) > 1e-3) throw ContourError("winding integral is not an integer; re-jitter");
    return static_cast<int>(r);
}

/// z -> F(exp(z_1, z_2)) with the coordinate `which` varying and the other fixed,
/// in the affine chart X_0 = 1 of the varying factor. Empty at poles.
inline ComplexFn fiber_function(const SegrePolynomial &F, std::size_t which, std::complex<double> fixed,
                                const ProductExp<double> &exp)
{
    const auto other = exp.factor_point(1 - which, fixed);
    return [&F, &exp, which, other](std::complex<double> z) -> std::optional<std::complex<double>> {
        const auto p = exp.factor_point(which, z);
        if (p.at_infinity) return std::nullopt;
        const auto s = which == 0 ? ProductExp<double>::combine(p, other) : ProductExp<double>::combine(other, p);
        return F.evaluate(s);
    };
}

struct FiberCountOptions {
    /// Lattice-coordinate offsets of the contour corner are drawn from [-0.65, -0.35].
    std::uint64_t jitter_seed = 1;
    /// Radii of the circles isolating the pole at the lattice point, as fractions of min(1, |tau|).
    double inner_radius = 0.02;
    double outer_radius = 0.04;
};

/// Number of zeros, with multiplicity, of F restricted to a fibre, in one fundamental domain.
///
/// The parallelogram P = c + [0,1] + [0,1] tau contains exactly one lattice point, 0.
/// zeros = wind(dP) - wind(small circle around 0): the second term is minus the pole order.
inline int count_roots_on_fiber(const SegrePolynomial &F, std::size_t which, std::complex<double> fixed,
                                const ProductExp<double> &exp, const FiberCountOptions &opts = {})
{
    if (exp.g() != 2 || which > 1) throw std::invalid_argument("fibre counting needs g = 2 and a factor index 0 or 1");
    const auto tau = exp.evaluator(which).tau();
    const auto f = fiber_function(F, which, fixed, exp);

    std::mt19937_64 rng(opts.jitter_seed);
    std::uniform_real_distribution<double> jit(-0.65, -0.35);

    // Identically vanishing restriction: every sample is negligible against the monomial sizes.
    {
        const auto other = exp.factor_point(1 - which, fixed);
        bool all_small = true;
        for (int k = 0; k < 8 && all_small; ++k) {
            const std::complex<double> z = jit(rng) + 1.0 + (jit(rng) + 1.0) * tau;
            const auto p = exp.factor_point(which, z);
            const auto s = which == 0 ? ProductExp<double>::combine(p, other) : ProductExp<double>::combine(other, p);
            const double mag = F.magnitude(s);
            if (std::abs(F.evaluate(s)) > 1e-11 * std::max(mag, 1e-300)) all_small = false;
        }
        if (all_small) throw VanishingFiber("F vanishes identically on the fibre; resample");
    }

    const std::complex<double> c = jit(rng) + jit(rng) * tau;
    const std::array<std::complex<double>, 4> corners{c, c + 1.0, c + 1.0 + tau, c + tau};
    auto boundary = [&](double s) {
        const double u = 4 * s;
        const int k = std::min(3, static_cast<int>(u));
        return corners[k] + (u - k) * (corners[(k + 1) % 4] - corners[k]);
    };
    const int wb = integral_winding(winding_number(f, boundary, 256));

    const double base = std::min(1.0, std::abs(tau));
    auto circle = [&](double r) {
        return [r](double s) { return std::polar(r, 2 * std::numbers::pi * s); };
    };
    const int wi = integral_winding(winding_number(f, circle(opts.inner_radius * base)));
    const int wo = integral_winding(winding_number(f, circle(opts.outer_radius * base)));
    if (wi != wo) throw ContourError("pole-isolating circles disagree; a zero lies near the lattice point");

    const int zeros = wb - wi;
    if (zeros == 0 && wi == 0) throw DegenerateFiber("restriction to the fibre is a nonzero constant (no zeros); degenerate");
    return zeros;
}

/// Counts with two independent jitters; they must agree.
inline int count_roots_checked(const SegrePolynomial &F, std::size_t which, std::complex<double> fixed,
                               const ProductExp<double> &exp, std::uint64_t seed)
{
    FiberCountOptions a, b;
    a.jitter_seed = seed;
    b.jitter_seed = seed * 0x9e3779b97f4a7c15ull + 7;
    b.inner_radius = 0.015;
    b.outer_radius = 0.03;
    const int na = count_roots_on_fiber(F, which, fixed, exp, a);
    const int nb = count_roots_on_fiber(F, which, fixed, exp, b);
    if (na != nb) throw ContourError("fibre counts differ between jitters");
    return na;
}

struct Bidegree {
    /// Zeros with z_1 varying and z_2 fixed: #(W cap (E_1 x {pt})).
    int m = 0;
    /// Zeros with z_2 varying and z_1 fixed: #(W cap ({pt} x E_2)).
    int n = 0;
};

/// Fibre counts of the curve cut by F at generic fibres. A restriction with no zeros
/// contributes 0; fibres on which F vanishes identically are resampled.
inline Bidegree fiber_bidegree(const SegrePolynomial &F, const ProductExp<double> &exp, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    Bidegree out;
    for (std::size_t which = 0; which < 2; ++which) {
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt >= 16) throw ContourError("could not find a fibre with a stable count");
            const auto tau_other = exp.evaluator(1 - which).tau();
            const std::complex<double> fixed = u(rng) + u(rng) * tau_other;
            try {
                const int k = count_roots_checked(F, which, fixed, exp, rng());
                (which == 0 ? out.m : out.n) = k;
                break;
            } catch (const DegenerateFiber &) {
                (which == 0 ? out.m : out.n) = 0;
                break;
            } catch (const VanishingFiber &) {
            } catch (const ContourError &) {
            }
        }
    }
    return out;
}

/// Newton's method for a holomorphic function of one variable; derivative by central differences.
inline std::optional<std::complex<double>> newton_1d(const ComplexFn &f, std::complex<double> z, double tol = 1e-12,
                                                     int max_iter = 60)
{
    const double h = 1e-7;
    for (int it = 0; it < max_iter; ++it) {
        auto v = f(z);
        if (!v) return std::nullopt;
        if (std::abs(*v) < tol) return z;
        auto a = f(z + h), b = f(z - h);
        if (!a || !b) return std::nullopt;
        const auto d = (*a - *b) / (2 * h);
        if (std::abs(d) == 0) return std::nullopt;
        auto step = *v / d;
        if (std::abs(step) > 0.25) step *= 0.25 / std::abs(step);
        z -= step;
    }
    return std::nullopt;
}

/// Sample points (z_1, z_2) of the curve F = 0: random z_1, Newton in z_2 (or the reverse
/// when F does not involve z_2).
inline std::vector<std::array<std::complex<double>, 2>> sample_on_curve(const SegrePolynomial &F,
                                                                        const ProductExp<double> &exp, std::size_t count,
                                                                        std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<std::array<std::complex<double>, 2>> out;
    for (int tries = 0; out.size() < count && tries < static_cast<int>(50 * count); ++tries) {
        const std::size_t solve_for = tries % 4 == 3 ? 0 : 1;
        const std::size_t fixed_idx = 1 - solve_for;
        const std::complex<double> fixed = u(rng) + u(rng) * exp.evaluator(fixed_idx).tau();
        const auto f = fiber_function(F, solve_for, fixed, exp);
        const std::complex<double> start = u(rng) + u(rng) * exp.evaluator(solve_for).tau();
        auto v0 = f(start);
        if (!v0) continue;
        auto z = newton_1d([&](std::complex<double> w) -> std::optional<std::complex<double>> {
            auto r = f(w);
            if (!r) return r;
            return *r / std::max(1.0, std::abs(*v0));
        }, start);
        if (!z) continue;
        const auto zr = exp.evaluator(solve_for).reduce(*z);
        if (std::abs(zr) < 1e-3) continue;
        std::array<std::complex<double>, 2> p;
        p[fixed_idx] = fixed;
        p[solve_for] = zr;
        out.push_back(p);
    }
    return out;
}

} // namespace eac
