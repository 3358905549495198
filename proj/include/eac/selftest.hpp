#pragma once

// Built-in property suite run by `eac selftest`. Needs no instance file.

#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "catalog.hpp"
#include "pipeline.hpp"

namespace eac
{

struct SelftestOptions {
    /// Added to every p value; any nonzero bias must make the suite fail.
    double fault_bias = 0;
    std::uint64_t seed = 1;
};

struct SelftestRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail
{

inline std::vector<std::complex<double>> selftest_taus()
{
    return {{0, std::sqrt(2.0)}, {0, std::sqrt(5.0)}, {0.3, 0.9}, {-0.45, 1.3}};
}

inline double rel(std::complex<double> a, std::complex<double> b)
{
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline std::string sci(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

} // namespace detail

inline std::vector<SelftestRow> run_selftest(const SelftestOptions &opt = {})
{
    using C = std::complex<double>;
    std::vector<SelftestRow> rows;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    WpOptions<double> wo;
    wo.fault_bias = opt.fault_bias;

    auto add = [&](std::string name, bool pass, std::string detail) { rows.push_back({std::move(name), pass, std::move(detail)}); };
    auto guarded = [&](const std::string &name, auto &&body) {
        try {
            body();
        } catch (const std::exception &e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    };

    guarded("wp-ode", [&] {
        double worst = 0;
        for (auto tau : detail::selftest_taus()) {
            WpEvaluator<double> ev(tau, wo);
            for (int k = 0; k < 100; ++k) {
                const C z = u(rng) + u(rng) * tau;
                const auto v = ev(z);
                if (v.at_infinity) continue;
                const C lhs = v.wp_prime * v.wp_prime;
                const C rhs = 4.0 * v.wp * v.wp * v.wp - ev.g2() * v.wp - ev.g3();
                worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
            }
        }
        add("wp-ode", worst < 1e-10, "max relative residual " + detail::sci(worst));
    });

    guarded("wp-parity-periodicity", [&] {
        double worst = 0;
        for (auto tau : detail::selftest_taus()) {
            WpEvaluator<double> ev(tau, wo);
            for (int k = 0; k < 100; ++k) {
                const C z = u(rng) + u(rng) * tau;
                const auto a = ev(z), b = ev(-z), c = ev(z + 1.0), d = ev(z + tau);
                worst = std::max({worst, detail::rel(a.wp, b.wp), detail::rel(a.wp_prime, -b.wp_prime), detail::rel(a.wp, c.wp),
                                  detail::rel(a.wp, d.wp)});
            }
        }
        add("wp-parity-periodicity", worst < 1e-10, "max relative deviation " + detail::sci(worst));
    });

    guarded("wp-backend-agreement", [&] {
        double worst = 0;
        for (auto tau : detail::selftest_taus()) {
            WpEvaluator<double> th(tau, wo);
            WpOptions<double> lo;
            lo.backend = WpBackend::lattice_sum;
            WpEvaluator<double> la(tau, lo);
            for (int i = 0; i < 50; ++i) {
                const C z = (0.05 + 0.9 * (i % 7) / 6.0) + (0.05 + 0.9 * (i / 7) / 7.0) * tau;
                const auto a = th(z), b = la(z);
                worst = std::max({worst, detail::rel(a.wp, b.wp), detail::rel(a.wp_prime, b.wp_prime)});
            }
            worst = std::max({worst, detail::rel(th.g2(), la.g2()), detail::rel(th.g3(), la.g3())});
        }
        add("wp-backend-agreement", worst < 1e-9, "max relative difference " + detail::sci(worst));
    });

    guarded("lattice-symmetry", [&] {
        const auto [g2i, g3i] = invariants<double>(C(0, 1));
        const auto [g2h, g3h] = invariants<double>(std::polar(1.0, std::numbers::pi / 3));
        const double a = std::abs(g3i) / std::abs(g2i), b = std::abs(g2h) / std::abs(g3h);
        add("lattice-symmetry", a < 1e-12 && b < 1e-12, "g3(i)/g2(i) = " + detail::sci(a) + ", g2(rho)/g3(rho) = " + detail::sci(b));
    });

    const ProductVariety A({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5))}, true);

    guarded("fibre-counts", [&] {
        ProductExp<double> exp(A, wo);
        const auto P = SegrePolynomial::linear({{3, 1.0}, {0, -0.7}});
        const auto Q = SegrePolynomial::linear({{6, 1.0}, {0, -0.7}});
        const int np = count_roots_checked(P, 0, {0.3, 0.4}, exp, opt.seed);
        const int nq = count_roots_checked(Q, 0, {0.3, 0.4}, exp, opt.seed + 1);
        add("fibre-counts", np == 2 && nq == 3, "p - c: " + std::to_string(np) + ", p' - c: " + std::to_string(nq));
    });

    guarded("hull-diagonal", [&] {
        auto inst = parse_instance(diagonal_instance());
        const auto chain = hull_chain(inst.L, A);
        const auto T = rational_hull(inst.L, A);
        Matrix<Rational> expected(1, 4);
        expected(0, 0) = 1;
        expected(0, 2) = -1;
        const bool ok = T.dim_T() == 3 && T.equations == expected && chain.k == 1 && !chain.stalled;
        add("hull-diagonal", ok, "dim T = " + std::to_string(T.dim_T()) + ", k = " + std::to_string(chain.k));
    });

    guarded("certificate-diagonal", [&] {
        auto out = run_certify(parse_instance(diagonal_instance()));
        const std::string exact = out.report["certificate"]["value"]["exact"];
        // Determinant expansion: integral of dx_i ^ dx_j ^ alpha ^ beta is det[e_i; e_j; alpha; beta].
        Eigen::Vector4d wt(1, 0, -1, 0), wtp(0, std::sqrt(2.0), 0, -std::sqrt(5.0));
        auto det = [&](int i, int j) {
            Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
            M(0, i) = 1;
            M(1, j) = 1;
            M.row(2) = wt;
            M.row(3) = wtp;
            return M.determinant();
        };
        const double oracle = 2 * det(0, 1) + 2 * det(2, 3);
        const double value = out.report["certificate"]["value"]["float"];
        const bool ok = exact == "2*sqrt(5)+2*sqrt(2)" && std::abs(value - oracle) < 1e-12;
        add("certificate-diagonal", ok, exact + " vs determinant oracle " + format_double(oracle));
    });

    guarded("catalog-concordance", [&] {
        int bad = 0, n = 0;
        std::string first_bad;
        for (const auto &e : catalog()) {
            ++n;
            auto inst = parse_instance(e.doc);
            const auto chk = run_check(inst);
            const auto cert = run_certify(inst);
            const bool verdict_yes = chk.code == exit_code::ok;
            const bool cert_nonzero = cert.code == exit_code::ok && cert.report["certificate"]["nonzero"] == true;
            const bool expected_yes = e.expected == Tri::yes;
            if (verdict_yes != expected_yes || verdict_yes != cert_nonzero) {
                ++bad;
                if (first_bad.empty()) first_bad = inst.id;
            }
        }
        add("catalog-concordance", bad == 0,
            std::to_string(n) + " instances, " + std::to_string(bad) + " disagreements" + (first_bad.empty() ? "" : " (first: " + first_bad + ")"));
    });

    return rows;
}

} // namespace eac
