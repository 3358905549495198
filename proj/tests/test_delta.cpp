#include <catch2/catch.hpp>

#include "eac/delta.hpp"
#include "eac/fiber.hpp"

using namespace eac;
using C = std::complex<double>;

namespace
{

ProductVariety sqrt2_sqrt5()
{
    return ProductVariety({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5))}, true);
}

ComplexSubspace line(const std::string &a, const std::string &b)
{
    Matrix<ComplexMultiQuad> m(2, 1);
    m(0, 0) = parse_complex_literal(a);
    m(1, 0) = parse_complex_literal(b);
    return ComplexSubspace::span(m);
}

} // namespace

TEST_CASE("echelon parametrisation has a unit pivot")
{
    const LParametrization P(line("2", "2*sqrt(2)"));
    REQUIRE(P.dim() == 1);
    CHECK(P.pivots() == std::vector<std::size_t>{0});
    CHECK(P.vector(0)[0] == C(1));
    CHECK(std::abs(P.vector(0)[1] - std::sqrt(2.0)) < 1e-15);
    const auto z = P.point({C(0.5, 1)});
    CHECK(std::abs(z[1] - C(0.5, 1) * std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS(P.point({}));

    const LParametrization Q(line("0", "1"));
    CHECK(Q.pivots() == std::vector<std::size_t>{1});
}

TEST_CASE("delta vanishes modulo the lattice exactly on L + Lambda")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const LParametrization P(line("1", "1"));
    const CVec l{C(0.3, 0.2)};
    const auto z = P.point(l);
    const CVec w{z[0] + 2.0 + A.factor(0).tau(), z[1] - 1.0};
    const auto d = delta_map(P, l, w, exp);
    for (auto x : d) CHECK(std::min(std::abs(x), std::abs(x - 1.0)) < 1e-12);
    const CVec off{z[0] + 0.25, z[1]};
    CHECK(std::abs(delta_map(P, l, off, exp)[0] - 0.25) < 1e-12);
}

TEST_CASE("delta refuses points off W")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const auto F = SegrePolynomial::linear({{4, 1.0}, {0, -1.0}});
    const LParametrization P(line("1", "1"));
    CHECK_THROWS_AS(delta_map(P, {C(0.1)}, {C(0.3, 0.2), C(0.1, 0.4)}, exp, &F), OffVariety);
    CHECK_THROWS_AS(jacobian_probe(P, {C(0.1)}, {C(0.3, 0.2), C(0.1, 0.4)}, exp, &F), OffVariety);
}

TEST_CASE("Jacobian rank matches the tangent-line oracle")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const auto F = SegrePolynomial::linear({{4, 1.0}, {0, -1.0}});
    const LParametrization P(line("1", "1"));
    const auto pts = sample_on_curve(F, exp, 20, 12);
    REQUIRE(pts.size() == 20);
    for (const auto &p : pts) {
        const CVec w{p[0], p[1]};
        const auto probe = jacobian_probe(P, {C(0.2, 0.1)}, w, exp, &F);
        // Tangent of p1 p2 = 1 is (p1 p2', -p1' p2); rank 2 iff it is not parallel to (1, 1).
        const C p1 = *exp.evaluator(0).wp(p[0]), d1 = *exp.evaluator(0).wp_prime(p[0]);
        const C p2 = *exp.evaluator(1).wp(p[1]), d2 = *exp.evaluator(1).wp_prime(p[1]);
        const C t1 = p1 * d2, t2 = -d1 * p2;
        const double skew = std::abs(t1 - t2) / std::max(std::abs(t1), std::abs(t2));
        if (skew > 1e-3) CHECK(probe.rank == 2);
        REQUIRE(probe.singular_values.size() == 2);
        CHECK(probe.singular_values[0] >= probe.singular_values[1]);
    }
}

TEST_CASE("L inside a factor gives a rank-deficient Jacobian against a fibre curve")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    // W = {p1 = 2} = {pt} x E_2 and L = C x 0: both move only in complementary factors except
    // that W moves in E_2 and L in E_1, so the rank is 2. With L = 0 x C it drops to 1.
    const auto F = SegrePolynomial::linear({{3, 1.0}, {0, -2.0}});
    const auto pts = sample_on_curve(F, exp, 3, 3);
    REQUIRE(!pts.empty());
    const CVec w{pts[0][0], pts[0][1]};
    CHECK(jacobian_probe(LParametrization(line("1", "0")), {C(0.1)}, w, exp, &F).rank == 2);
    CHECK(jacobian_probe(LParametrization(line("0", "1")), {C(0.1)}, w, exp, &F).rank == 1);
}

TEST_CASE("W = A probes every direction")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const LParametrization P(ComplexSubspace::zero(2));
    const auto probe = jacobian_probe(P, {}, {C(0.1, 0.2), C(0.3, 0.1)}, exp, nullptr);
    CHECK(probe.rank == 2);
    CHECK(probe.singular_values[0] == Approx(1.0).epsilon(1e-8));
}
