#include <catch2/catch.hpp>

#include <random>

#include "eac/segre.hpp"

using namespace eac;
using C = std::complex<double>;

namespace
{

ProductVariety sqrt2_sqrt5()
{
    return ProductVariety({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5))}, true);
}

} // namespace

TEST_CASE("Segre image is the outer product of the factor points")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const C z1(0.21, 0.3), z2(-0.17, 0.44);
    const auto s = exp.segre(z1, z2);
    const C p1 = *exp.evaluator(0).wp(z1), d1 = *exp.evaluator(0).wp_prime(z1);
    const C p2 = *exp.evaluator(1).wp(z2), d2 = *exp.evaluator(1).wp_prime(z2);
    const std::array<C, 9> expected = {1.0, p2, d2, p1, p1 * p2, p1 * d2, d1, d1 * p2, d1 * d2};
    for (int k = 0; k < 9; ++k) CHECK(std::abs(s.Z[k] - expected[k]) < 1e-12 * std::max(1.0, std::abs(expected[k])));
    CHECK(s.finite());
}

TEST_CASE("Segre points satisfy both factor cubics")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 200; ++k) {
        const auto s = exp.segre(C(u(rng), u(rng)), C(u(rng), u(rng)));
        const auto r = cubic_residuals(s, exp);
        CHECK(r[0] < 1e-10);
        CHECK(r[1] < 1e-10);
    }
    // Rank-one structure: every 2x2 minor of the 3x3 matrix Z vanishes.
    const auto s = exp.segre(C(0.1, 0.2), C(0.3, 0.1));
    CHECK(std::abs(s.Z[0] * s.Z[4] - s.Z[1] * s.Z[3]) < 1e-9 * std::abs(s.Z[4]));
    CHECK(std::abs(s.Z[4] * s.Z[8] - s.Z[5] * s.Z[7]) < 1e-9 * std::abs(s.Z[4] * s.Z[8]));
}

TEST_CASE("a pole in one factor moves that factor to [0:0:1]")
{
    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const auto s = exp.segre(C(0), C(0.2, 0.3));
    CHECK(s.at_infinity[0]);
    CHECK_FALSE(s.at_infinity[1]);
    CHECK_FALSE(s.finite());
    CHECK(s.Z[0] == C(0));
    CHECK(s.Z[6] == C(1));
    const auto r = cubic_residuals(s, exp);
    CHECK(r[1] < 1e-10);
}

TEST_CASE("polynomials must be homogeneous")
{
    SegrePolynomial::Term a, b;
    a.monomial[4] = 1;
    a.coeff = 1;
    b.monomial[0] = 2;
    b.coeff = -1;
    CHECK_THROWS_AS(SegrePolynomial({a, b}), std::invalid_argument);
    CHECK_THROWS_AS(SegrePolynomial(std::vector<SegrePolynomial::Term>{}), std::invalid_argument);
    b.monomial[0] = 1;
    const SegrePolynomial F({a, b});
    CHECK(F.degree() == 1);

    const auto A = sqrt2_sqrt5();
    ProductExp<double> exp(A);
    const auto s = exp.segre(C(0.2, 0.1), C(0.1, 0.4));
    CHECK(std::abs(F.evaluate(s) - (s.Z[4] - 1.0)) < 1e-12 * std::abs(s.Z[4]));
    CHECK(F.magnitude(s) == Approx(std::abs(s.Z[4]) + 1.0));
    CHECK(SegrePolynomial::linear({{4, 1.0}, {0, -1.0}}).str() == F.str());
}
