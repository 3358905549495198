#include <catch2/catch.hpp>

#include <random>

#include "eac/checker.hpp"

using namespace eac;

namespace
{

ProductVariety sqrt2_sqrt5()
{
    return ProductVariety({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5))}, true);
}

ProductVariety three_factors()
{
    return ProductVariety({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5)),
                           EllipticFactor(Rational(1, 2), MultiQuad::sqrt(3, Rational(1, 2)))},
                          true);
}

ComplexSubspace span_of(std::size_t g, const std::vector<std::vector<std::string>> &cols)
{
    Matrix<ComplexMultiQuad> m(g, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t j = 0; j < g; ++j) m(j, k) = parse_complex_literal(cols[k][j]);
    return ComplexSubspace::span(m);
}

WDescriptor curve(int m, int n)
{
    return WDescriptor::curve(SegrePolynomial::linear({{4, 1.0}, {0, -1.0}}), Bidegree{m, n});
}

// Hand criterion on E1 x E2 for a line L = C(a, b) against a curve of bidegree (m, n):
// free iff neither a nor b vanishes and W is not a fibre; rotund then holds automatically.
Tri line_oracle(bool a_zero, bool b_zero, int m, int n)
{
    return !a_zero && !b_zero && m > 0 && n > 0 ? Tri::yes : Tri::no;
}

} // namespace

TEST_CASE("lines against curves follow the hand criterion")
{
    const auto A = sqrt2_sqrt5();
    const std::vector<std::pair<std::string, std::string>> lines = {
        {"1", "1"}, {"1", "sqrt(2)"}, {"1", "i"}, {"1", "0"}, {"0", "1"}, {"2+i", "-3"}};
    for (const auto &[a, b] : lines)
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n) {
                if (m == 0 && n == 0) continue;
                const auto v = check(span_of(2, {{a, b}}), curve(m, n), A);
                INFO(a << "," << b << " (" << m << "," << n << ")");
                CHECK(v.overall() == line_oracle(a == "0", b == "0", m, n));
            }
}

TEST_CASE("witnesses name the offending subvariety")
{
    const auto A = sqrt2_sqrt5();
    const auto axis = check(span_of(2, {{"1", "0"}}), curve(2, 2), A);
    CHECK(axis.free == Tri::no);
    REQUIRE(axis.free_witness);
    CHECK(axis.free_witness->subset == 0b01u);
    CHECK(axis.free_witness->side == "L");

    const auto fibre = check(span_of(2, {{"1", "1"}}), curve(2, 0), A);
    CHECK(fibre.free == Tri::no);
    REQUIRE(fibre.free_witness);
    CHECK(fibre.free_witness->side == "W");

    const auto zero = check(ComplexSubspace::zero(2), curve(2, 2), A);
    CHECK(zero.rotund == Tri::no);
    REQUIRE(zero.rotund_witness);
    CHECK(zero.rotund_witness->subset == 0u);
    CHECK(zero.rotund_witness->required == 2);
    CHECK(zero.rotund_witness->achieved == 1);
}

TEST_CASE("missing information yields an indeterminate verdict")
{
    const auto A = sqrt2_sqrt5();
    const auto W = WDescriptor::curve(SegrePolynomial::linear({{4, 1.0}, {0, -1.0}}), std::nullopt);
    const auto v = check(span_of(2, {{"1", "1"}}), W, A);
    CHECK(v.free == Tri::indeterminate);
    CHECK(v.rotund == Tri::indeterminate);
    CHECK(v.overall() == Tri::indeterminate);

    auto asserted = W;
    asserted.assert_free = true;
    asserted.assert_nondegenerate = true;
    CHECK(check(span_of(2, {{"1", "1"}}), asserted, A).overall() == Tri::yes);
}

TEST_CASE("a freeness assertion on a fibre is contradicted by sampling")
{
    const auto A = sqrt2_sqrt5();
    auto W = WDescriptor::curve(SegrePolynomial::linear({{3, 1.0}, {0, -2.0}}), std::nullopt);
    W.assert_free = true;
    CHECK_THROWS_AS(check(span_of(2, {{"1", "1"}}), W, A), AssertionContradicted);
}

TEST_CASE("isogenous factors are refused")
{
    const ProductVariety A({EllipticFactor(0, MultiQuad(1)), EllipticFactor(0, MultiQuad(1))}, false);
    CHECK_THROWS_AS(check(span_of(2, {{"1", "1"}}), curve(2, 2), A), UnsupportedVariety);
    const ProductVariety E({EllipticFactor(0, MultiQuad(1))}, false);
    CHECK(check(ComplexSubspace::zero(1), WDescriptor::whole(1), E).overall() == Tri::yes);
}

TEST_CASE("rotundity is monotone in L and freeness survives enlarging L")
{
    const auto A = three_factors();
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> c(-1, 1);
    const std::vector<WDescriptor> Ws = {WDescriptor::whole(3), WDescriptor::point()};
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::vector<std::string>> cols(1 + trial % 2, std::vector<std::string>(3));
        for (auto &col : cols)
            for (auto &e : col) e = std::to_string(c(rng));
        auto bigger = cols;
        bigger.push_back({std::to_string(c(rng)), std::to_string(c(rng)), "1"});
        const auto L = span_of(3, cols), L2 = span_of(3, bigger);
        for (const auto &W : Ws) {
            const auto a = check(L, W, A), b = check(L2, W, A);
            if (a.rotund == Tri::yes) CHECK(b.rotund == Tri::yes);
            if (a.free == Tri::yes) CHECK(b.free == Tri::yes);
        }
    }
}

TEST_CASE("verdict does not depend on the basis of L")
{
    const auto A = three_factors();
    const auto L1 = span_of(3, {{"1", "0", "1"}, {"0", "1", "1"}});
    const auto L2 = span_of(3, {{"1", "1", "2"}, {"1", "-1", "0"}});
    REQUIRE(L1 == L2);
    for (const auto &W : {WDescriptor::whole(3), WDescriptor::point()}) {
        const auto a = check(L1, W, A), b = check(L2, W, A);
        CHECK(a.free == b.free);
        CHECK(a.rotund == b.rotund);
    }
    // A point against all of C^3 is rotund; against a plane it is not.
    CHECK(check(ComplexSubspace::whole(3), WDescriptor::point(), A).rotund == Tri::yes);
    CHECK(check(L1, WDescriptor::point(), A).rotund == Tri::no);
}

TEST_CASE("projected dimensions")
{
    const auto L = span_of(3, {{"1", "0", "1"}});
    CHECK(projected_dim(L, 0b000u) == 1);
    CHECK(projected_dim(L, 0b101u) == 0);
    CHECK(projected_dim(L, 0b010u) == 1);
    CHECK(coordinate_subspace(0b101u, 3).contains(L));
    CHECK(subset_name(0b101u, 3) == "B = E1 x E3");
}

TEST_CASE("reduce_L cuts the plane to a line and keeps the verdict")
{
    const auto A = sqrt2_sqrt5();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto L = reduce_L(ComplexSubspace::whole(2), curve(2, 2), A, seed);
        CHECK(L.dim() == 1);
        CHECK(check(L, curve(2, 2), A).overall() == Tri::yes);
    }
    CHECK(reduce_L(ComplexSubspace::whole(2), curve(2, 2), A, 3) == reduce_L(ComplexSubspace::whole(2), curve(2, 2), A, 3));
    CHECK_THROWS_AS(reduce_L(span_of(2, {{"1", "0"}}), curve(2, 2), A, 1), PreconditionError);
}
