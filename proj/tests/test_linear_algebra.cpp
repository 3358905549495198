#include <catch2/catch.hpp>

#include <random>

#include <Eigen/Dense>

#include "eac/subspace.hpp"

using namespace eac;

namespace
{

// Numeric rank via SVD with a relative cutoff; independent of the exact elimination.
std::size_t numeric_rank(const Matrix<MultiQuad> &m)
{
    Eigen::MatrixXd d(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) d(r, c) = m(r, c).to_double();
    if (d.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    const auto &s = svd.singularValues();
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-9 * std::max(1.0, s(0))) ++k;
    return k;
}

// Random matrix of prescribed rank: a product of two random factors over Q(sqrt2, sqrt5).
Matrix<MultiQuad> random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols, std::size_t rk)
{
    std::uniform_int_distribution<int> c(-3, 3), pick(0, 3);
    const std::uint64_t keys[] = {1, 2, 5, 10};
    auto entry = [&] { return MultiQuad::sqrt(keys[pick(rng)], Rational(c(rng))) + MultiQuad(c(rng)); };
    Matrix<MultiQuad> a(rows, rk), b(rk, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rk; ++j) a(i, j) = entry();
    for (std::size_t i = 0; i < rk; ++i)
        for (std::size_t j = 0; j < cols; ++j) b(i, j) = entry();
    return a * b;
}

} // namespace

TEST_CASE("exact rank agrees with SVD rank on random products")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t rows = dim(rng), cols = dim(rng);
        const std::size_t rk = std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng);
        const auto m = random_matrix(rng, rows, cols, rk);
        const auto exact = rank(m);
        CHECK(exact <= rk);
        CHECK(exact == numeric_rank(m));
    }
}

TEST_CASE("null space is annihilated and has complementary dimension")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_matrix(rng, 3, 5, trial % 4);
        const auto ker = null_space(m);
        CHECK(ker.cols() + rank(m) == 5);
        const auto prod = m * ker;
        for (std::size_t r = 0; r < prod.rows(); ++r)
            for (std::size_t c = 0; c < prod.cols(); ++c) CHECK(prod(r, c).is_zero());
        CHECK(rank(ker) == ker.cols());
    }
}

TEST_CASE("row space basis is canonical")
{
    Matrix<Rational> a(2, 3), b(2, 3);
    a(0, 0) = 1, a(0, 1) = 2, a(0, 2) = 3;
    a(1, 0) = 2, a(1, 1) = 4, a(1, 2) = 7;
    b(0, 0) = 3, b(0, 1) = 6, b(0, 2) = 10;
    b(1, 0) = 0, b(1, 1) = 0, b(1, 2) = 5;
    CHECK(row_space_basis(a) == row_space_basis(b));
}

TEST_CASE("subspace containment and equality ignore the chosen basis")
{
    Matrix<MultiQuad> v(4, 2), w(4, 2);
    v(0, 0) = 1, v(2, 0) = 1, v(1, 1) = MultiQuad::sqrt(2);
    w(0, 0) = 2, w(2, 0) = 2, w(1, 0) = MultiQuad::sqrt(2);
    w(0, 1) = 1, w(2, 1) = 1, w(1, 1) = MultiQuad::sqrt(8);
    const auto V = RealSubspace::span(v), W = RealSubspace::span(w);
    CHECK(V.dim() == 2);
    CHECK(V == W);
    CHECK(RealSubspace::whole(4).contains(V));
    CHECK(V.contains(RealSubspace::zero(4)));
    CHECK(RealSubspace::cut_out(V.equations(), 4) == V);
    CHECK(V.is_rational());
    Matrix<MultiQuad> u(4, 1);
    u(0, 0) = 1, u(2, 0) = MultiQuad::sqrt(2);
    CHECK_FALSE(RealSubspace::span(u).is_rational());
}

TEST_CASE("complex subspaces realify to twice their dimension")
{
    const ProductVariety A({EllipticFactor(0, MultiQuad::sqrt(2)), EllipticFactor(0, MultiQuad::sqrt(5))}, true);
    Matrix<ComplexMultiQuad> l(2, 1);
    l(0, 0) = 1;
    l(1, 0) = parse_complex_literal("sqrt(2) + i");
    const auto L = ComplexSubspace::span(l);
    const auto R = L.realify(A);
    CHECK(R.dim() == 2);
    // Realification is J-stable.
    const auto J = A.complex_structure();
    CHECK(R.contains(RealSubspace::span(J * R.basis())));
    CHECK(complex_span(R, A) == L);
    const auto [re, im] = L.realified_equations(A);
    CHECK(RealSubspace::cut_out(re.vcat(im), 4) == R);
}
