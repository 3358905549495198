#pragma once

// The delta map (l, w) -> w - exp_A(l) on L x W and the numerical rank of its differential.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "segre.hpp"
#include "subspace.hpp"

namespace eac
{

using CVec = std::vector<std::complex<double>>;

/// Numeric parametrisation l -> z = sum_k l_k v_k of a complex subspace by its echelon basis.
class LParametrization
{
public:
    LParametrization() = default;
    explicit LParametrization(const ComplexSubspace &L) : m_g(L.g()), m_pivots(L.pivots())
    {
        const auto B = L.echelon_basis();
        m_basis.assign(B.cols(), CVec(m_g));
        for (std::size_t k = 0; k < B.cols(); ++k)
            for (std::size_t j = 0; j < m_g; ++j) m_basis[k][j] = B(j, k).to_complex();
    }

    std::size_t dim() const
    {
        return m_basis.size();
    }
    std::size_t g() const
    {
        return m_g;
    }
    /// Coordinate index at which basis vector k has entry 1 and the others have 0.
    const std::vector<std::size_t> &pivots() const
    {
        return m_pivots;
    }
    const CVec &vector(std::size_t k) const
    {
        return m_basis.at(k);
    }

    CVec point(const CVec &l) const
    {
        if (l.size() != dim()) throw std::invalid_argument("L-parameter has the wrong length");
        CVec z(m_g);
        for (std::size_t k = 0; k < dim(); ++k)
            for (std::size_t j = 0; j < m_g; ++j) z[j] += l[k] * m_basis[k][j];
        return z;
    }

private:
    std::size_t m_g = 0;
    std::vector<std::size_t> m_pivots;
    std::vector<CVec> m_basis;
};

struct OffVariety : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// F(exp_A(z)) for g = 2, or nullopt when a factor is at infinity.
inline std::optional<std::complex<double>> segre_value(const SegrePolynomial &F, const ProductExp<double> &exp, const CVec &z)
{
    const auto p = exp.segre(z[0], z[1]);
    if (!p.finite()) return std::nullopt;
    return F.evaluate(p);
}

/// |F| / sum |c_k m_k|, a scale-free membership test.
inline double normalized_residual(const SegrePolynomial &F, const ProductExp<double> &exp, const CVec &z)
{
    const auto p = exp.segre(z[0], z[1]);
    if (!p.finite()) return std::numeric_limits<double>::infinity();
    const double mag = F.magnitude(p);
    return mag == 0 ? 0 : std::abs(F.evaluate(p)) / mag;
}

/// w - exp_A(l), reduced to lattice coordinates in [0, 1). `F` is null when W = A.
inline CVec delta_map(const LParametrization &L, const CVec &l, const CVec &w, const ProductExp<double> &exp,
                      const SegrePolynomial *F = nullptr, double membership_tol = 1e-8)
{
    if (w.size() != exp.g()) throw std::invalid_argument("w has the wrong dimension");
    if (F && normalized_residual(*F, exp, w) > membership_tol) throw OffVariety("w is not on W");
    const auto z = L.point(l);
    CVec d(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) d[j] = w[j] - z[j];
    return exp.variety().reduce<double>(std::span<const std::complex<double>>(d));
}

struct JacobianProbe {
    int rank = 0;
    std::vector<double> singular_values;
};

namespace detail
{

// Holomorphic gradient of z -> F(exp z) by central differences.
inline std::optional<CVec> segre_gradient(const SegrePolynomial &F, const ProductExp<double> &exp, const CVec &z, double h)
{
    CVec grad(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        CVec a = z, b = z;
        a[j] += h;
        b[j] -= h;
        auto fa = segre_value(F, exp, a), fb = segre_value(F, exp, b);
        if (!fa || !fb) return std::nullopt;
        grad[j] = (*fa - *fb) / (2 * h);
    }
    return grad;
}

// Pulls z back onto F = 0 along the conjugate gradient direction.
inline CVec project_to_curve(const SegrePolynomial &F, const ProductExp<double> &exp, CVec z, double h)
{
    for (int it = 0; it < 20; ++it) {
        auto v = segre_value(F, exp, z);
        auto g = segre_gradient(F, exp, z, h);
        if (!v || !g) break;
        double n2 = 0;
        for (auto c : *g) n2 += std::norm(c);
        if (n2 == 0) break;
        for (std::size_t j = 0; j < z.size(); ++j) z[j] -= *v * std::conj((*g)[j]) / n2;
        if (std::abs(*v) < 1e-15) break;
    }
    return z;
}

} // namespace detail

/// Numerical rank of d(delta) at (l, w): columns are difference quotients (step 1e-6) of
/// delta along the L-parameters and along tangent directions of W; rank counts singular
/// values above 1e-8 times the largest.
inline JacobianProbe jacobian_probe(const LParametrization &L, const CVec &l, const CVec &w, const ProductExp<double> &exp,
                                    const SegrePolynomial *F, double step = 1e-6, double rank_tol = 1e-8)
{
    const std::size_t g = exp.g();
    auto raw_delta = [&](const CVec &ll, const CVec &ww) {
        const auto z = L.point(ll);
        CVec d(g);
        for (std::size_t j = 0; j < g; ++j) d[j] = ww[j] - z[j];
        return d;
    };
    std::vector<CVec> cols;
    for (std::size_t k = 0; k < L.dim(); ++k) {
        CVec a = l, b = l;
        a[k] += step;
        b[k] -= step;
        const auto da = raw_delta(a, w), db = raw_delta(b, w);
        CVec c(g);
        for (std::size_t j = 0; j < g; ++j) c[j] = (da[j] - db[j]) / (2 * step);
        cols.push_back(c);
    }
    std::vector<CVec> tangents;
    if (!F) {
        for (std::size_t j = 0; j < g; ++j) {
            CVec e(g);
            e[j] = 1;
            tangents.push_back(e);
        }
    } else {
        if (normalized_residual(*F, exp, w) > 1e-8) throw OffVariety("w is not on W");
        auto grad = detail::segre_gradient(*F, exp, w, step);
        if (!grad) throw OffVariety("w is at infinity");
        Eigen::MatrixXcd G(1, g);
        for (std::size_t j = 0; j < g; ++j) G(0, j) = (*grad)[j];
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(G);
        lu.setThreshold(1e-10);
        const Eigen::MatrixXcd K = lu.kernel();
        for (Eigen::Index c = 0; c < K.cols(); ++c) {
            CVec v(g);
            double n = K.col(c).norm();
            for (std::size_t j = 0; j < g; ++j) v[j] = K(j, c) / n;
            tangents.push_back(v);
        }
    }
    for (const auto &v : tangents) {
        CVec a = w, b = w;
        for (std::size_t j = 0; j < g; ++j) {
            a[j] += step * v[j];
            b[j] -= step * v[j];
        }
        if (F) {
            a = detail::project_to_curve(*F, exp, a, step);
            b = detail::project_to_curve(*F, exp, b, step);
        }
        const auto da = raw_delta(l, a), db = raw_delta(l, b);
        CVec c(g);
        for (std::size_t j = 0; j < g; ++j) c[j] = (da[j] - db[j]) / (2 * step);
        cols.push_back(c);
    }
    JacobianProbe out;
    if (cols.empty()) return out;
    Eigen::MatrixXcd M(g, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t j = 0; j < g; ++j) M(j, c) = cols[c][j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto &s = svd.singularValues();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        out.singular_values.push_back(s(k));
        if (s(k) > rank_tol * s(0)) ++out.rank;
    }
    return out;
}

} // namespace eac
