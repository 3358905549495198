#pragma once

// Constant-coefficient exterior forms on R^{2g} in the lattice coframe
// da_1, db_1, ..., da_g, db_g, cycle classes of the torus, and the homological
// existence certificate  integral_A [W] ^ omega_T ^ omega_T'.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hull.hpp"

namespace eac
{

struct DegreeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail
{

inline std::vector<std::size_t> mask_indices(std::uint32_t mask)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i)
        if (mask & (1u << i)) out.push_back(i);
    return out;
}

// Lexicographic order on the sorted index lists encoded by the masks.
struct LexMaskLess {
    bool operator()(std::uint32_t a, std::uint32_t b) const
    {
        auto x = mask_indices(a), y = mask_indices(b);
        return x < y;
    }
};

// Sign of the permutation that sorts the concatenation (indices of a, indices of b).
inline int wedge_sign(std::uint32_t a, std::uint32_t b)
{
    // Count pairs (i in a, j in b) with i > j.
    int inversions = 0;
    for (auto i : mask_indices(a)) inversions += std::popcount(b & ((1u << i) - 1u));
    return inversions % 2 ? -1 : 1;
}

} // namespace detail

inline std::string coframe_name(std::size_t idx)
{
    return std::string(idx % 2 ? "db" : "da") + std::to_string(idx / 2 + 1);
}

template <typename Scalar>
class ExteriorForm
{
public:
    using Terms = std::map<std::uint32_t, Scalar, detail::LexMaskLess>;

    ExteriorForm(std::size_t ambient, std::size_t degree) : m_ambient(ambient), m_degree(degree)
    {
        if (ambient > 30 || degree > ambient) throw std::invalid_argument("bad exterior form shape");
    }

    static ExteriorForm constant(std::size_t ambient, const Scalar &c)
    {
        ExteriorForm f(ambient, 0);
        f.set(0u, c);
        return f;
    }
    static ExteriorForm one_form(const std::vector<Scalar> &covector)
    {
        ExteriorForm f(covector.size(), 1);
        for (std::size_t i = 0; i < covector.size(); ++i) f.set(1u << i, covector[i]);
        return f;
    }
    /// dx_{i_1} ^ ... ^ dx_{i_k} for the (not necessarily sorted) index list.
    static ExteriorForm basis_form(std::size_t ambient, const std::vector<std::size_t> &indices)
    {
        ExteriorForm f = constant(ambient, Scalar(1));
        for (auto i : indices) {
            std::vector<Scalar> v(ambient);
            v[i] = Scalar(1);
            f = f.wedge(one_form(v));
        }
        return f;
    }
    static ExteriorForm top(std::size_t ambient)
    {
        ExteriorForm f(ambient, ambient);
        f.set((1u << ambient) - 1u, Scalar(1));
        return f;
    }

    std::size_t ambient_dim() const
    {
        return m_ambient;
    }
    std::size_t degree() const
    {
        return m_degree;
    }
    const Terms &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    Scalar coeff(std::uint32_t mask) const
    {
        auto it = m_terms.find(mask);
        return it == m_terms.end() ? Scalar() : it->second;
    }
    void set(std::uint32_t mask, const Scalar &c)
    {
        if (static_cast<std::size_t>(std::popcount(mask)) != m_degree) throw DegreeMismatch("key has wrong degree");
        if (eac_is_zero(c))
            m_terms.erase(mask);
        else
            m_terms[mask] = c;
    }

    ExteriorForm operator+(const ExteriorForm &o) const
    {
        check_same_shape(o);
        ExteriorForm out(*this);
        for (const auto &[k, c] : o.m_terms) out.set(k, out.coeff(k) + c);
        return out;
    }
    ExteriorForm operator-(const ExteriorForm &o) const
    {
        return *this + o.scaled(Scalar(-1));
    }
    ExteriorForm scaled(const Scalar &s) const
    {
        ExteriorForm out(m_ambient, m_degree);
        for (const auto &[k, c] : m_terms) out.set(k, c * s);
        return out;
    }

    ExteriorForm wedge(const ExteriorForm &o) const
    {
        if (o.m_ambient != m_ambient) throw DegreeMismatch("wedge of forms on different spaces");
        if (m_degree + o.m_degree > m_ambient) return ExteriorForm(m_ambient, m_ambient);
        ExteriorForm out(m_ambient, m_degree + o.m_degree);
        for (const auto &[ka, ca] : m_terms)
            for (const auto &[kb, cb] : o.m_terms) {
                if (ka & kb) continue;
                Scalar term = ca * cb;
                if (detail::wedge_sign(ka, kb) < 0) term = Scalar() - term;
                out.set(ka | kb, out.coeff(ka | kb) + term);
            }
        return out;
    }

    /// Scalar multiple whose lexicographically first coefficient is 1.
    ExteriorForm normalized() const
    {
        if (m_terms.empty()) return *this;
        return scaled(Scalar(1) / m_terms.begin()->second);
    }

    /// Some nonzero c with other = c * this, if it exists (exact scalars only).
    std::optional<Scalar> ratio_to(const ExteriorForm &other) const
    {
        if (other.m_degree != m_degree || other.m_ambient != m_ambient) return std::nullopt;
        if (m_terms.empty() || other.m_terms.empty()) return std::nullopt;
        const auto &[k0, c0] = *m_terms.begin();
        Scalar c = other.coeff(k0) / c0;
        if (eac_is_zero(c)) return std::nullopt;
        if (!(scaled(c) == other)) return std::nullopt;
        return c;
    }

    friend bool operator==(const ExteriorForm &a, const ExteriorForm &b)
    {
        return a.m_ambient == b.m_ambient && a.m_degree == b.m_degree && a.m_terms == b.m_terms;
    }

    std::string str() const
    {
        if (m_terms.empty()) return "0";
        std::string out;
        for (const auto &[k, c] : m_terms) {
            if (!out.empty()) out += " + ";
            out += "(" + scalar_str(c) + ")";
            for (auto i : detail::mask_indices(k)) out += (out.back() == ')' ? " " : "^") + coframe_name(i);
        }
        return out;
    }

private:
    static bool eac_is_zero(const Scalar &c)
    {
        if constexpr (std::is_floating_point_v<Scalar>)
            return c == Scalar(0);
        else
            return eac::is_zero(c);
    }
    static std::string scalar_str(const Scalar &c)
    {
        if constexpr (std::is_floating_point_v<Scalar>)
            return std::to_string(c);
        else
            return c.str();
    }
    void check_same_shape(const ExteriorForm &o) const
    {
        if (o.m_ambient != m_ambient || o.m_degree != m_degree) throw DegreeMismatch("forms of different degree");
    }

    std::size_t m_ambient;
    std::size_t m_degree;
    Terms m_terms;
};

using ExactForm = ExteriorForm<MultiQuad>;

/// Integral over A of a top-degree form: lattice coordinates have covolume 1, so
/// this is the coefficient of da_1 ^ db_1 ^ ... ^ da_g ^ db_g.
template <typename Scalar>
Scalar integrate_top(const ExteriorForm<Scalar> &form)
{
    if (form.degree() != form.ambient_dim())
        throw DegreeMismatch("integrate_top needs degree " + std::to_string(form.ambient_dim()) + ", got " +
                             std::to_string(form.degree()));
    return form.coeff((1u << form.ambient_dim()) - 1u);
}

/// Wedge of the one-forms given by the rows of `covectors`, in row order.
template <typename Scalar>
ExteriorForm<Scalar> wedge_rows(const Matrix<Scalar> &covectors, std::size_t ambient)
{
    auto out = ExteriorForm<Scalar>::constant(ambient, Scalar(1));
    for (std::size_t r = 0; r < covectors.rows(); ++r) out = out.wedge(ExteriorForm<Scalar>::one_form(covectors.row(r)));
    return out;
}

/// omega_T: the wedge of equations cutting T, normalised to a leading coefficient of 1.
/// The whole space gets the constant form 1.
inline ExactForm form_of_subspace(const RealSubspace &T)
{
    return wedge_rows(T.equations(), T.ambient_dim()).normalized();
}

/// omega_{R_L} ^ omega_{I_L}, the real form that omega_L^hol ^ conj(omega_L^hol) equals up to -2i.
/// Not normalised: the coefficients carry the equations of L verbatim.
inline ExactForm holomorphic_form_realized(const ComplexSubspace &L, const ProductVariety &A)
{
    auto [re, im] = L.realified_equations(A);
    return wedge_rows(re, A.real_dim()).wedge(wedge_rows(im, A.real_dim()));
}

/// Integral cycle class in H_k(A, Q) with respect to the subtori spanned by lattice directions.
class HomologyClass
{
public:
    HomologyClass(std::size_t ambient, std::size_t degree) : m_ambient(ambient), m_degree(degree) {}

    std::size_t degree() const
    {
        return m_degree;
    }
    std::size_t ambient_dim() const
    {
        return m_ambient;
    }
    const std::map<std::uint32_t, Rational> &coeffs() const
    {
        return m_coeffs;
    }
    void set(std::uint32_t mask, const Rational &q)
    {
        if (static_cast<std::size_t>(std::popcount(mask)) != m_degree) throw DegreeMismatch("cycle key has wrong degree");
        if (q.is_zero())
            m_coeffs.erase(mask);
        else
            m_coeffs[mask] = q;
    }

    /// Integral of a closed form of the same degree over the cycle.
    MultiQuad pair(const ExactForm &form) const
    {
        if (form.degree() != m_degree) throw DegreeMismatch("pairing needs equal degrees");
        MultiQuad acc;
        for (const auto &[k, q] : m_coeffs) acc += MultiQuad(q) * form.coeff(k);
        return acc;
    }

    /// eta with  integral_A eta ^ alpha = integral_cycle alpha  for every alpha.
    ExactForm poincare_dual() const
    {
        const std::uint32_t full = (1u << m_ambient) - 1u;
        ExactForm out(m_ambient, m_ambient - m_degree);
        for (const auto &[k, q] : m_coeffs) {
            const std::uint32_t comp = full & ~k;
            // dx_comp ^ dx_k = sign * top
            MultiQuad c(q);
            if (detail::wedge_sign(comp, k) < 0) c = -c;
            out.set(comp, out.coeff(comp) + c);
        }
        return out;
    }

private:
    std::size_t m_ambient;
    std::size_t m_degree;
    std::map<std::uint32_t, Rational> m_coeffs;
};

struct TrivialClass : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Class of a curve W in E_1 x E_2 from its fibre counts.
///
/// m = #(W cap (E_1 x {pt})) is the degree of W -> E_2 and n = #(W cap ({pt} x E_2))
/// the degree of W -> E_1, so [W] = m [{pt} x E_2] + n [E_1 x {pt}] with Poincare dual
/// m da1^db1 + n da2^db2.
inline HomologyClass class_of_hypersurface(int m, int n)
{
    if (m < 0 || n < 0) throw std::invalid_argument("fibre counts must be nonnegative");
    if (m == 0 && n == 0) throw TrivialClass("W has trivial class; not free");
    HomologyClass c(4, 2);
    c.set(0b1100u, Rational(m));
    c.set(0b0011u, Rational(n));
    return c;
}

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Certificate {
    /// integral_A eta_W ^ omega_T ^ omega_T'.
    MultiQuad value;
    /// integral_A eta_W ^ omega_{R_L} ^ omega_{I_L}, the independent route.
    MultiQuad holomorphic_value;
    ExactForm omega_T;
    ExactForm omega_T_prime;
    /// Equations (rows, lattice coordinates) of the complementary space T'.
    Matrix<MultiQuad> T_prime_equations;

    bool nonzero() const
    {
        return !value.is_zero();
    }
};

/// The homological existence certificate for L x W.
///
/// T' is cut by those realified equations of L (real parts first, then imaginary
/// parts) that are independent of the equations of T, so that T cap T' = L.
inline Certificate eac_certificate(const ExactForm &eta_W, const HullResult &hull, const ComplexSubspace &L,
                                   const ProductVariety &A)
{
    const std::size_t n = A.real_dim();
    if (eta_W.ambient_dim() != n) throw DegreeMismatch("class of W lives on a different torus");
    auto [re, im] = L.realified_equations(A);
    auto span = detail::lift(hull.equations);
    Matrix<MultiQuad> residual(0, n);
    std::size_t span_rank = rank(span);
    for (const auto *block : {&re, &im}) {
        for (std::size_t r = 0; r < block->rows(); ++r) {
            auto candidate = span;
            candidate.append_row(block->row(r));
            auto cr = rank(candidate);
            if (cr > span_rank) {
                span = std::move(candidate);
                span_rank = cr;
                residual.append_row(block->row(r));
            }
        }
    }
    // T cap T' = L  iff  the combined equations have full rank codim_R L and T contains L.
    auto realL = L.realify(A);
    if (span_rank != realL.codim() || !hull.T.contains(realL))
        throw CertificateError("could not build T' with T cap T' = L");
    auto meet = RealSubspace::cut_out(span, n);
    if (!(meet == realL)) throw CertificateError("T cap T' differs from L");

    if (eta_W.degree() + hull.T.codim() + residual.rows() != n)
        throw DegreeMismatch("degrees do not add up to 2g: need dim L + dim W = g");

    Certificate cert{MultiQuad(), MultiQuad(), form_of_subspace(hull.T), wedge_rows(residual, n), residual};
    cert.value = integrate_top(eta_W.wedge(cert.omega_T).wedge(cert.omega_T_prime));
    cert.holomorphic_value = integrate_top(eta_W.wedge(holomorphic_form_realized(L, A)));
    if (cert.value.is_zero() != cert.holomorphic_value.is_zero())
        throw CertificateError("certificate routes disagree on vanishing");
    return cert;
}

} // namespace eac
