#pragma once

// Exact arithmetic in multiquadratic fields Q(sqrt(d_1), ..., sqrt(d_m)).
//
// An element is stored as a finite sum  sum_k q_k * sqrt(k)  where every key k
// is a squarefree positive integer (k = 1 is the rational part). Products of
// radicals are renormalised on the fly, so sqrt(2)*sqrt(5) is stored under the
// single key 10. Since square roots of distinct squarefree integers are linearly
// independent over Q, this representation is unique and equality is
// coefficient-wise.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace eac
{

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct DivisionByZero : std::domain_error {
    using std::domain_error::domain_error;
};

inline bool is_zero(const Rational &q)
{
    return q.is_zero();
}

inline long double to_long_double(const Rational &q)
{
    return numerator(q).convert_to<long double>() / denominator(q).convert_to<long double>();
}

/// Parses "p", "-p/q" or a finite decimal such as "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&] { throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) fail();
    bool neg = false;
    std::size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        pos = 1;
    }
    auto digits = [&](std::string_view d) {
        if (d.empty()) fail();
        for (char c : d) {
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        }
        return Integer(std::string(d));
    };
    std::string_view body(s.c_str() + pos, s.size() - pos);
    Rational r;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        Integer den = digits(body.substr(slash + 1));
        if (den == 0) throw DivisionByZero("zero denominator in '" + std::string(text) + "'");
        r = Rational(digits(body.substr(0, slash)), den);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto frac = body.substr(dot + 1);
        Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
        Integer whole = dot == 0 ? Integer(0) : digits(body.substr(0, dot));
        Integer part = frac.empty() ? Integer(0) : digits(frac);
        r = Rational(whole * scale + part, scale);
    } else {
        r = Rational(digits(body));
    }
    return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational &q)
{
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

namespace detail
{

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("multiquad radicand overflow");
    return out;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Writes n = s^2 * r with r squarefree; returns {s, r}.
inline std::pair<std::uint64_t, std::uint64_t> split_square(std::uint64_t n)
{
    std::uint64_t s = 1, r = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) r *= p;
    }
    return {s, checked_mul(r, n)};
}

} // namespace detail

inline bool is_squarefree(std::uint64_t n)
{
    return n >= 1 && detail::split_square(n).first == 1;
}

class MultiQuad
{
public:
    using Terms = std::map<std::uint64_t, Rational>;

    MultiQuad() = default;
    MultiQuad(int v) : MultiQuad(Rational(v)) {}
    MultiQuad(const Rational &q)
    {
        if (!q.is_zero()) m_terms.emplace(1, q);
    }

    /// q * sqrt(d); d need not be squarefree (sqrt(12) becomes 2*sqrt(3)).
    static MultiQuad sqrt(std::uint64_t d, const Rational &q = Rational(1))
    {
        if (d == 0) return MultiQuad();
        auto [s, r] = detail::split_square(d);
        MultiQuad out;
        Rational c = q * s;
        if (!c.is_zero()) out.m_terms.emplace(r, c);
        return out;
    }

    const Terms &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    bool is_rational() const
    {
        return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first == 1);
    }
    Rational rational_part() const
    {
        auto it = m_terms.find(1);
        return it == m_terms.end() ? Rational(0) : it->second;
    }
    Rational coeff(std::uint64_t key) const
    {
        auto it = m_terms.find(key);
        return it == m_terms.end() ? Rational(0) : it->second;
    }

    /// Squarefree radicands > 1 that occur with nonzero coefficient.
    std::vector<std::uint64_t> radicands() const
    {
        std::vector<std::uint64_t> out;
        for (const auto &[k, q] : m_terms) {
            if (k > 1) out.push_back(k);
        }
        return out;
    }

    long double to_long_double() const
    {
        long double acc = 0;
        for (const auto &[k, q] : m_terms) {
            acc += eac::to_long_double(q) * std::sqrt(static_cast<long double>(k));
        }
        return acc;
    }
    double to_double() const
    {
        return static_cast<double>(to_long_double());
    }

    MultiQuad operator-() const
    {
        MultiQuad out(*this);
        for (auto &[k, q] : out.m_terms) q = -q;
        return out;
    }
    MultiQuad &operator+=(const MultiQuad &o)
    {
        for (const auto &[k, q] : o.m_terms) add_term(k, q);
        return *this;
    }
    MultiQuad &operator-=(const MultiQuad &o)
    {
        for (const auto &[k, q] : o.m_terms) add_term(k, -q);
        return *this;
    }
    friend MultiQuad operator+(MultiQuad a, const MultiQuad &b)
    {
        return a += b;
    }
    friend MultiQuad operator-(MultiQuad a, const MultiQuad &b)
    {
        return a -= b;
    }
    friend MultiQuad operator*(const MultiQuad &a, const MultiQuad &b)
    {
        MultiQuad out;
        for (const auto &[ka, qa] : a.m_terms) {
            for (const auto &[kb, qb] : b.m_terms) {
                const std::uint64_t g = std::gcd(ka, kb);
                // sqrt(ka) * sqrt(kb) = g * sqrt((ka/g) * (kb/g)), the latter squarefree.
                out.add_term(detail::checked_mul(ka / g, kb / g), qa * qb * g);
            }
        }
        return out;
    }
    MultiQuad &operator*=(const MultiQuad &o)
    {
        return *this = *this * o;
    }

    MultiQuad inverse() const
    {
        if (is_zero()) throw DivisionByZero("inverse of zero multiquad element");
        if (is_rational()) return MultiQuad(Rational(1) / rational_part());
        // Split off the largest prime p occurring in a radicand: x = u + v*sqrt(p),
        // then 1/x = (u - v*sqrt(p)) / (u^2 - p v^2) and the norm lives in a
        // field with one generator fewer.
        std::uint64_t p = 0;
        for (const auto &[k, q] : m_terms) {
            for (auto f : detail::prime_factors(k)) p = std::max(p, f);
        }
        MultiQuad u, v;
        for (const auto &[k, q] : m_terms) {
            if (k % p == 0)
                v.m_terms.emplace(k / p, q);
            else
                u.m_terms.emplace(k, q);
        }
        MultiQuad conj = u - v * MultiQuad::sqrt(p);
        MultiQuad norm = u * u - v * v * MultiQuad(Rational(p));
        return conj * norm.inverse();
    }
    friend MultiQuad operator/(const MultiQuad &a, const MultiQuad &b)
    {
        return a * b.inverse();
    }
    MultiQuad &operator/=(const MultiQuad &o)
    {
        return *this = *this / o;
    }

    friend bool operator==(const MultiQuad &a, const MultiQuad &b) = default;

    /// Canonical rendering, radicands in descending order, e.g. "2*sqrt(5)+2*sqrt(2)" or "-1/2*sqrt(3)+1".
    std::string str() const
    {
        if (m_terms.empty()) return "0";
        std::string out;
        for (auto it = m_terms.rbegin(); it != m_terms.rend(); ++it) {
            const auto &[k, q] = *it;
            Rational mag = q < 0 ? Rational(-q) : q;
            if (q < 0)
                out += "-";
            else if (!out.empty())
                out += "+";
            if (k == 1) {
                out += eac::to_string(mag);
            } else {
                if (mag != 1) out += eac::to_string(mag) + "*";
                out += "sqrt(" + std::to_string(k) + ")";
            }
        }
        return out;
    }

    friend std::ostream &operator<<(std::ostream &os, const MultiQuad &x)
    {
        return os << x.str();
    }

private:
    void add_term(std::uint64_t key, const Rational &q)
    {
        if (q.is_zero()) return;
        auto [it, inserted] = m_terms.try_emplace(key, q);
        if (!inserted) {
            it->second += q;
            if (it->second.is_zero()) m_terms.erase(it);
        }
    }

    Terms m_terms;
};

inline bool is_zero(const MultiQuad &x)
{
    return x.is_zero();
}

} // namespace eac
