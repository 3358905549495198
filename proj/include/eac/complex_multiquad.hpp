#pragma once

// Gaussian extension K(i) of a real multiquadratic field K, plus the literal
// parser used by instance files ("1", "-1/2*sqrt(2)", "(1+i)/2", "3*i*sqrt(5)").

#include <cctype>
#include <complex>
#include <string>
#include <string_view>

#include "multiquad.hpp"

namespace eac
{

struct ComplexMultiQuad {
    MultiQuad re;
    MultiQuad im;

    ComplexMultiQuad() = default;
    ComplexMultiQuad(int v) : re(v) {}
    ComplexMultiQuad(MultiQuad r, MultiQuad i = MultiQuad()) : re(std::move(r)), im(std::move(i)) {}

    static ComplexMultiQuad imag_unit()
    {
        return {MultiQuad(), MultiQuad(1)};
    }

    bool is_zero() const
    {
        return re.is_zero() && im.is_zero();
    }
    bool is_real() const
    {
        return im.is_zero();
    }
    ComplexMultiQuad conj() const
    {
        return {re, -im};
    }
    std::complex<double> to_complex() const
    {
        return {re.to_double(), im.to_double()};
    }
    std::complex<long double> to_complex_ld() const
    {
        return {re.to_long_double(), im.to_long_double()};
    }

    ComplexMultiQuad operator-() const
    {
        return {-re, -im};
    }
    friend ComplexMultiQuad operator+(const ComplexMultiQuad &a, const ComplexMultiQuad &b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexMultiQuad operator-(const ComplexMultiQuad &a, const ComplexMultiQuad &b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexMultiQuad operator*(const ComplexMultiQuad &a, const ComplexMultiQuad &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexMultiQuad operator/(const ComplexMultiQuad &a, const ComplexMultiQuad &b)
    {
        // |b|^2 is a sum of two real squares, nonzero unless b = 0.
        MultiQuad n = b.re * b.re + b.im * b.im;
        if (n.is_zero()) throw DivisionByZero("division by zero complex multiquad element");
        MultiQuad inv = n.inverse();
        ComplexMultiQuad num = a * b.conj();
        return {num.re * inv, num.im * inv};
    }
    ComplexMultiQuad &operator+=(const ComplexMultiQuad &o)
    {
        return *this = *this + o;
    }
    ComplexMultiQuad &operator-=(const ComplexMultiQuad &o)
    {
        return *this = *this - o;
    }
    ComplexMultiQuad &operator*=(const ComplexMultiQuad &o)
    {
        return *this = *this * o;
    }

    friend bool operator==(const ComplexMultiQuad &, const ComplexMultiQuad &) = default;

    std::string str() const
    {
        if (im.is_zero()) return re.str();
        std::string imag = im == MultiQuad(1) ? "i" : (im == MultiQuad(-1) ? "-i" : "(" + im.str() + ")*i");
        if (re.is_zero()) return imag;
        return re.str() + (imag[0] == '-' ? "" : "+") + imag;
    }
};

inline bool is_zero(const ComplexMultiQuad &x)
{
    return x.is_zero();
}

namespace detail
{

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := number | 'i' | 'sqrt(' integer ')' | '(' expr ')'
class LiteralParser
{
public:
    explicit LiteralParser(std::string_view text) : m_text(text) {}

    ComplexMultiQuad parse()
    {
        auto v = expr();
        skip_ws();
        if (m_pos != m_text.size()) fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string &why) const
    {
        throw std::invalid_argument("bad literal '" + std::string(m_text) + "': " + why);
    }
    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
    }
    bool accept(char c)
    {
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }
    ComplexMultiQuad expr()
    {
        ComplexMultiQuad acc;
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }
    ComplexMultiQuad term()
    {
        ComplexMultiQuad acc = factor();
        while (true) {
            if (accept('*'))
                acc *= factor();
            else if (accept('/'))
                acc = acc / factor();
            else
                return acc;
        }
    }
    ComplexMultiQuad factor()
    {
        skip_ws();
        if (m_pos >= m_text.size()) fail("unexpected end");
        if (accept('(')) {
            auto v = expr();
            if (!accept(')')) fail("missing ')'");
            return v;
        }
        if (m_text.substr(m_pos, 5) == "sqrt(") {
            m_pos += 5;
            skip_ws();
            auto start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) ++m_pos;
            if (start == m_pos) fail("sqrt expects a nonnegative integer");
            auto d = std::stoull(std::string(m_text.substr(start, m_pos - start)));
            if (!accept(')')) fail("missing ')' after sqrt");
            return ComplexMultiQuad(MultiQuad::sqrt(d));
        }
        if (m_text[m_pos] == 'i') {
            ++m_pos;
            return ComplexMultiQuad::imag_unit();
        }
        auto start = m_pos;
        while (m_pos < m_text.size() && (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '.'))
            ++m_pos;
        if (start == m_pos) fail("expected a number");
        return ComplexMultiQuad(MultiQuad(parse_rational(m_text.substr(start, m_pos - start))));
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
};

} // namespace detail

inline ComplexMultiQuad parse_complex_literal(std::string_view text)
{
    return detail::LiteralParser(text).parse();
}

inline MultiQuad parse_real_literal(std::string_view text)
{
    auto v = parse_complex_literal(text);
    if (!v.is_real()) throw std::invalid_argument("literal '" + std::string(text) + "' must be real");
    return v.re;
}

} // namespace eac
