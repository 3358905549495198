#pragma once

// Dense matrices over exact fields and the Gaussian elimination routines that
// every dimension count in the library goes through.

#include <cassert>
#include <concepts>
#include <cstddef>
#include <vector>

#include "complex_multiquad.hpp"
#include "multiquad.hpp"

namespace eac
{

template <typename T>
concept ExactField = requires(const T &a, const T &b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a / b } -> std::convertible_to<T>;
    { is_zero(a) } -> std::convertible_to<bool>;
    T(1);
};

template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : m_rows(rows), m_cols(cols), m_data(rows * cols) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const
    {
        return m_rows;
    }
    std::size_t cols() const
    {
        return m_cols;
    }
    T &operator()(std::size_t r, std::size_t c)
    {
        assert(r < m_rows && c < m_cols);
        return m_data[r * m_cols + c];
    }
    const T &operator()(std::size_t r, std::size_t c) const
    {
        assert(r < m_rows && c < m_cols);
        return m_data[r * m_cols + c];
    }

    std::vector<T> row(std::size_t r) const
    {
        return {m_data.begin() + r * m_cols, m_data.begin() + (r + 1) * m_cols};
    }
    std::vector<T> col(std::size_t c) const
    {
        std::vector<T> out;
        out.reserve(m_rows);
        for (std::size_t r = 0; r < m_rows; ++r) out.push_back((*this)(r, c));
        return out;
    }
    void append_row(const std::vector<T> &v)
    {
        if (m_rows == 0 && m_cols == 0) m_cols = v.size();
        assert(v.size() == m_cols);
        m_data.insert(m_data.end(), v.begin(), v.end());
        ++m_rows;
    }
    static Matrix from_columns(const std::vector<std::vector<T>> &cols, std::size_t rows)
    {
        Matrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            assert(cols[c].size() == rows);
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
        }
        return m;
    }

    Matrix transpose() const
    {
        Matrix t(m_cols, m_rows);
        for (std::size_t r = 0; r < m_rows; ++r)
            for (std::size_t c = 0; c < m_cols; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix hcat(const Matrix &o) const
    {
        assert(o.m_rows == m_rows || m_cols == 0 || o.m_cols == 0);
        std::size_t rows = m_cols == 0 ? o.m_rows : m_rows;
        Matrix out(rows, m_cols + o.m_cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < m_cols; ++c) out(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < o.m_cols; ++c) out(r, m_cols + c) = o(r, c);
        }
        return out;
    }
    Matrix vcat(const Matrix &o) const
    {
        std::size_t cols = m_rows == 0 ? o.m_cols : m_cols;
        Matrix out(m_rows + o.m_rows, cols);
        for (std::size_t r = 0; r < m_rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) out(r, c) = (*this)(r, c);
        for (std::size_t r = 0; r < o.m_rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) out(m_rows + r, c) = o(r, c);
        return out;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b)
    {
        assert(a.m_cols == b.m_rows);
        Matrix out(a.m_rows, b.m_cols);
        for (std::size_t i = 0; i < a.m_rows; ++i)
            for (std::size_t k = 0; k < a.m_cols; ++k) {
                if (is_zero(a(i, k))) continue;
                for (std::size_t j = 0; j < b.m_cols; ++j) out(i, j) = out(i, j) + a(i, k) * b(k, j);
            }
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<T> m_data;
};

/// In-place reduction to reduced row echelon form; returns the pivot columns.
template <ExactField T>
std::vector<std::size_t> row_reduce(Matrix<T> &m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && is_zero(m(sel, col))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
        const T inv = T(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = m(row, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            const T f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) = m(r, c) - f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <ExactField T>
std::size_t rank(Matrix<T> m)
{
    return row_reduce(m).size();
}

/// Nonzero rows of the reduced row echelon form: a canonical basis of the row space.
template <ExactField T>
Matrix<T> row_space_basis(Matrix<T> m)
{
    auto pivots = row_reduce(m);
    Matrix<T> out(pivots.size(), m.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

/// Basis of {x : m x = 0}, one column per free variable.
template <ExactField T>
Matrix<T> null_space(Matrix<T> m)
{
    const std::size_t n = m.cols();
    auto pivots = row_reduce(m);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(n);
        v[f] = T(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return Matrix<T>::from_columns(basis, n);
}

/// Indices of a maximal linearly independent prefix-greedy subset of the columns.
template <ExactField T>
std::vector<std::size_t> independent_columns(const Matrix<T> &m)
{
    Matrix<T> copy = m;
    return row_reduce(copy);
}

template <typename T>
Matrix<T> select_columns(const Matrix<T> &m, const std::vector<std::size_t> &idx)
{
    Matrix<T> out(m.rows(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t r = 0; r < m.rows(); ++r) out(r, j) = m(r, idx[j]);
    return out;
}

template <typename T>
Matrix<T> select_rows(const Matrix<T> &m, const std::vector<std::size_t> &idx)
{
    Matrix<T> out(idx.size(), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t c = 0; c < m.cols(); ++c) out(i, c) = m(idx[i], c);
    return out;
}

} // namespace eac
