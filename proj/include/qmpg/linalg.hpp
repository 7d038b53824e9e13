/**
 * @file linalg.hpp
 * @brief Dense exact linear algebra over any field type.
 *
 * F needs +, -, *, /, == and a free function is_zero(const F&).
 * Pivoting is "first nonzero entry", so results are deterministic.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "qmpg/rational.hpp"

namespace qmpg {

inline bool is_zero(const mpq_class& x) { return x == 0; }
inline bool is_zero(const Rat& x) { return x.is_zero(); }

template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const F& fill = F(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (is_zero(a(i, k))) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!is_zero(b(k, j))) r(i, j) = r(i, j) + a(i, k) * b(k, j);
            }
        return r;
    }
    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch in sum");
        Matrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: shape mismatch in difference");
        Matrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            if (!(a.data_[i] == b.data_[i])) return false;
        return true;
    }

    [[nodiscard]] std::vector<F> apply(const std::vector<F>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix: vector length mismatch");
        std::vector<F> r(rows_, F(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!is_zero((*this)(i, j)) && !is_zero(v[j])) r[i] = r[i] + (*this)(i, j) * v[j];
        return r;
    }

    [[nodiscard]] bool is_zero_matrix() const {
        for (const auto& x : data_)
            if (!is_zero(x)) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> data_;
};

/// Reduced row echelon form with pivot columns.
template <class F>
struct Echelon {
    Matrix<F> rref;
    std::vector<std::size_t> pivots;
};

template <class F>
Echelon<F> echelon(Matrix<F> m) {
    Echelon<F> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
        const F inv = F(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c)
            if (!is_zero(m(row, c))) m(row, c) = m(row, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || is_zero(m(r, col))) continue;
            const F f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                if (!is_zero(m(row, c))) m(r, c) = m(r, c) - f * m(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.rref = std::move(m);
    return out;
}

/// Forward elimination only; no back substitution.
template <class F>
std::size_t rank(Matrix<F> m) {
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
        const F inv = F(1) / m(row, col);
        for (std::size_t r = row + 1; r < m.rows(); ++r) {
            if (is_zero(m(r, col))) continue;
            const F f = m(r, col) * inv;
            for (std::size_t c = col + 1; c < m.cols(); ++c)
                if (!is_zero(m(row, c))) m(r, c) = m(r, c) - f * m(row, c);
        }
        ++row;
    }
    return row;
}

/// Basis of {x : m x = 0}, one vector per free column.
template <class F>
std::vector<std::vector<F>> kernel(const Matrix<F>& m) {
    const auto e = echelon(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(m.cols(), F(0));
        v[free] = F(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = F(0) - e.rref(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Indices of the first maximal linearly independent set of rows, in order.
template <class F>
std::vector<std::size_t> independent_rows(const Matrix<F>& m) {
    return echelon(m.transpose()).pivots;
}

/// Some solution of m x = b, or nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    Matrix<F> aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    const auto e = echelon(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    std::vector<F> x(m.cols(), F(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.rref(r, m.cols());
    return x;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("inverse: matrix not square");
    Matrix<F> aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = F(1);
    }
    const auto e = echelon(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
    Matrix<F> inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.rref(r, n + c);
    return inv;
}

template <class F>
F det(Matrix<F> m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::invalid_argument("det: matrix not square");
    F d(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && is_zero(m(piv, col))) ++piv;
        if (piv == n) return F(0);
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
            d = F(0) - d;
        }
        d = d * m(col, col);
        const F inv = F(1) / m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (is_zero(m(r, col))) continue;
            const F f = m(r, col) * inv;
            for (std::size_t c = col; c < n; ++c) m(r, c) = m(r, c) - f * m(col, c);
        }
    }
    return d;
}

using QMatrix = Matrix<mpq_class>;

}  // namespace qmpg
