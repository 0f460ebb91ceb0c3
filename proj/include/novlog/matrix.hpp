#pragma once

#include "rational.hpp"

#include <cassert>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace novlog {

/// Dense row-major matrix over an arbitrary (possibly non-commutative)
/// coefficient type. Arithmetic lives with the coefficient ring, not here.
template <typename T> class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T &fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T &operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T &operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    template <typename F> auto map(F &&f) const {
        using U = decltype(f(std::declval<const T &>()));
        Matrix<U> out;
        out.rows_ = rows_;
        out.cols_ = cols_;
        out.data_.reserve(data_.size());
        for (const auto &x : data_)
            out.data_.push_back(f(x));
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    template <typename> friend class Matrix;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Generic product for any coefficient type closed under + and *.
template <typename T> Matrix<T> multiply(const Matrix<T> &a, const Matrix<T> &b, const T &zero) {
    assert(a.cols() == b.rows());
    Matrix<T> out(a.rows(), b.cols(), zero);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) = out(i, j) + a(i, k) * b(k, j);
    return out;
}

using RationalMatrix = Matrix<Rational>;

inline RationalMatrix rational_identity(std::size_t n) {
    RationalMatrix m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

/// Exact Gauss-Jordan inversion; nullopt when singular.
inline std::optional<RationalMatrix> invert(RationalMatrix a) {
    assert(a.is_square());
    const std::size_t n = a.rows();
    RationalMatrix inv = rational_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0)
            ++pivot;
        if (pivot == n)
            return std::nullopt;
        a.swap_rows(pivot, col);
        inv.swap_rows(pivot, col);
        const Rational scale = 1 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0)
                continue;
            const Rational f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace novlog
