#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/symexpr/rational_function.hpp"

namespace cwb::sym {

/// Dense row-major matrix over an exact scalar type.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<S>& data() const { return data_; }

  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.data_) x = -x;
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const S& a = (*this)(i, k);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          if (!is_zero(o(k, j))) r(i, j) += a * o(k, j);
      }
    return r;
  }
  Matrix scaled(const S& c) const {
    Matrix r = *this;
    for (auto& x : r.data_)
      if (!is_zero(x)) x *= c;
    return r;
  }
  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  bool is_zero_matrix() const {
    for (const auto& x : data_)
      if (!is_zero(x)) return false;
    return true;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  /// Commutator AB - BA.
  static Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<S> data_;
};

using QMatrix = Matrix<Rational>;
using FnMatrix = Matrix<RationalFn>;

/// Determinant and inverse by Gauss-Jordan elimination over the field.
/// The inverse is nullopt when the matrix is singular.
template <class S>
struct Inversion {
  S determinant;
  std::optional<Matrix<S>> inverse;
};

template <class S>
Inversion<S> invert(const Matrix<S>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<S> a = m;
  Matrix<S> inv = Matrix<S>::identity(n);
  S det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && is_zero(a(piv, c))) ++piv;
    if (piv == n) return {S(0), std::nullopt};
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
      det = -det;
    }
    S p = a(c, c);
    det *= p;
    S pinv = S(1) / p;
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_zero(a(c, j))) a(c, j) *= pinv;
      if (!is_zero(inv(c, j))) inv(c, j) *= pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      S f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(a(c, j))) a(r, j) -= f * a(c, j);
        if (!is_zero(inv(c, j))) inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return {det, std::move(inv)};
}

/// Inertia (negative, zero, positive eigenvalue counts) of a symmetric
/// rational matrix via symmetric Gaussian elimination.
struct Inertia {
  std::size_t negative = 0, zero = 0, positive = 0;
};
Inertia inertia(const QMatrix& symmetric);

QMatrix evaluate(const FnMatrix& m, const Assignment& at);

}  // namespace cwb::sym
