#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "msbc/errors.hpp"
#include "msbc/series/coefficient.hpp"

namespace msbc {

// Small row-major matrix over Rational or double. Elimination picks the first
// non-zero pivot for exact types and the largest magnitude otherwise.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows.size() ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw StructuralError("matrix: ragged initializer");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols_ != y.rows_) throw StructuralError("matrix: shape mismatch in product");
    DenseMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (CoeffTraits<T>::is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend DenseMatrix operator-(DenseMatrix x, const DenseMatrix& y) {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }
  DenseMatrix transpose() const {
    DenseMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  bool operator==(const DenseMatrix&) const = default;

  // nullopt when singular.
  std::optional<DenseMatrix> inverse() const {
    if (rows_ != cols_) throw StructuralError("matrix: inverse of a non-square matrix");
    const std::size_t n = rows_;
    DenseMatrix a = *this, inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      auto p = pivot_row(a, col, col);
      if (!p) return std::nullopt;
      a.swap_rows(col, *p);
      inv.swap_rows(col, *p);
      T d = a(col, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(col, j) /= d;
        inv(col, j) /= d;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col || CoeffTraits<T>::is_zero(a(i, col))) continue;
        T f = a(i, col);
        for (std::size_t j = 0; j < n; ++j) {
          a(i, j) -= f * a(col, j);
          inv(i, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  // Basis of the null space from the reduced row echelon form.
  std::vector<std::vector<T>> kernel(double tol = 0.0) const {
    DenseMatrix a = *this;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
      auto p = pivot_row(a, col, r, tol);
      if (!p) continue;
      a.swap_rows(r, *p);
      T d = a(r, col);
      for (std::size_t j = 0; j < cols_; ++j) a(r, j) /= d;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        T f = a(i, col);
        if (CoeffTraits<T>::is_zero(f)) continue;
        for (std::size_t j = 0; j < cols_; ++j) a(i, j) -= f * a(r, j);
      }
      pivots.push_back(col);
      ++r;
    }
    std::vector<std::vector<T>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
      std::vector<T> v(cols_, T(0));
      v[free] = T(1);
      for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a(k, free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }

  static std::optional<std::size_t> pivot_row(const DenseMatrix& a, std::size_t col, std::size_t from,
                                              double tol = 0.0) {
    if constexpr (CoeffTraits<T>::exact) {
      for (std::size_t i = from; i < a.rows_; ++i)
        if (!CoeffTraits<T>::is_zero(a(i, col))) return i;
      return std::nullopt;
    } else {
      std::size_t best = from;
      double bv = -1.0;
      for (std::size_t i = from; i < a.rows_; ++i)
        if (std::fabs(a(i, col)) > bv) {
          bv = std::fabs(a(i, col));
          best = i;
        }
      if (bv <= tol) return std::nullopt;
      return best;
    }
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

}  // namespace msbc
