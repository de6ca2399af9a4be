#pragma once

#include <optional>
#include <vector>

#include "tpq/scalar.hpp"

namespace tpq {

/// Dense matrix over an exact field (Rational or GaussRat), row-major.
template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> zero_matrix(std::size_t rows, std::size_t cols) {
  return Matrix<T>(rows, std::vector<T>(cols, T(0)));
}

template <class T>
bool field_is_zero(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(x) == 0;
  } else {
    return x.is_zero();
  }
}

/// Reduced row echelon form in place; returns the pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && field_is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    T inv = T(1) / m[r][c];
    for (std::size_t k = c; k < cols; ++k) m[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || field_is_zero(m[i][c])) continue;
      T f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m, std::size_t cols) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(cols, T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& m, std::size_t cols) {
  auto t = zero_matrix<T>(cols, m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  }
  return t;
}

/// Either x with a x = b, or y with y^T a = 0 and y^T b = 1.
template <class T>
struct LinearSolution {
  std::optional<std::vector<T>> solution;
  std::optional<std::vector<T>> certificate;
};

template <class T>
LinearSolution<T> solve_or_certify(const Matrix<T>& a, const std::vector<T>& b, std::size_t cols) {
  const std::size_t rows = a.size();
  // augmented system [a | b | I] tracks the row combinations
  Matrix<T> aug = zero_matrix<T>(rows, cols + 1 + rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
    aug[i][cols + 1 + i] = T(1);
  }
  // eliminate only over the coefficient columns and b
  Matrix<T> work = aug;
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c <= cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && field_is_zero(work[p][c])) ++p;
    if (p == rows) continue;
    std::swap(work[p], work[r]);
    T inv = T(1) / work[r][c];
    for (auto& x : work[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || field_is_zero(work[i][c])) continue;
      T f = work[i][c];
      for (std::size_t k = 0; k < work[i].size(); ++k) work[i][k] -= f * work[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  LinearSolution<T> out;
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == cols) {
      // row reads 0 = 1; its multiplier row is the certificate
      std::vector<T> y(work[i].begin() + static_cast<std::ptrdiff_t>(cols + 1), work[i].end());
      out.certificate = std::move(y);
      return out;
    }
  }
  std::vector<T> x(cols, T(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = work[i][cols];
  out.solution = std::move(x);
  return out;
}

}  // namespace tpq
