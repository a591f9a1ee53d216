#pragma once

#include "fuller/rational.hpp"

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

namespace fuller {

namespace detail {

template <class T>
T magnitude(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return abs(x);
  } else {
    using std::abs;
    return abs(x);
  }
}

}  // namespace detail

/// Determinant of a square matrix by Gaussian elimination (exact for Rational,
/// partial pivoting otherwise).
template <class T>
T determinant(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw domain_error("determinant of a non-square matrix");
  T det = T(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_same_v<T, Rational>) {
      for (std::size_t r = col; r < n; ++r)
        if (m[r][col] != 0) {
          pivot = r;
          break;
        }
    } else {
      T best = T(0);
      for (std::size_t r = col; r < n; ++r) {
        T mag = detail::magnitude(m[r][col]);
        if (mag > best) {
          best = mag;
          pivot = r;
        }
      }
    }
    if (pivot == n) return T(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      T factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

/// Determinant of the matrix whose columns are the given n vectors of length n.
template <class T>
T wedge_det(const std::vector<std::vector<T>>& vectors) {
  for (const auto& v : vectors)
    if (v.size() != vectors.size()) throw domain_error("wedge_det needs n vectors of dimension n");
  // det(M^T) = det(M): rows may stand in for columns.
  return determinant(vectors);
}

/// Rank of a family of vectors. Exact for Rational; for floating types an entry counts
/// as zero when it is below rel_tol times the largest initial magnitude.
template <class T>
std::size_t rank(std::vector<std::vector<T>> rows, double rel_tol = 1e-12) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  T threshold = T(0);
  if constexpr (!std::is_same_v<T, Rational>) {
    T largest = T(0);
    for (const auto& r : rows)
      for (const auto& x : r)
        if (detail::magnitude(x) > largest) largest = detail::magnitude(x);
    threshold = largest * T(rel_tol);
  }
  std::size_t rk = 0;
  for (std::size_t col = 0; col < cols && rk < rows.size(); ++col) {
    std::size_t pivot = rows.size();
    T best = threshold;
    for (std::size_t r = rk; r < rows.size(); ++r) {
      T mag = detail::magnitude(rows[r][col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rk]);
    for (std::size_t r = rk + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      T factor = rows[r][col] / rows[rk][col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[rk][c];
    }
    ++rk;
  }
  return rk;
}

}  // namespace fuller
