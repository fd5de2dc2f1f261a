#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace ordkit {

// Dense row-major matrix over a field context F (see field.hpp). All
// elimination is exact; no pivot-size heuristics are needed.
template <class F>
using FMat = std::vector<std::vector<typename F::Elem>>;

namespace detail {
template <class Row>
void check_rectangular(const std::vector<Row>& m) {
  for (const auto& row : m)
    if (row.size() != m.front().size()) throw std::invalid_argument("matrix rows have uneven length");
}
}  // namespace detail

template <class F>
int field_matrix_rank(const F& k, FMat<F> m) {
  if (m.empty()) return 0;
  detail::check_rectangular(m);
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m.front().size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!k.is_zero(m[r][c])) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    auto scale = k.inv(m[rank][c]);
    for (int r = rank + 1; r < rows; ++r) {
      if (k.is_zero(m[r][c])) continue;
      auto factor = k.mul(m[r][c], scale);
      for (int cc = c; cc < cols; ++cc) m[r][cc] = k.sub(m[r][cc], k.mul(factor, m[rank][cc]));
    }
    ++rank;
  }
  return rank;
}

template <class F>
typename F::Elem field_matrix_det(const F& k, FMat<F> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return k.one();
  detail::check_rectangular(m);
  if (static_cast<int>(m.front().size()) != n) throw std::invalid_argument("determinant of non-square matrix");
  auto det = k.one();
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (!k.is_zero(m[r][c])) {
        piv = r;
        break;
      }
    if (piv < 0) return k.zero();
    if (piv != c) {
      std::swap(m[c], m[piv]);
      det = k.neg(det);
    }
    det = k.mul(det, m[c][c]);
    auto scale = k.inv(m[c][c]);
    for (int r = c + 1; r < n; ++r) {
      if (k.is_zero(m[r][c])) continue;
      auto factor = k.mul(m[r][c], scale);
      for (int cc = c; cc < n; ++cc) m[r][cc] = k.sub(m[r][cc], k.mul(factor, m[c][cc]));
    }
  }
  return det;
}

// Basis of {x : m x = 0}; `cols` must be passed explicitly so that a matrix
// with no rows still reports the full space.
template <class F>
FMat<F> field_matrix_nullspace(const F& k, FMat<F> m, int cols) {
  if (cols < 0) throw std::invalid_argument("nullspace: negative column count");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("nullspace: row length mismatch");
  const int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col;  // pivot column of row t, for t < rank
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!k.is_zero(m[r][c])) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    auto scale = k.inv(m[rank][c]);
    for (int cc = c; cc < cols; ++cc) m[rank][cc] = k.mul(m[rank][cc], scale);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || k.is_zero(m[r][c])) continue;
      auto factor = m[r][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] = k.sub(m[r][cc], k.mul(factor, m[rank][cc]));
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  FMat<F> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<typename F::Elem> x(static_cast<std::size_t>(cols), k.zero());
    x[static_cast<std::size_t>(f)] = k.one();
    for (int t = 0; t < rank; ++t) x[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(t)])] = k.neg(m[t][f]);
    basis.push_back(std::move(x));
  }
  return basis;
}

template <class F>
bool field_in_span(const F& k, const FMat<F>& vectors, const std::vector<typename F::Elem>& target) {
  FMat<F> a = vectors;
  for (const auto& row : a)
    if (row.size() != target.size()) throw std::invalid_argument("in_span: length mismatch");
  int base = field_matrix_rank(k, a);
  a.push_back(target);
  return field_matrix_rank(k, a) == base;
}

template <class Elem>
std::vector<std::vector<Elem>> transpose_matrix(const std::vector<std::vector<Elem>>& m, std::size_t cols) {
  std::vector<std::vector<Elem>> out(cols);
  for (const auto& row : m) {
    if (row.size() != cols) throw std::invalid_argument("transpose: row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) out[j].push_back(row[j]);
  }
  return out;
}

}  // namespace ordkit
