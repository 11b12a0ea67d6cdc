#pragma once

// Small dense exact linear algebra (Gaussian elimination over Rat).
// Sizes here are tiny (n <= 12), so cubic elimination is plenty.

#include "crn/rational.hpp"

#include <vector>

namespace crn {

using RatMat = std::vector<RatVec>;  // row-major

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<int> rref(RatMat& m)
{
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    Rat inv = Rat(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

inline int rank(RatMat m) { return static_cast<int>(rref(m).size()); }

// Row-space basis of m (nonzero rows of the rref).
inline RatMat row_basis(RatMat m)
{
  auto piv = rref(m);
  m.resize(piv.size());
  return m;
}

// Does v lie in the row space of basis (rows assumed independent)?
inline bool in_row_space(const RatMat& basis, const RatVec& v)
{
  RatMat m = basis;
  m.push_back(v);
  return rank(m) == static_cast<int>(basis.size());
}

// Nullspace basis of m (vectors w with m·w = 0).
inline RatMat nullspace(RatMat m)
{
  if (m.empty()) return {};
  size_t cols = m[0].size();
  auto piv = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  RatMat basis;
  for (size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    RatVec w(cols, Rat(0));
    w[free_c] = Rat(1);
    for (size_t r = 0; r < piv.size(); ++r) {
      if (r < m.size()) w[piv[r]] = -m[r][free_c];
    }
    basis.push_back(std::move(w));
  }
  return basis;
}

// Solve the square system a·x = b exactly; returns empty vector when a is
// singular.
inline RatVec solve_square(RatMat a, RatVec b)
{
  size_t n = a.size();
  for (size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  auto piv = rref(a);
  if (piv.size() != n) return {};
  for (int c : piv)
    if (static_cast<size_t>(c) >= n) return {};  // inconsistent
  RatVec x(n, Rat(0));
  for (size_t r = 0; r < n; ++r) x[piv[r]] = a[r][n];
  return x;
}

}  // namespace crn
