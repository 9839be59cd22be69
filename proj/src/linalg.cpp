#include "topk/linalg.hpp"

#include <stdexcept>

namespace topk {

int rat_rank(RatMat mat) {
  if (mat.empty()) return 0;
  size_t rows = mat.size(), cols = mat[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && mat[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(mat[pivot], mat[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (mat[i][c] == 0) continue;
      Rat f = mat[i][c] / mat[r][c];
      for (size_t j = c; j < cols; ++j) mat[i][j] -= f * mat[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::optional<RatVec> solve_linear(const RatMat& m, const RatVec& d) {
  size_t rows = m.size();
  if (d.size() != rows) throw std::invalid_argument("rhs size mismatch");
  size_t cols = rows ? m[0].size() : 0;
  // Gauss-Jordan on the augmented matrix.
  RatMat a(rows, RatVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) a[i][j] = m[i][j];
    a[i][cols] = d[i];
  }
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    Rat p = a[r][c];
    for (size_t j = c; j <= cols; ++j) a[r][j] /= p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = c; j <= cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (a[i][cols] != 0) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = a[i][cols];
  return x;
}

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

bool is_scalar_multiple(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  size_t i = 0;
  while (i < a.size() && a[i] == 0) {
    if (b[i] != 0) return false;
    ++i;
  }
  if (i == a.size()) return true;  // a == 0, and b matched it entrywise
  Rat f = b[i] / a[i];
  for (; i < a.size(); ++i)
    if (b[i] != a[i] * f) return false;
  return true;
}

} // namespace topk
