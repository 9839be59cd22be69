#include "topk/simplex_lp.hpp"

#include <stdexcept>

namespace topk {

namespace {

// Standard-form tableau: maximize c.x subject to Ax = b, x >= 0, b >= 0.
// basis[i] is the variable basic in row i. Returns false when unbounded.
struct Tableau {
  RatMat a;        // rows x (cols+1), last column is rhs
  RatVec c;        // cols, objective being maximized
  std::vector<int> basis;
  size_t rows, cols;

  Tableau(size_t r, size_t n) : a(r, RatVec(n + 1)), c(n), basis(r), rows(r), cols(n) {}

  void pivot(size_t pr, size_t pc) {
    Rat p = a[pr][pc];
    for (size_t j = 0; j <= cols; ++j) a[pr][j] /= p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == pr || a[i][pc] == 0) continue;
      Rat f = a[i][pc];
      for (size_t j = 0; j <= cols; ++j) a[i][j] -= f * a[pr][j];
    }
    basis[pr] = static_cast<int>(pc);
  }

  // Reduced cost of column j under the current basis.
  Rat reduced_cost(size_t j) const {
    Rat z = 0;
    for (size_t i = 0; i < rows; ++i)
      if (a[i][j] != 0 && c[basis[i]] != 0) z += c[basis[i]] * a[i][j];
    return c[j] - z;
  }

  bool optimize() {
    for (;;) {
      // Bland: entering variable is the lowest index with positive reduced cost.
      size_t enter = cols;
      for (size_t j = 0; j < cols; ++j) {
        if (reduced_cost(j) > 0) { enter = j; break; }
      }
      if (enter == cols) return true;
      // Bland: leaving row is the min ratio, ties by lowest basis index.
      size_t leave = rows;
      Rat best_ratio = 0;
      for (size_t i = 0; i < rows; ++i) {
        if (a[i][enter] <= 0) continue;
        Rat ratio = a[i][cols] / a[i][enter];
        if (leave == rows || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows) return false;
      pivot(leave, enter);
    }
  }

  Rat objective_value() const {
    Rat v = 0;
    for (size_t i = 0; i < rows; ++i)
      if (c[basis[i]] != 0) v += c[basis[i]] * a[i][cols];
    return v;
  }
};

} // namespace

LpResult solve_lp(const LpProblem& p) {
  const size_t nv = static_cast<size_t>(p.num_vars);
  for (const auto& row : p.rows)
    if (row.a.size() != nv) throw std::invalid_argument("lp row size mismatch");
  if (p.objective.size() != nv) throw std::invalid_argument("lp objective size mismatch");

  // Structural columns: x (or x+,x- when free), one slack per inequality.
  const size_t nx = p.free_vars ? 2 * nv : nv;
  size_t nslack = 0;
  for (const auto& row : p.rows)
    if (row.rel != LpRel::EQ) ++nslack;

  const size_t nr = p.rows.size();
  const size_t ncols = nx + nslack + nr;  // artificials on every row
  Tableau t(nr, ncols);

  auto put_x = [&](size_t r, size_t v, const Rat& coef) {
    if (p.free_vars) {
      t.a[r][2 * v] = coef;
      t.a[r][2 * v + 1] = -coef;
    } else {
      t.a[r][v] = coef;
    }
  };

  size_t slack_at = nx;
  for (size_t i = 0; i < nr; ++i) {
    const LpRow& row = p.rows[i];
    bool flip = row.b < 0;
    for (size_t v = 0; v < nv; ++v) {
      Rat coef = flip ? Rat(-row.a[v]) : row.a[v];
      if (coef != 0) put_x(i, v, coef);
    }
    t.a[i][ncols] = flip ? Rat(-row.b) : row.b;
    LpRel rel = row.rel;
    if (flip) {
      if (rel == LpRel::LE) rel = LpRel::GE;
      else if (rel == LpRel::GE) rel = LpRel::LE;
    }
    if (rel == LpRel::LE) t.a[i][slack_at++] = 1;
    else if (rel == LpRel::GE) t.a[i][slack_at++] = -1;
    t.a[i][nx + nslack + i] = 1;
    t.basis[i] = static_cast<int>(nx + nslack + i);
  }

  // Phase 1: drive artificials out.
  for (size_t j = nx + nslack; j < ncols; ++j) t.c[j] = -1;
  if (!t.optimize()) throw std::logic_error("phase-1 unbounded");
  LpResult res;
  if (t.objective_value() != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Pivot any artificial still basic (at zero) onto a structural column.
  for (size_t i = 0; i < nr; ++i) {
    if (static_cast<size_t>(t.basis[i]) < nx + nslack) continue;
    size_t j = 0;
    while (j < nx + nslack && t.a[i][j] == 0) ++j;
    if (j < nx + nslack) t.pivot(i, j);
    // else: redundant row, artificial stays basic at zero, harmless.
  }

  // Phase 2: real objective, artificials forbidden.
  for (size_t j = 0; j < ncols; ++j) t.c[j] = 0;
  for (size_t v = 0; v < nv; ++v) {
    if (p.free_vars) {
      t.c[2 * v] = p.objective[v];
      t.c[2 * v + 1] = -p.objective[v];
    } else {
      t.c[v] = p.objective[v];
    }
  }
  for (size_t i = 0; i < nr; ++i) {
    if (static_cast<size_t>(t.basis[i]) >= nx + nslack)
      for (size_t j = nx + nslack; j < ncols; ++j)
        if (j != static_cast<size_t>(t.basis[i])) t.a[i][j] = 0;
  }
  for (size_t j = nx + nslack; j < ncols; ++j) {
    bool basic = false;
    for (size_t i = 0; i < nr; ++i)
      if (static_cast<size_t>(t.basis[i]) == j) basic = true;
    if (!basic)
      for (size_t i = 0; i < nr; ++i) t.a[i][j] = 0;
  }
  if (!t.optimize()) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.value = t.objective_value();
  res.x.assign(nv, Rat(0));
  RatVec raw(ncols, Rat(0));
  for (size_t i = 0; i < nr; ++i) raw[t.basis[i]] = t.a[i][ncols];
  for (size_t v = 0; v < nv; ++v)
    res.x[v] = p.free_vars ? raw[2 * v] - raw[2 * v + 1] : raw[v];
  return res;
}

} // namespace topk
