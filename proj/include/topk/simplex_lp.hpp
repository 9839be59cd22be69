#pragma once

#include "topk/rational.hpp"

#include <vector>

namespace topk {

// Exact-rational linear programming, dense two-phase simplex with Bland's
// rule. Sized for the small polytopes that show up in cell geometry (tens of
// variables, hundreds of rows), not for anything industrial.

enum class LpRel { LE, GE, EQ };

struct LpRow {
  RatVec a;
  LpRel rel = LpRel::LE;
  Rat b;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpProblem {
  int num_vars = 0;
  std::vector<LpRow> rows;
  RatVec objective;          // maximized
  bool free_vars = false;    // default: x >= 0; true: every var unrestricted
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  RatVec x;
};

LpResult solve_lp(const LpProblem& p);

} // namespace topk
