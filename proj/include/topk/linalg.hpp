#pragma once

#include <optional>

#include "topk/rational.hpp"

namespace topk {

// Row rank by exact Gaussian elimination. The input is copied.
int rat_rank(RatMat mat);

// Particular solution of M x = d (free variables set to zero), or nullopt when
// the system is inconsistent. M is rows x cols, d has size rows.
std::optional<RatVec> solve_linear(const RatMat& m, const RatVec& d);

Rat dot(const RatVec& a, const RatVec& b);

// True when b is a scalar multiple of a (a must be nonzero).
bool is_scalar_multiple(const RatVec& a, const RatVec& b);

} // namespace topk
