#pragma once

#include <cstdint>
#include <vector>

#include "topk/ranking.hpp"

namespace topk {

// Finite game built from a measure: one row per ranking (lexicographic order),
// one column per binary relevance vector (index order from RelevanceVector).
// loss[i][j] is exact; feedback[i][j] is the symbol index formed by the top-k
// relevance bits read top rank first, most significant first.
struct Game {
  MeasureSpec measure;
  int m = 0;
  int k = 0;
  std::vector<Permutation> actions;
  std::vector<std::vector<Rat>> loss;
  std::vector<std::vector<int>> feedback;

  int num_actions() const { return static_cast<int>(actions.size()); }
  int num_outcomes() const { return 1 << m; }
  int num_symbols() const { return 1 << k; }
  RelevanceVector outcome(int j) const { return RelevanceVector::from_index(m, j); }
};

// Symbol index of the top-k relevance bits under sigma.
int feedback_symbol(const Permutation& sigma, const RelevanceVector& r, int k);

// Bit string of a symbol index, top rank first, e.g. k=2 symbol 2 -> "10".
std::string symbol_str(int symbol, int k);

// Enumerates actions and fills both matrices. Sizes grow as m! x 2^m, so m is
// capped (default 6). Requires 1 <= k <= m.
Game build_game(const MeasureSpec& measure, int m, int k, int max_m = 6);

// 2^k x 2^m 0/1 matrix; entry (s, j) says outcome j emits symbol s under the
// given action.
std::vector<std::vector<uint8_t>> signal_matrix(const Game& g, int action_index);

} // namespace topk
