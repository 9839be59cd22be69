#include "topk/game.hpp"

#include <stdexcept>

namespace topk {

int feedback_symbol(const Permutation& sigma, const RelevanceVector& r, int k) {
  int s = 0;
  for (int rank = 1; rank <= k; ++rank) s = (s << 1) | r.at(sigma.object_at(rank));
  return s;
}

std::string symbol_str(int symbol, int k) {
  std::string s(k, '0');
  for (int i = 0; i < k; ++i)
    if ((symbol >> (k - 1 - i)) & 1) s[i] = '1';
  return s;
}

Game build_game(const MeasureSpec& measure, int m, int k, int max_m) {
  if (m < 1 || m > max_m) throw std::invalid_argument("m out of range");
  if (k < 1 || k > m) throw std::invalid_argument("k must be in [1, m]");
  if (measure.kind == MeasureKind::NegPn && (measure.n < 1 || measure.n > m))
    throw std::invalid_argument("cutoff n must be in [1, m]");
  Game g;
  g.measure = measure;
  g.m = m;
  g.k = k;
  g.actions = all_permutations(m);
  int num_outcomes = 1 << m;
  g.loss.resize(g.actions.size());
  g.feedback.resize(g.actions.size());
  for (size_t i = 0; i < g.actions.size(); ++i) {
    g.loss[i].resize(num_outcomes);
    g.feedback[i].resize(num_outcomes);
    for (int j = 0; j < num_outcomes; ++j) {
      RelevanceVector r = RelevanceVector::from_index(m, j);
      g.loss[i][j] = eval_measure_exact(measure, g.actions[i], r);
      g.feedback[i][j] = feedback_symbol(g.actions[i], r, k);
    }
  }
  return g;
}

std::vector<std::vector<uint8_t>> signal_matrix(const Game& g, int action_index) {
  std::vector<std::vector<uint8_t>> s(g.num_symbols(),
                                      std::vector<uint8_t>(g.num_outcomes(), 0));
  for (int j = 0; j < g.num_outcomes(); ++j) s[g.feedback[action_index][j]][j] = 1;
  return s;
}

} // namespace topk
