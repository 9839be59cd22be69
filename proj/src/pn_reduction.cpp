#include "topk/pn_reduction.hpp"

#include <algorithm>
#include <stdexcept>

namespace topk {

std::vector<int> ActionClass::complement(int m) const {
  std::vector<int> b;
  size_t at = 0;
  for (int obj = 1; obj <= m; ++obj) {
    if (at < top_set.size() && top_set[at] == obj) ++at;
    else b.push_back(obj);
  }
  return b;
}

int ReducedGame::class_index_of(const std::vector<int>& top_set) const {
  auto it = class_lookup.find(top_set);
  if (it == class_lookup.end()) throw std::invalid_argument("unknown class top set");
  return it->second;
}

int ReducedGame::action_index(int class_index, int top_object) const {
  const auto& a = classes[class_index].top_set;
  auto it = std::lower_bound(a.begin(), a.end(), top_object);
  if (it == a.end() || *it != top_object)
    throw std::invalid_argument("top object is outside the class");
  return class_index * n + static_cast<int>(it - a.begin());
}

bool ReducedGame::are_class_neighbors(int c, int d) const {
  for (const auto& nb : class_neighbors[c])
    if (nb.class_index == d) return true;
  return false;
}

std::pair<int, int> ReducedGame::swap_pair(int c, int d) const {
  for (const auto& nb : class_neighbors[c])
    if (nb.class_index == d) return {nb.swap_here, nb.swap_there};
  throw std::invalid_argument("classes are not neighbors");
}

Permutation ReducedGame::action_permutation(int action_index) const {
  const ReducedAction& act = actions[action_index];
  const ActionClass& cls = classes[act.class_index];
  std::vector<int> order;
  order.push_back(act.top_object);
  for (int obj : cls.top_set)
    if (obj != act.top_object) order.push_back(obj);
  for (int obj : cls.complement(m)) order.push_back(obj);
  return Permutation::from_order(std::move(order));
}

RatVec ReducedGame::class_loss(int class_index) const {
  RatVec loss(size_t(1) << m);
  for (size_t o = 0; o < loss.size(); ++o) {
    RelevanceVector r = RelevanceVector::from_index(m, o);
    int hits = 0;
    for (int obj : classes[class_index].top_set) hits += r.at(obj);
    loss[o] = -hits;
  }
  return loss;
}

ReducedGame build_reduced_game(int m, int n) {
  if (n < 1 || n >= m) throw std::invalid_argument("need 1 <= n < m");
  ReducedGame rg;
  rg.m = m;
  rg.n = n;

  // All n-subsets of 1..m in lexicographic order.
  std::vector<int> subset(n);
  for (int i = 0; i < n; ++i) subset[i] = i + 1;
  for (;;) {
    rg.class_lookup.emplace(subset, rg.num_classes());
    rg.classes.push_back({subset});
    int i = n - 1;
    while (i >= 0 && subset[i] == m - (n - 1 - i)) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < n; ++j) subset[j] = subset[j - 1] + 1;
  }

  for (int c = 0; c < rg.num_classes(); ++c) {
    for (int pos = 0; pos < n; ++pos) {
      if (pos == 0) rg.representatives.push_back(rg.num_actions());
      else rg.duplicates.push_back(rg.num_actions());
      rg.actions.push_back({c, rg.classes[c].top_set[pos]});
    }
  }

  rg.class_neighbors.resize(rg.num_classes());
  for (int c = 0; c < rg.num_classes(); ++c) {
    const auto& a = rg.classes[c].top_set;
    for (int out : a) {
      std::vector<int> base;
      for (int obj : a)
        if (obj != out) base.push_back(obj);
      for (int in : rg.classes[c].complement(m)) {
        std::vector<int> other = base;
        other.insert(std::upper_bound(other.begin(), other.end(), in), in);
        rg.class_neighbors[c].push_back({rg.class_lookup.at(other), out, in});
      }
    }
    std::sort(rg.class_neighbors[c].begin(), rg.class_neighbors[c].end(),
              [](const ClassNeighbor& x, const ClassNeighbor& y) {
                return x.class_index < y.class_index;
              });
  }
  return rg;
}

Rat VTable::at(int action_index, int bit) const {
  auto it = support.find(action_index);
  if (it == support.end()) return Rat(0);
  return bit ? it->second.second : it->second.first;
}

VTable build_v_table(const ReducedGame& rg, int class_c, int class_d) {
  VTable table;
  table.class_c = class_c;
  table.class_d = class_d;
  if (class_c == class_d) return table;
  auto [a, b] = rg.swap_pair(class_c, class_d);
  table.support[rg.action_index(class_c, a)] = {Rat(0), Rat(-1)};
  table.support[rg.action_index(class_d, b)] = {Rat(0), Rat(1)};

  if (rg.m <= 8) {
    // The identity the table certifies, over every outcome: the weight at
    // the revealed top bit sums to the class loss difference.
    for (uint64_t o = 0; o < (uint64_t(1) << rg.m); ++o) {
      RelevanceVector r = RelevanceVector::from_index(rg.m, o);
      Rat lhs = 0;
      for (const auto& [act, coeffs] : table.support)
        lhs += r.at(rg.actions[act].top_object) ? coeffs.second : coeffs.first;
      if (lhs != Rat(r.at(b) - r.at(a)))
        throw std::logic_error("estimator table identity failed");
    }
  }
  return table;
}

std::vector<VTable> build_all_v_tables(const ReducedGame& rg) {
  std::vector<VTable> tables;
  for (int c = 0; c < rg.num_classes(); ++c)
    for (const auto& nb : rg.class_neighbors[c])
      if (nb.class_index > c) tables.push_back(build_v_table(rg, c, nb.class_index));
  return tables;
}

Rat compute_V(const std::vector<VTable>& tables) {
  Rat v = tables.empty() ? Rat(1) : Rat(0);
  for (const auto& t : tables) {
    for (const auto& [act, coeffs] : t.support) {
      v = std::max(v, Rat(abs(coeffs.first)));
      v = std::max(v, Rat(abs(coeffs.second)));
    }
  }
  return v;
}

GapReport gap_report(const ReducedGame& rg) {
  GapReport report;
  bool first = true;
  for (int c = 0; c < rg.num_classes(); ++c) {
    for (const auto& nb : rg.class_neighbors[c]) {
      // Expected relevance at the center of c's cell: 1 inside the top set,
      // 1/2 outside. The neighbor's excess loss there only involves the
      // swapped objects.
      RatVec centroid(rg.m, Rat(1, 2));
      for (int obj : rg.classes[c].top_set) centroid[obj - 1] = 1;
      Rat gap = 0;
      for (int obj : rg.classes[c].top_set) gap += centroid[obj - 1];
      for (int obj : rg.classes[nb.class_index].top_set) gap -= centroid[obj - 1];
      if (nb.class_index > c)
        report.entries.push_back({c, nb.class_index, centroid, gap});
      if (first || gap < report.min_gap) report.min_gap = gap;
      first = false;
    }
  }
  if (first) {
    report.min_gap = 0;
    report.one_over_eps_g = 0;
    return report;
  }
  report.one_over_eps_g = Rat(2 * rg.m) / report.min_gap;
  return report;
}

} // namespace topk
