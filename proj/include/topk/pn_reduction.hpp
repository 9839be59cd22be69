#pragma once

#include "topk/ranking.hpp"

#include <map>
#include <utility>
#include <vector>

namespace topk {

// Equivalence-class reduction of the top-n precision game under top-1
// feedback. Rankings with the same top-n object set share a loss vector, so
// play reduces to choosing a class plus the object shown at rank 1.

struct ActionClass {
  std::vector<int> top_set;  // sorted ascending, size n
  std::vector<int> complement(int m) const;
};

struct ReducedAction {
  int class_index = -1;
  int top_object = 0;
};

struct ClassNeighbor {
  int class_index = -1;
  int swap_here = 0;   // the object this class has and the neighbor lacks
  int swap_there = 0;  // the object the neighbor has and this class lacks
};

struct ReducedGame {
  int m = 0, n = 0;
  std::vector<ActionClass> classes;  // all n-subsets, lexicographic
  std::vector<ReducedAction> actions;  // grouped by class, top objects ascending
  std::vector<int> representatives;  // one action per class: the smallest top object
  std::vector<int> duplicates;       // the remaining actions
  std::vector<std::vector<ClassNeighbor>> class_neighbors;  // ascending by class_index

  int num_classes() const { return static_cast<int>(classes.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }
  int class_index_of(const std::vector<int>& top_set) const;  // sorted input
  int action_index(int class_index, int top_object) const;
  bool are_class_neighbors(int c, int d) const;
  // {object in A_c \ A_d, object in A_d \ A_c} for a neighboring pair.
  std::pair<int, int> swap_pair(int c, int d) const;

  // Representative ranking: top object first, the rest of A ascending, then
  // the complement ascending.
  Permutation action_permutation(int action_index) const;

  // Loss vector of a class over all 2^m outcomes (entry = minus the number of
  // relevant objects in the class's top set).
  RatVec class_loss(int class_index) const;

 private:
  std::map<std::vector<int>, int> class_lookup;
  friend ReducedGame build_reduced_game(int m, int n);
};

ReducedGame build_reduced_game(int m, int n);

// Loss-difference estimator weights for a neighboring class pair: per reduced
// action, one coefficient per feedback bit value.
struct VTable {
  int class_c = -1, class_d = -1;
  std::map<int, std::pair<Rat, Rat>> support;  // action index -> (at bit 0, at bit 1)
  Rat at(int action_index, int bit) const;
};

// Table certifying class_loss(c) - class_loss(d). Support is two actions:
// (c, swap object on c's side) with -1 at bit 1 and (d, swap object on d's
// side) with +1 at bit 1. Identical classes give the empty table.
VTable build_v_table(const ReducedGame& rg, int class_c, int class_d);

// One table per unordered neighboring class pair, (c, d) with c < d.
std::vector<VTable> build_all_v_tables(const ReducedGame& rg);

// Largest coefficient magnitude over the tables; 1 when there are none.
Rat compute_V(const std::vector<VTable>& tables);

struct GapEntry {
  int class_c = -1, class_d = -1;
  RatVec centroid;  // expected relevance at the center of c's optimality cell
  Rat gap;          // excess loss of d there
};

struct GapReport {
  std::vector<GapEntry> entries;
  Rat min_gap;
  Rat one_over_eps_g;  // 2m / min_gap
};

GapReport gap_report(const ReducedGame& rg);

} // namespace topk
