#pragma once

#include "topk/game.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace topk {

// Cell geometry over the outcome simplex, action classification, neighbor
// structure, and observability certificates, all in exact rational
// arithmetic. Closed-form combinatorial predicates are the default path;
// `exact_geometry` switches on LP-based verification of the same facts.

struct CellDescription {
  int action_index = -1;
  RatMat facet_inequalities;  // rows d with meaning d·p <= 0 on the simplex
  int dimension = -1;         // -1 encodes an empty cell
};

enum class ActionLabel { Dominated, Degenerate, ParetoOptimal };
const char* action_label_name(ActionLabel label);

struct ActionClassification {
  std::vector<ActionLabel> labels;
  std::vector<std::vector<int>> duplicate_groups;  // partition by equal loss vectors
};

enum class ObsKind { Global, Local };

struct ObservabilityCertificate {
  int i = -1, j = -1;
  ObsKind kind = ObsKind::Global;
  // Per contributing action, one rational weight per feedback symbol.
  std::map<int, RatVec> coefficients;
};

// v(action, symbol) weights realizing a certificate as an estimator.
struct EstimatorTable {
  std::map<int, RatVec> v;
  Rat at(int action, int symbol) const;
};

RatMat cell_inequalities(const Game& g, int action_index);
CellDescription describe_cell(const Game& g, int action_index);

// Dimension of C_i (or of C_i ∩ C_j) as a polytope, via an exact max-slack
// LP with an implicit-equality scan as the degenerate fallback.
int cell_dimension(const Game& g, int action_index);
int pair_cell_dimension(const Game& g, int i, int j);

// A point in the relative interior of C_i ∩ C_j; nullopt unless the
// intersection has dimension 2^m − 2.
std::optional<RatVec> pair_relint_point(const Game& g, int i, int j);

ActionClassification classify_actions(const Game& g, bool exact_geometry = false);

bool neighbors_closed_form(const Game& g, int i, int j);
std::vector<std::pair<int, int>> find_neighbors(const Game& g, bool exact_geometry = false,
                                                int threads = 1);

std::vector<int> neighborhood_action_set(const Game& g, int i, int j,
                                         bool exact_geometry = false);

std::optional<ObservabilityCertificate> check_observability(const Game& g, int i, int j,
                                                            ObsKind kind);

EstimatorTable certificate_to_function(const ObservabilityCertificate& cert, const Game& g);

enum class Regime { Trivial, Easy, Hard, Hopeless };
const char* regime_name(Regime regime);

struct AnalysisReport {
  MeasureSpec measure;
  int m = 0, k = 0;
  Regime regime = Regime::Hopeless;
  int pareto_count = 0;
  std::vector<int> duplicate_group_sizes;
  std::vector<std::pair<int, int>> neighbors;
  std::vector<std::pair<int, int>> failing_pairs;  // neighbor pairs with no local certificate
  bool globally_observable = false;
  bool locally_observable = false;
  std::vector<ObservabilityCertificate> local_certificates;
};

AnalysisReport analyze_game(const Game& g, bool exact_geometry = false, int threads = 1);
Regime classify_game(const Game& g);

} // namespace topk
