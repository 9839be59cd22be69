#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "topk/game.hpp"
#include "topk/linalg.hpp"
#include "topk/observability.hpp"

using namespace topk;

namespace {

// Two actions, distinct losses, but the feedback never varies, so no loss
// difference is recoverable from observations.
Game blind_game() {
  Game g;
  g.measure = MeasureSpec::sum_loss();
  g.m = 2;
  g.k = 1;
  g.actions = all_permutations(2);
  g.loss = {{Rat(0), Rat(0), Rat(1), Rat(1)}, {Rat(1), Rat(1), Rat(0), Rat(0)}};
  g.feedback = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  return g;
}

// One-object game padded with synthetic loss rows covering every label.
Game label_game() {
  Game g;
  g.measure = MeasureSpec::sum_loss();
  g.m = 1;
  g.k = 1;
  g.actions.assign(4, Permutation::identity(1));
  g.loss = {{Rat(0), Rat(1)},
            {Rat(1), Rat(0)},
            {Rat(1), Rat(1)},
            {Rat(1) / 2, Rat(1) / 2}};
  g.feedback.assign(4, {0, 1});
  return g;
}

std::set<std::pair<int, int>> pair_set(const std::vector<std::pair<int, int>>& v) {
  return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("full-dimensional cells for the real games") {
  for (const auto& spec : {MeasureSpec::sum_loss(), MeasureSpec::neg_pn(1)}) {
    Game g = build_game(spec, 3, 1);
    for (int a = 0; a < g.num_actions(); ++a) CHECK(cell_dimension(g, a) == 7);
  }
  Game tiny = build_game(MeasureSpec::sum_loss(), 1, 1);
  CHECK(cell_dimension(tiny, 0) == 1);

  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  CellDescription cell = describe_cell(g, 0);
  CHECK(cell.action_index == 0);
  CHECK(cell.dimension == 7);
  CHECK(cell.facet_inequalities.size() == 5);
}

TEST_CASE("pair cell dimensions distinguish neighbors") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  // actions 0 = 123 and 2 = 213 differ by the top transposition
  CHECK(pair_cell_dimension(g, 0, 2) == 6);
  // 0 = 123 against 3 = 231 or 5 = 321 pins both expected-relevance gaps
  CHECK(pair_cell_dimension(g, 0, 3) == 5);
  CHECK(pair_cell_dimension(g, 0, 5) == 5);

  // duplicates: the intersection is the full shared cell
  Game pn = build_game(MeasureSpec::neg_pn(1), 3, 1);
  CHECK(pair_cell_dimension(pn, 0, 1) == 7);
}

TEST_CASE("relative interior points witness the pair geometry") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  auto point = pair_relint_point(g, 0, 2);
  REQUIRE(point.has_value());
  Rat total = 0;
  for (const auto& c : *point) {
    CHECK(c > 0);
    total += c;
  }
  CHECK(total == 1);
  Rat li = dot(g.loss[0], *point), lj = dot(g.loss[2], *point);
  CHECK(li == lj);
  for (int e = 0; e < g.num_actions(); ++e)
    if (e != 0 && e != 2) CHECK(dot(g.loss[e], *point) > li);

  CHECK(!pair_relint_point(g, 0, 3).has_value());
  Game pn = build_game(MeasureSpec::neg_pn(1), 3, 1);
  CHECK(!pair_relint_point(pn, 0, 1).has_value());
}

TEST_CASE("action labels from exact geometry") {
  Game g = label_game();
  ActionClassification cls = classify_actions(g, true);
  CHECK(cls.labels[0] == ActionLabel::ParetoOptimal);
  CHECK(cls.labels[1] == ActionLabel::ParetoOptimal);
  CHECK(cls.labels[2] == ActionLabel::Dominated);
  CHECK(cls.labels[3] == ActionLabel::Degenerate);
  CHECK(cls.duplicate_groups.size() == 4);

  CHECK(std::string(action_label_name(ActionLabel::Dominated)) == "dominated");
  CHECK(std::string(action_label_name(ActionLabel::Degenerate)) == "degenerate");
  CHECK(std::string(action_label_name(ActionLabel::ParetoOptimal)) == "pareto_optimal");
}

TEST_CASE("duplicate groups partition by loss vector") {
  Game pn = build_game(MeasureSpec::neg_pn(1), 3, 1);
  ActionClassification cls = classify_actions(pn);
  REQUIRE(cls.duplicate_groups.size() == 3);
  CHECK(cls.duplicate_groups[0] == std::vector<int>{0, 1});
  CHECK(cls.duplicate_groups[1] == std::vector<int>{2, 3});
  CHECK(cls.duplicate_groups[2] == std::vector<int>{4, 5});

  Game sl = build_game(MeasureSpec::sum_loss(), 3, 1);
  CHECK(classify_actions(sl).duplicate_groups.size() == 6);
}

TEST_CASE("frozen neighbor structure at m = 3") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  std::set<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 4}, {2, 3}, {3, 5}, {4, 5}};
  CHECK(pair_set(find_neighbors(g)) == expected);

  Game pn = build_game(MeasureSpec::neg_pn(1), 3, 1);
  CHECK(find_neighbors(pn).size() == 12);
  for (auto [i, j] : find_neighbors(pn)) CHECK(pn.loss[i] != pn.loss[j]);
}

TEST_CASE("exact geometry agrees with the closed forms") {
  // the exact path cross-checks internally and throws on any disagreement
  for (const auto& spec : {MeasureSpec::pairwise_loss(), MeasureSpec::sum_loss(),
                           MeasureSpec::neg_dcg(), MeasureSpec::neg_pn(1),
                           MeasureSpec::neg_pn(2)}) {
    Game g = build_game(spec, 3, 1);
    CHECK(find_neighbors(g, true) == find_neighbors(g, false));
  }
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  CHECK(find_neighbors(g, true, 4) == find_neighbors(g, false));
}

TEST_CASE("neighborhood action sets") {
  Game sl = build_game(MeasureSpec::sum_loss(), 3, 1);
  CHECK(neighborhood_action_set(sl, 0, 2) == std::vector<int>{0, 2});
  CHECK(neighborhood_action_set(sl, 0, 2, true) == std::vector<int>{0, 2});
  CHECK_THROWS_AS(neighborhood_action_set(sl, 0, 3), std::invalid_argument);

  Game pn = build_game(MeasureSpec::neg_pn(1), 3, 1);
  CHECK(neighborhood_action_set(pn, 0, 2) == std::vector<int>{0, 1, 2, 3});
  CHECK(neighborhood_action_set(pn, 0, 2, true) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("local observability of rank swaps depends on the revealed depth") {
  Game k1 = build_game(MeasureSpec::sum_loss(), 3, 1);
  // swaps below the revealed prefix have no local certificate
  CHECK(!check_observability(k1, 0, 1, ObsKind::Local).has_value());
  CHECK(check_observability(k1, 0, 2, ObsKind::Local).has_value());
  // every difference is still recoverable from all actions together
  CHECK(check_observability(k1, 0, 1, ObsKind::Global).has_value());

  Game k2 = build_game(MeasureSpec::sum_loss(), 3, 2);
  for (auto [i, j] : find_neighbors(k2))
    CHECK(check_observability(k2, i, j, ObsKind::Local).has_value());
}

TEST_CASE("certificates reproduce the loss difference on every outcome") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 2);
  auto cert = check_observability(g, 0, 2, ObsKind::Local);
  REQUIRE(cert.has_value());
  CHECK(cert->i == 0);
  CHECK(cert->j == 2);
  EstimatorTable table = certificate_to_function(*cert, g);
  for (int o = 0; o < g.num_outcomes(); ++o) {
    Rat sum = 0;
    for (int a = 0; a < g.num_actions(); ++a) sum += table.at(a, g.feedback[a][o]);
    CHECK(sum == g.loss[0][o] - g.loss[2][o]);
  }
}

TEST_CASE("regimes across the game family") {
  CHECK(classify_game(build_game(MeasureSpec::sum_loss(), 1, 1)) == Regime::Trivial);
  CHECK(classify_game(build_game(MeasureSpec::sum_loss(), 3, 1)) == Regime::Hard);
  CHECK(classify_game(build_game(MeasureSpec::sum_loss(), 3, 2)) == Regime::Easy);
  CHECK(classify_game(build_game(MeasureSpec::sum_loss(), 3, 3)) == Regime::Easy);
  CHECK(classify_game(build_game(MeasureSpec::neg_pn(1), 3, 1)) == Regime::Easy);
  CHECK(classify_game(build_game(MeasureSpec::neg_pn(2), 3, 1)) == Regime::Easy);
  CHECK(classify_game(blind_game()) == Regime::Hopeless);

  // the discount factors do not change the observability structure
  for (int k = 1; k <= 3; ++k)
    CHECK(classify_game(build_game(MeasureSpec::neg_dcg(), 3, k)) ==
          classify_game(build_game(MeasureSpec::sum_loss(), 3, k)));

  CHECK(std::string(regime_name(Regime::Trivial)) == "trivial");
  CHECK(std::string(regime_name(Regime::Easy)) == "easy");
  CHECK(std::string(regime_name(Regime::Hard)) == "hard");
  CHECK(std::string(regime_name(Regime::Hopeless)) == "hopeless");
}

TEST_CASE("analysis report fields for the hard game") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  AnalysisReport report = analyze_game(g, true);
  CHECK(report.m == 3);
  CHECK(report.k == 1);
  CHECK(report.regime == Regime::Hard);
  CHECK(report.pareto_count == 6);
  CHECK(report.neighbors.size() == 6);
  CHECK(report.globally_observable);
  CHECK(!report.locally_observable);
  std::set<std::pair<int, int>> failing = {{0, 1}, {2, 3}, {4, 5}};
  CHECK(pair_set(report.failing_pairs) == failing);
  CHECK(report.local_certificates.size() == 3);

  AnalysisReport closed = analyze_game(g);
  CHECK(closed.regime == report.regime);
  CHECK(pair_set(closed.failing_pairs) == pair_set(report.failing_pairs));
}

TEST_CASE("blind game fails both observability notions") {
  Game g = blind_game();
  AnalysisReport report = analyze_game(g, true);
  CHECK(report.neighbors.size() == 1);
  CHECK(!report.globally_observable);
  CHECK(!report.locally_observable);
  CHECK(report.regime == Regime::Hopeless);
  CHECK(!check_observability(g, 0, 1, ObsKind::Global).has_value());
}
