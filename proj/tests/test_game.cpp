#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "topk/game.hpp"

using namespace topk;

TEST_CASE("game shape and identity loss row") {
  Game g = build_game(MeasureSpec::sum_loss(), 3, 1);
  CHECK(g.num_actions() == 6);
  CHECK(g.num_outcomes() == 8);
  CHECK(g.num_symbols() == 2);
  REQUIRE(g.actions[0] == Permutation::identity(3));

  // outcome index has R(1) in the top bit
  std::vector<int> expected = {0, 3, 2, 5, 1, 4, 3, 6};
  for (int j = 0; j < 8; ++j) CHECK(g.loss[0][j] == Rat(expected[j]));
}

TEST_CASE("loss matrix entries equal direct evaluation") {
  for (const auto& spec :
       {MeasureSpec::pairwise_loss(), MeasureSpec::neg_dcg(), MeasureSpec::neg_pn(2)}) {
    Game g = build_game(spec, 3, 2);
    for (int i = 0; i < g.num_actions(); ++i)
      for (int j = 0; j < g.num_outcomes(); ++j)
        CHECK(g.loss[i][j] == eval_measure_exact(spec, g.actions[i], g.outcome(j)));
  }
}

TEST_CASE("feedback symbols read the top ranks most significant first") {
  Permutation sigma = Permutation::from_order({2, 1, 3});
  RelevanceVector r = RelevanceVector::from_index(3, 5); // bits 101
  CHECK(feedback_symbol(sigma, r, 1) == 0);              // R(2) = 0
  CHECK(feedback_symbol(sigma, r, 2) == 1);              // R(2) R(1) = 01
  CHECK(feedback_symbol(sigma, r, 3) == 3);              // R(2) R(1) R(3) = 011
  CHECK(feedback_symbol(Permutation::identity(3), r, 2) == 2);

  CHECK(symbol_str(2, 2) == "10");
  CHECK(symbol_str(0, 3) == "000");
  CHECK(symbol_str(5, 3) == "101");
}

TEST_CASE("signal matrices are column-singleton partitions") {
  for (int m = 2; m <= 4; ++m) {
    for (int k = 1; k <= m; ++k) {
      Game g = build_game(MeasureSpec::sum_loss(), m, k);
      for (int i = 0; i < g.num_actions(); ++i) {
        auto s = signal_matrix(g, i);
        REQUIRE(static_cast<int>(s.size()) == g.num_symbols());
        for (int j = 0; j < g.num_outcomes(); ++j) {
          int ones = 0;
          for (int sym = 0; sym < g.num_symbols(); ++sym) ones += s[sym][j];
          CHECK(ones == 1);
          CHECK(s[g.feedback[i][j]][j] == 1);
        }
      }
    }
  }
}

TEST_CASE("each symbol collects 2^(m-k) outcomes") {
  for (int m = 2; m <= 5; ++m) {
    for (int k = 1; k <= m; ++k) {
      Game g = build_game(MeasureSpec::sum_loss(), m, k);
      auto s = signal_matrix(g, 0);
      for (int sym = 0; sym < g.num_symbols(); ++sym) {
        int ones = 0;
        for (int j = 0; j < g.num_outcomes(); ++j) ones += s[sym][j];
        CHECK(ones == (1 << (m - k)));
      }
    }
  }
}

TEST_CASE("loss ranges per measure") {
  Game sl = build_game(MeasureSpec::sum_loss(), 4, 1);
  for (const auto& row : sl.loss)
    for (const auto& v : row) {
      CHECK(v >= 0);
      CHECK(v <= Rat(4 * 5 / 2));
    }
  Game pn = build_game(MeasureSpec::neg_pn(2), 4, 1);
  for (const auto& row : pn.loss)
    for (const auto& v : row) {
      CHECK(v <= 0);
      CHECK(v >= Rat(-2));
    }
}

TEST_CASE("build_game validates sizes") {
  CHECK_THROWS_AS(build_game(MeasureSpec::sum_loss(), 7, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_game(MeasureSpec::sum_loss(), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_game(MeasureSpec::sum_loss(), 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_game(MeasureSpec::sum_loss(), 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_game(MeasureSpec::neg_pn(4), 3, 1), std::invalid_argument);
  CHECK_NOTHROW(build_game(MeasureSpec::sum_loss(), 3, 3));
}
