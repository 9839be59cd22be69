#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "topk/linalg.hpp"
#include "topk/simplex_lp.hpp"

using namespace topk;

TEST_CASE("rank of small matrices") {
  CHECK(rat_rank({}) == 0);
  CHECK(rat_rank({{Rat(1), Rat(2)}, {Rat(2), Rat(4)}}) == 1);
  CHECK(rat_rank({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}) == 2);
  CHECK(rat_rank({{Rat(1), Rat(2), Rat(3)},
                  {Rat(4), Rat(5), Rat(6)},
                  {Rat(7), Rat(8), Rat(9)}}) == 2);
  CHECK(rat_rank({{Rat(1) / 2, Rat(1) / 3}, {Rat(1) / 4, Rat(1) / 6}}) == 1);
  CHECK(rat_rank({{Rat(0), Rat(0)}}) == 0);
}

TEST_CASE("linear solve") {
  auto x = solve_linear({{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}}, {Rat(3), Rat(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == Rat(2));
  CHECK((*x)[1] == Rat(1));

  CHECK(!solve_linear({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}}, {Rat(1), Rat(2)}).has_value());

  // underdetermined: free variables pinned to zero
  auto y = solve_linear({{Rat(1), Rat(1)}}, {Rat(2)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] == Rat(2));
  CHECK((*y)[1] == Rat(0));

  CHECK_THROWS_AS(solve_linear({{Rat(1)}}, {Rat(1), Rat(2)}), std::invalid_argument);
}

TEST_CASE("dot and scalar multiples") {
  CHECK(dot({Rat(1), Rat(2)}, {Rat(3), Rat(4)}) == Rat(11));
  CHECK_THROWS_AS(dot({Rat(1)}, {Rat(1), Rat(2)}), std::invalid_argument);

  CHECK(is_scalar_multiple({Rat(1), Rat(2)}, {Rat(2), Rat(4)}));
  CHECK(is_scalar_multiple({Rat(1), Rat(2)}, {Rat(0), Rat(0)}));
  CHECK(is_scalar_multiple({Rat(1), Rat(2)}, {Rat(-3), Rat(-6)}));
  CHECK(!is_scalar_multiple({Rat(1), Rat(2)}, {Rat(2), Rat(5)}));
  CHECK(!is_scalar_multiple({Rat(0), Rat(2)}, {Rat(1), Rat(2)}));
  CHECK(is_scalar_multiple({Rat(0), Rat(0)}, {Rat(0), Rat(0)}));
}

TEST_CASE("lp optimum on a box") {
  LpProblem p;
  p.num_vars = 2;
  p.objective = {Rat(1), Rat(1)};
  p.rows.push_back({{Rat(1), Rat(0)}, LpRel::LE, Rat(1)});
  p.rows.push_back({{Rat(0), Rat(1)}, LpRel::LE, Rat(2)});
  LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(3));
  CHECK(r.x[0] == Rat(1));
  CHECK(r.x[1] == Rat(2));
}

TEST_CASE("lp infeasible and unbounded") {
  LpProblem p;
  p.num_vars = 1;
  p.objective = {Rat(1)};
  p.rows.push_back({{Rat(1)}, LpRel::LE, Rat(-1)});
  CHECK(solve_lp(p).status == LpStatus::Infeasible);

  LpProblem q;
  q.num_vars = 1;
  q.objective = {Rat(1)};
  CHECK(solve_lp(q).status == LpStatus::Unbounded);
}

TEST_CASE("lp equality and ge rows") {
  LpProblem p;
  p.num_vars = 2;
  p.objective = {Rat(1), Rat(0)};
  p.rows.push_back({{Rat(1), Rat(1)}, LpRel::EQ, Rat(2)});
  p.rows.push_back({{Rat(1), Rat(0)}, LpRel::LE, Rat(1)});
  LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(1));
  CHECK(r.x[0] + r.x[1] == Rat(2));

  LpProblem q;
  q.num_vars = 1;
  q.objective = {Rat(-1)};
  q.rows.push_back({{Rat(1)}, LpRel::GE, Rat(2)});
  LpResult s = solve_lp(q);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.value == Rat(-2));
}

TEST_CASE("lp with unrestricted variables") {
  LpProblem p;
  p.num_vars = 1;
  p.free_vars = true;
  p.objective = {Rat(-1)};
  p.rows.push_back({{Rat(1)}, LpRel::GE, Rat(-2)});
  LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == Rat(2));
  CHECK(r.x[0] == Rat(-2));
}

TEST_CASE("lp exact fractional optimum") {
  // max x + y subject to 2x + y <= 1 and x + 3y <= 1
  LpProblem p;
  p.num_vars = 2;
  p.objective = {Rat(1), Rat(1)};
  p.rows.push_back({{Rat(2), Rat(1)}, LpRel::LE, Rat(1)});
  p.rows.push_back({{Rat(1), Rat(3)}, LpRel::LE, Rat(1)});
  LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == Rat(2) / 5);
  CHECK(r.x[1] == Rat(1) / 5);
  CHECK(r.value == Rat(3) / 5);
}
