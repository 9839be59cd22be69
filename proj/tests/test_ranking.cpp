#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "topk/ranking.hpp"
#include "topk/rng.hpp"

using namespace topk;

namespace {

long long factorial(int m) {
  long long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

RelevanceVector rel(std::vector<uint8_t> bits) {
  RelevanceVector r;
  r.m = static_cast<int>(bits.size());
  r.bits = std::move(bits);
  return r;
}

} // namespace

TEST_CASE("permutation construction and lookup") {
  Permutation p = Permutation::from_order({2, 3, 1});
  CHECK(p.object_at(1) == 2);
  CHECK(p.object_at(2) == 3);
  CHECK(p.object_at(3) == 1);
  CHECK(p.rank_of(1) == 3);
  CHECK(p.rank_of(2) == 1);
  CHECK(p.rank_of(3) == 2);
  CHECK(p.str() == "231");
  CHECK(Permutation::identity(4) == Permutation::from_order({1, 2, 3, 4}));

  CHECK_THROWS_AS(Permutation::from_order({1, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_order({0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_order({1, 2, 4}), std::invalid_argument);
}

TEST_CASE("object_at and rank_of are inverse on every ranking") {
  for (int m = 1; m <= 5; ++m) {
    for (const auto& p : all_permutations(m)) {
      for (int r = 1; r <= m; ++r) CHECK(p.rank_of(p.object_at(r)) == r);
      for (int obj = 1; obj <= m; ++obj) CHECK(p.object_at(p.rank_of(obj)) == obj);
    }
  }
}

TEST_CASE("all_permutations is the full lexicographic list") {
  auto perms = all_permutations(3);
  REQUIRE(perms.size() == 6);
  CHECK(perms[0].str() == "123");
  CHECK(perms[1].str() == "132");
  CHECK(perms[2].str() == "213");
  CHECK(perms[3].str() == "231");
  CHECK(perms[4].str() == "312");
  CHECK(perms[5].str() == "321");

  for (int m = 1; m <= 5; ++m) {
    auto all = all_permutations(m);
    CHECK(static_cast<long long>(all.size()) == factorial(m));
    for (size_t i = 0; i < all.size(); ++i)
      CHECK(lexicographic_rank(all[i]) == static_cast<long long>(i));
  }
}

TEST_CASE("relevance vector index convention puts object 1 in the top bit") {
  RelevanceVector r = RelevanceVector::from_index(3, 4);
  CHECK(r.at(1) == 1);
  CHECK(r.at(2) == 0);
  CHECK(r.at(3) == 0);
  CHECK(r.str() == "100");
  CHECK(RelevanceVector::from_index(3, 0).str() == "000");
  CHECK(RelevanceVector::from_index(3, 7).str() == "111");
  for (int m = 1; m <= 6; ++m)
    for (uint64_t j = 0; j < (uint64_t(1) << m); ++j)
      CHECK(RelevanceVector::from_index(m, j).index() == j);
}

TEST_CASE("measure names round-trip") {
  CHECK(measure_kind_from_name("pl") == MeasureKind::PairwiseLoss);
  CHECK(measure_kind_from_name("sl") == MeasureKind::SumLoss);
  CHECK(measure_kind_from_name("dcg") == MeasureKind::NegDcg);
  CHECK(measure_kind_from_name("pn") == MeasureKind::NegPn);
  CHECK_THROWS_AS(measure_kind_from_name("ndcg"), std::invalid_argument);
  CHECK(MeasureSpec::pairwise_loss().name() == "pl");
  CHECK(MeasureSpec::sum_loss().name() == "sl");
  CHECK(MeasureSpec::neg_dcg().name() == "dcg");
  CHECK(MeasureSpec::neg_pn(2).name() == "pn");
}

TEST_CASE("hand-computed losses") {
  Permutation id3 = Permutation::identity(3);
  RelevanceVector r101 = rel({1, 0, 1});

  // rank-weighted sum: 1*1 + 2*0 + 3*1
  CHECK(eval_measure_exact(MeasureSpec::sum_loss(), id3, r101) == Rat(4));
  CHECK(eval_measure(MeasureSpec::sum_loss(), id3, r101) == doctest::Approx(4.0));

  // misordered pairs against relevance: only (1,2) contributes under identity
  RelevanceVector r010 = rel({0, 1, 0});
  CHECK(eval_measure_exact(MeasureSpec::pairwise_loss(), id3, r010) == Rat(1));
  Permutation swapped = Permutation::from_order({2, 1, 3});
  CHECK(eval_measure_exact(MeasureSpec::pairwise_loss(), swapped, r010) == Rat(0));

  // negated dcg: weights at ranks 1 and 3 are exactly 1 and 1/2
  CHECK(eval_measure_exact(MeasureSpec::neg_dcg(), id3, r101) == Rat(-3) / 2);
  CHECK(eval_measure(MeasureSpec::neg_dcg(), id3, r101) == doctest::Approx(-1.5));

  // negated precision at 2: one relevant object in the top two
  CHECK(eval_measure_exact(MeasureSpec::neg_pn(2), id3, r101) == Rat(-1));
  CHECK(eval_measure_exact(MeasureSpec::neg_pn(1), id3, r101) == Rat(-1));
  CHECK(eval_measure_exact(MeasureSpec::neg_pn(3), id3, r101) == Rat(-2));
}

TEST_CASE("pairwise loss counts every misordered relevant pair") {
  // brute force over all rankings and outcomes at m = 4
  for (const auto& sigma : all_permutations(4)) {
    for (uint64_t j = 0; j < 16; ++j) {
      RelevanceVector r = RelevanceVector::from_index(4, j);
      int count = 0;
      for (int i = 1; i <= 4; ++i)
        for (int l = 1; l <= 4; ++l)
          if (sigma.rank_of(i) < sigma.rank_of(l) && r.at(i) < r.at(l)) ++count;
      CHECK(eval_measure_exact(MeasureSpec::pairwise_loss(), sigma, r) == Rat(count));
    }
  }
}

TEST_CASE("linear form agrees with direct evaluation") {
  CHECK(!has_linear_form(MeasureKind::PairwiseLoss));
  CHECK(has_linear_form(MeasureKind::SumLoss));
  CHECK(has_linear_form(MeasureKind::NegDcg));
  CHECK(has_linear_form(MeasureKind::NegPn));
  CHECK_THROWS_AS(f_scalar(MeasureSpec::pairwise_loss(), 1), std::invalid_argument);

  std::vector<MeasureSpec> specs = {MeasureSpec::sum_loss(), MeasureSpec::neg_dcg(),
                                    MeasureSpec::neg_pn(1), MeasureSpec::neg_pn(3)};
  for (const auto& spec : specs) {
    for (const auto& sigma : all_permutations(4)) {
      RatVec f = f_vector_exact(spec, sigma);
      for (uint64_t j = 0; j < 16; ++j) {
        RelevanceVector r = RelevanceVector::from_index(4, j);
        Rat total = 0;
        for (int i = 1; i <= 4; ++i)
          if (r.at(i)) total += f[i - 1];
        CHECK(total == eval_measure_exact(spec, sigma, r));

        double ftotal = 0;
        for (int i = 1; i <= 4; ++i)
          if (r.at(i)) ftotal += f_scalar(spec, sigma.rank_of(i));
        CHECK(ftotal == doctest::Approx(eval_measure(spec, sigma, r)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("dcg fixed-point weights stay within resolution of the true weights") {
  MeasureSpec coarse = MeasureSpec::neg_dcg(8);
  MeasureSpec fine = MeasureSpec::neg_dcg(40);
  for (int rank = 1; rank <= 6; ++rank) {
    double truth = -1.0 / std::log2(rank + 1.0);
    CHECK(std::fabs(rat_to_double(f_scalar_exact(coarse, rank)) - truth) <= std::ldexp(1.0, -8));
    CHECK(std::fabs(rat_to_double(f_scalar_exact(fine, rank)) - truth) <= std::ldexp(1.0, -40));
    CHECK(f_scalar(coarse, rank) == truth);
  }
}

TEST_CASE("sort_ranking orders by score with ties toward the lower object") {
  CHECK(sort_ranking({0.5, 0.9, 0.5}) == Permutation::from_order({2, 1, 3}));
  CHECK(sort_ranking({1.0, 1.0, 1.0, 1.0}) == Permutation::identity(4));
  CHECK(sort_ranking({0.1, 0.2, 0.3}) == Permutation::from_order({3, 2, 1}));
}

TEST_CASE("hindsight best matches brute force over all rankings") {
  Rng rng(7);
  std::vector<MeasureSpec> specs = {MeasureSpec::pairwise_loss(), MeasureSpec::sum_loss(),
                                    MeasureSpec::neg_dcg(), MeasureSpec::neg_pn(2)};
  auto perms = all_permutations(4);
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<RelevanceVector> seq;
      int rounds = 1 + static_cast<int>(rng() % 12);
      for (int t = 0; t < rounds; ++t)
        seq.push_back(RelevanceVector::from_index(4, rng() % 16));

      HindsightResult h = hindsight_best(spec, seq);
      Rat best;
      bool first = true;
      for (const auto& sigma : perms) {
        Rat total = 0;
        for (const auto& r : seq) total += eval_measure_exact(spec, sigma, r);
        if (first || total < best) best = total, first = false;
      }
      CHECK(h.total_exact == best);
      Rat achieved = 0;
      for (const auto& r : seq) achieved += eval_measure_exact(spec, h.best, r);
      CHECK(achieved == best);
    }
  }
  CHECK_THROWS_AS(hindsight_best(MeasureSpec::sum_loss(), {}), std::invalid_argument);
}

TEST_CASE("hindsight totals for a fixed count profile") {
  // counts (2,2,1) over three rounds; identity is optimal for the weighted sum
  std::vector<RelevanceVector> seq = {rel({1, 1, 0}), rel({1, 0, 1}), rel({0, 1, 0})};
  HindsightResult h = hindsight_best(MeasureSpec::sum_loss(), seq);
  CHECK(h.best == Permutation::identity(3));
  CHECK(h.total_exact == Rat(1 * 2 + 2 * 2 + 3 * 1));
}
