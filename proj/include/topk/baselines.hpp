#pragma once

#include "topk/harness.hpp"

#include <vector>

namespace topk {

struct BaselineConfig {
  enum class Kind { ExploreExploit, FullInfoFtl };
  Kind kind = Kind::ExploreExploit;
  long long explore_rounds = 0;  // 0 = ceil(T^(2/3)); ExploreExploit only
  uint64_t seed = 0;             // recorded for fingerprints
};

// Deterministic exploration for explore_rounds rounds, then a single commit
// to the ranking sorting the empirical relevance means. Exploration places
// object ((t-1) mod m) + 1 at rank 1 and fills the remaining observed ranks
// with the least-exposed objects, preferring those whose next forced top
// round is farthest away, which keeps every object's top-k exposure at or
// above floor(E*k/m).
class ExploreExploitLearner : public OnlineRanker {
 public:
  ExploreExploitLearner(const MeasureSpec& measure, int m, int k, long long explore_rounds);

  Permutation choose(Rng& rng) override;
  void observe(const std::vector<uint8_t>& bits) override;
  long long traced_id() const override;

  long long explore_rounds() const { return explore_rounds_; }
  const std::vector<long long>& exposure() const { return exposure_; }

  // The round's exploration ranking, exposed for schedule property tests.
  static Permutation exploration_ranking(int m, int k, long long t,
                                         const std::vector<long long>& exposure);

 private:
  MeasureSpec measure_;
  int m_, k_;
  long long explore_rounds_;
  long long t_ = 0;
  std::vector<long long> exposure_;  // top-k appearances during exploration
  std::vector<double> sum_, samples_;
  Permutation current_;
  bool committed_ = false;
};

// Follow-the-leader under full feedback (k = m): plays the best fixed
// ranking for the prefix seen so far, identity before any data.
class FullInfoFtlLearner : public OnlineRanker {
 public:
  FullInfoFtlLearner(const MeasureSpec& measure, int m, int k);

  Permutation choose(Rng& rng) override;
  void observe(const std::vector<uint8_t>& bits) override;
  long long traced_id() const override;

 private:
  MeasureSpec measure_;
  int m_;
  std::vector<double> counts_;
  Permutation current_;
};

} // namespace topk
