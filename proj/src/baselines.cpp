#include "topk/baselines.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace topk {

ExploreExploitLearner::ExploreExploitLearner(const MeasureSpec& measure, int m, int k,
                                             long long explore_rounds)
    : measure_(measure),
      m_(m),
      k_(k),
      explore_rounds_(explore_rounds),
      exposure_(m, 0),
      sum_(m, 0),
      samples_(m, 0),
      current_(Permutation::identity(m)) {
  if (explore_rounds < 0) throw std::invalid_argument("explore rounds must be nonnegative");
}

Permutation ExploreExploitLearner::exploration_ranking(int m, int k, long long t,
                                                       const std::vector<long long>& exposure) {
  int forced = static_cast<int>((t - 1) % m) + 1;
  std::vector<int> order{forced};

  std::vector<int> rest;
  for (int obj = 1; obj <= m; ++obj)
    if (obj != forced) rest.push_back(obj);
  // Fill the remaining observed ranks with the least-exposed objects; among
  // ties take the one whose next turn at rank 1 is farthest away, so it
  // cannot rely on a forced slot soon.
  std::sort(rest.begin(), rest.end(), [&](int x, int y) {
    long long dx = (x - 1 - t) % m, dy = (y - 1 - t) % m;
    if (dx < 0) dx += m;
    if (dy < 0) dy += m;
    return std::make_tuple(exposure[x - 1], -dx, x) < std::make_tuple(exposure[y - 1], -dy, y);
  });
  for (int i = 0; i < k - 1; ++i) order.push_back(rest[i]);

  std::vector<int> tail(rest.begin() + (k - 1), rest.end());
  std::sort(tail.begin(), tail.end());
  for (int obj : tail) order.push_back(obj);
  return Permutation::from_order(std::move(order));
}

Permutation ExploreExploitLearner::choose(Rng&) {
  ++t_;
  if (t_ <= explore_rounds_) {
    current_ = exploration_ranking(m_, k_, t_, exposure_);
    for (int r = 1; r <= k_; ++r) ++exposure_[current_.object_at(r) - 1];
    return current_;
  }
  if (!committed_) {
    std::vector<double> means(m_);
    for (int obj = 1; obj <= m_; ++obj)
      means[obj - 1] = samples_[obj - 1] > 0 ? sum_[obj - 1] / samples_[obj - 1] : 0.0;
    current_ = sort_ranking(means);
    committed_ = true;
  }
  return current_;
}

void ExploreExploitLearner::observe(const std::vector<uint8_t>& bits) {
  if (t_ > explore_rounds_) return;
  for (int r = 1; r <= k_; ++r) {
    int obj = current_.object_at(r);
    sum_[obj - 1] += bits.at(r - 1);
    samples_[obj - 1] += 1;
  }
}

long long ExploreExploitLearner::traced_id() const { return lexicographic_rank(current_); }

FullInfoFtlLearner::FullInfoFtlLearner(const MeasureSpec& measure, int m, int k)
    : measure_(measure), m_(m), counts_(m, 0), current_(Permutation::identity(m)) {
  if (k != m) throw std::invalid_argument("full-information learner needs k = m");
}

Permutation FullInfoFtlLearner::choose(Rng&) {
  current_ = sort_ranking(counts_);
  return current_;
}

void FullInfoFtlLearner::observe(const std::vector<uint8_t>& bits) {
  for (int r = 1; r <= m_; ++r) counts_[current_.object_at(r) - 1] += bits.at(r - 1);
}

long long FullInfoFtlLearner::traced_id() const { return lexicographic_rank(current_); }

} // namespace topk
