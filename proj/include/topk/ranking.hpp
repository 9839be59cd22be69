#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topk/rational.hpp"

namespace topk {

// A ranking of m objects. Objects are labeled 1..m; ranks are 1..m with rank 1
// the top position. rank_to_object[r-1] is the object placed at rank r.
struct Permutation {
  std::vector<int> rank_to_object;
  std::vector<int> object_to_rank;

  static Permutation identity(int m);
  // order lists objects from rank 1 down to rank m; it becomes rank_to_object.
  // Validates that it holds each of 1..m exactly once.
  static Permutation from_order(std::vector<int> order);

  int size() const { return static_cast<int>(rank_to_object.size()); }
  int object_at(int rank) const { return rank_to_object[rank - 1]; }
  int rank_of(int object) const { return object_to_rank[object - 1]; }

  bool operator==(const Permutation& o) const { return rank_to_object == o.rank_to_object; }

  // Digits of rank_to_object, e.g. "213" for (2,1,3). Only used for m <= 9.
  std::string str() const;
};

// All m! rankings in lexicographic order of rank_to_object.
std::vector<Permutation> all_permutations(int m);

// Position of sigma in that lexicographic order, without enumerating.
long long lexicographic_rank(const Permutation& sigma);

// Binary relevance judgments for m objects; bits[i-1] = R(i).
struct RelevanceVector {
  int m = 0;
  std::vector<uint8_t> bits;

  // Outcome index treats R(1) as the most significant bit, so index 0 is the
  // all-zeros vector and index 2^m - 1 the all-ones vector.
  static RelevanceVector from_index(int m, uint64_t index);
  uint64_t index() const;

  int at(int object) const { return bits[object - 1]; }
  std::string str() const;
};

enum class MeasureKind { PairwiseLoss, SumLoss, NegDcg, NegPn };

// A loss to be minimized. PairwiseLoss counts misordered relevant pairs,
// SumLoss is the relevance-weighted sum of ranks, NegDcg and NegPn are the
// negated gain measures so that smaller is better for all four.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::SumLoss;
  int n = 0;                     // cutoff, NegPn only
  int dcg_fixed_point_bits = 32; // NegDcg rank weights rounded to this many fractional bits
                                 // whenever an exact rational value is required

  static MeasureSpec pairwise_loss() { return {MeasureKind::PairwiseLoss, 0, 32}; }
  static MeasureSpec sum_loss() { return {MeasureKind::SumLoss, 0, 32}; }
  static MeasureSpec neg_dcg(int fixed_point_bits = 32) {
    return {MeasureKind::NegDcg, 0, fixed_point_bits};
  }
  static MeasureSpec neg_pn(int n) { return {MeasureKind::NegPn, n, 32}; }

  std::string name() const;
};

MeasureKind measure_kind_from_name(const std::string& name); // pl|sl|dcg|pn

// True for measures expressible as f(sigma) . R with f independent of R.
bool has_linear_form(MeasureKind kind);

// Exact loss value. NegDcg uses the fixed-point rank weights so the result
// is rational; the other kinds are exactly integral.
Rat eval_measure_exact(const MeasureSpec& spec, const Permutation& sigma,
                       const RelevanceVector& r);

// Float path; NegDcg uses true log2 weights here (difference from the
// fixed-point value is below 2^-bits per object).
double eval_measure(const MeasureSpec& spec, const Permutation& sigma,
                    const RelevanceVector& r);

// Rank-indexed scores: the loss equals sum_i f_scalar(rank_of(i)) * R(i).
// PairwiseLoss has no such form and throws.
double f_scalar(const MeasureSpec& spec, int rank);
Rat f_scalar_exact(const MeasureSpec& spec, int rank);

std::vector<double> f_vector(const MeasureSpec& spec, const Permutation& sigma);
RatVec f_vector_exact(const MeasureSpec& spec, const Permutation& sigma);

struct HindsightResult {
  Permutation best;
  Rat total_exact;  // valid for PairwiseLoss/SumLoss/NegPn and fixed-point NegDcg
  double total = 0; // float total for every kind
};

// Single fixed ranking minimizing total loss over the sequence. Ties in the
// cumulative relevance counts are broken toward the lower object index.
HindsightResult hindsight_best(const MeasureSpec& spec,
                               const std::vector<RelevanceVector>& seq);

// The ranking that sorts the given per-object scores descending with ties
// toward the lower object index. Shared by hindsight and the baselines.
Permutation sort_ranking(const std::vector<double>& scores);

} // namespace topk
