#include "topk/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace topk {

Permutation Permutation::identity(int m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 1);
  return from_order(std::move(order));
}

Permutation Permutation::from_order(std::vector<int> order) {
  int m = static_cast<int>(order.size());
  std::vector<int> seen(m, 0);
  for (int obj : order) {
    if (obj < 1 || obj > m || seen[obj - 1]++)
      throw std::invalid_argument("permutation must list each object 1..m exactly once");
  }
  Permutation p;
  p.rank_to_object = std::move(order);
  p.object_to_rank.assign(m, 0);
  for (int r = 1; r <= m; ++r) p.object_to_rank[p.rank_to_object[r - 1] - 1] = r;
  return p;
}

std::string Permutation::str() const {
  std::string s;
  for (int obj : rank_to_object) s += static_cast<char>('0' + obj);
  return s;
}

std::vector<Permutation> all_permutations(int m) {
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation sigma;
    sigma.rank_to_object = order;
    sigma.object_to_rank.resize(m);
    for (int r = 1; r <= m; ++r) sigma.object_to_rank[order[r - 1] - 1] = r;
    out.push_back(std::move(sigma));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

long long lexicographic_rank(const Permutation& sigma) {
  int m = sigma.size();
  long long rank = 0, fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  for (int r = 1; r <= m; ++r) {
    fact /= m - r + 1;
    int smaller = 0;
    for (int r2 = r + 1; r2 <= m; ++r2)
      if (sigma.object_at(r2) < sigma.object_at(r)) ++smaller;
    rank += smaller * fact;
  }
  return rank;
}

RelevanceVector RelevanceVector::from_index(int m, uint64_t index) {
  RelevanceVector r;
  r.m = m;
  r.bits.assign(m, 0);
  for (int i = 1; i <= m; ++i) r.bits[i - 1] = (index >> (m - i)) & 1;
  return r;
}

uint64_t RelevanceVector::index() const {
  uint64_t idx = 0;
  for (int i = 1; i <= m; ++i) idx = (idx << 1) | bits[i - 1];
  return idx;
}

std::string RelevanceVector::str() const {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

std::string MeasureSpec::name() const {
  switch (kind) {
    case MeasureKind::PairwiseLoss: return "pl";
    case MeasureKind::SumLoss: return "sl";
    case MeasureKind::NegDcg: return "dcg";
    case MeasureKind::NegPn: return "pn";
  }
  return "?";
}

MeasureKind measure_kind_from_name(const std::string& name) {
  if (name == "pl") return MeasureKind::PairwiseLoss;
  if (name == "sl") return MeasureKind::SumLoss;
  if (name == "dcg") return MeasureKind::NegDcg;
  if (name == "pn") return MeasureKind::NegPn;
  throw std::invalid_argument("unknown measure '" + name + "' (expected pl|sl|dcg|pn)");
}

bool has_linear_form(MeasureKind kind) { return kind != MeasureKind::PairwiseLoss; }

namespace {

void check_pn(const MeasureSpec& spec, int m) {
  if (spec.kind == MeasureKind::NegPn && (spec.n < 1 || spec.n > m))
    throw std::invalid_argument("cutoff n must be in [1, m]");
}

// Negated DCG weight for a rank, rounded to fixed_point_bits fractional bits.
Rat dcg_weight_exact(int rank, int bits) {
  double w = 1.0 / std::log2(1.0 + rank);
  BigInt scale = BigInt(1) << bits;
  double scaled = w * std::ldexp(1.0, bits);
  BigInt num = static_cast<BigInt>(llround(scaled));
  return -Rat(num, scale);
}

} // namespace

Rat eval_measure_exact(const MeasureSpec& spec, const Permutation& sigma,
                       const RelevanceVector& r) {
  int m = sigma.size();
  if (r.m != m) throw std::invalid_argument("permutation/relevance size mismatch");
  check_pn(spec, m);
  switch (spec.kind) {
    case MeasureKind::PairwiseLoss: {
      long long c = 0;
      for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
          if (i != j && sigma.rank_of(i) < sigma.rank_of(j) && r.at(i) < r.at(j)) ++c;
      return Rat(c);
    }
    case MeasureKind::SumLoss: {
      long long s = 0;
      for (int i = 1; i <= m; ++i) s += static_cast<long long>(sigma.rank_of(i)) * r.at(i);
      return Rat(s);
    }
    case MeasureKind::NegDcg: {
      Rat s = 0;
      for (int i = 1; i <= m; ++i)
        if (r.at(i)) s += dcg_weight_exact(sigma.rank_of(i), spec.dcg_fixed_point_bits);
      return s;
    }
    case MeasureKind::NegPn: {
      long long s = 0;
      for (int i = 1; i <= m; ++i)
        if (sigma.rank_of(i) <= spec.n) s -= r.at(i);
      return Rat(s);
    }
  }
  throw std::logic_error("unreachable");
}

double eval_measure(const MeasureSpec& spec, const Permutation& sigma,
                    const RelevanceVector& r) {
  if (spec.kind == MeasureKind::NegDcg) {
    int m = sigma.size();
    if (r.m != m) throw std::invalid_argument("permutation/relevance size mismatch");
    double s = 0;
    for (int i = 1; i <= m; ++i)
      if (r.at(i)) s -= 1.0 / std::log2(1.0 + sigma.rank_of(i));
    return s;
  }
  return rat_to_double(eval_measure_exact(spec, sigma, r));
}

double f_scalar(const MeasureSpec& spec, int rank) {
  switch (spec.kind) {
    case MeasureKind::PairwiseLoss:
      throw std::invalid_argument("pairwise loss has no rank-score form");
    case MeasureKind::SumLoss: return rank;
    case MeasureKind::NegDcg: return -1.0 / std::log2(1.0 + rank);
    case MeasureKind::NegPn: return rank <= spec.n ? -1.0 : 0.0;
  }
  throw std::logic_error("unreachable");
}

Rat f_scalar_exact(const MeasureSpec& spec, int rank) {
  switch (spec.kind) {
    case MeasureKind::PairwiseLoss:
      throw std::invalid_argument("pairwise loss has no rank-score form");
    case MeasureKind::SumLoss: return Rat(rank);
    case MeasureKind::NegDcg: return dcg_weight_exact(rank, spec.dcg_fixed_point_bits);
    case MeasureKind::NegPn: return Rat(rank <= spec.n ? -1 : 0);
  }
  throw std::logic_error("unreachable");
}

std::vector<double> f_vector(const MeasureSpec& spec, const Permutation& sigma) {
  int m = sigma.size();
  check_pn(spec, m);
  std::vector<double> f(m);
  for (int i = 1; i <= m; ++i) f[i - 1] = f_scalar(spec, sigma.rank_of(i));
  return f;
}

RatVec f_vector_exact(const MeasureSpec& spec, const Permutation& sigma) {
  int m = sigma.size();
  check_pn(spec, m);
  RatVec f(m);
  for (int i = 1; i <= m; ++i) f[i - 1] = f_scalar_exact(spec, sigma.rank_of(i));
  return f;
}

Permutation sort_ranking(const std::vector<double>& scores) {
  int m = static_cast<int>(scores.size());
  std::vector<int> objs(m);
  std::iota(objs.begin(), objs.end(), 1);
  std::sort(objs.begin(), objs.end(), [&](int a, int b) {
    if (scores[a - 1] != scores[b - 1]) return scores[a - 1] > scores[b - 1];
    return a < b;
  });
  return Permutation::from_order(objs);
}

HindsightResult hindsight_best(const MeasureSpec& spec,
                               const std::vector<RelevanceVector>& seq) {
  if (seq.empty()) throw std::invalid_argument("outcome sequence is empty");
  int m = seq.front().m;
  check_pn(spec, m);
  std::vector<double> counts(m, 0);
  for (const auto& r : seq) {
    if (r.m != m) throw std::invalid_argument("mixed relevance sizes");
    for (int i = 1; i <= m; ++i) counts[i - 1] += r.at(i);
  }
  // Sorting by cumulative relevance minimizes the total for every kind here;
  // the pairwise loss shares its minimizer with the rank-weighted sum.
  HindsightResult out;
  out.best = sort_ranking(counts);
  out.total_exact = 0;
  for (const auto& r : seq) out.total_exact += eval_measure_exact(spec, out.best, r);
  if (spec.kind == MeasureKind::NegDcg) {
    out.total = 0;
    for (const auto& r : seq) out.total += eval_measure(spec, out.best, r);
  } else {
    out.total = rat_to_double(out.total_exact);
  }
  return out;
}

} // namespace topk
