#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace topk {

using Rng = std::mt19937_64;

// splitmix64 step; used to spread user seeds and to derive per-stream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One master seed fans out into independent streams indexed by counters.
inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t substream = 0) {
  uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (0xa0761d6478bd642fULL + stream));
  h = splitmix64(h ^ (0xe7037ed1a0b428dbULL + substream));
  return h;
}

// Uniform double in [0,1) built from the top 53 bits; identical on every
// platform, unlike std::uniform_real_distribution.
inline double u01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return u01(rng) < p; }

// Inverse-CDF sample over a fixed index order; weights need not sum to one
// exactly (the last positive weight absorbs rounding).
inline int sample_discrete(Rng& rng, const std::vector<double>& w) {
  double total = 0;
  for (double x : w) total += x;
  double u = u01(rng) * total;
  double acc = 0;
  int last_pos = -1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (w[i] <= 0) continue;
    last_pos = i;
    acc += w[i];
    if (u < acc) return i;
  }
  return last_pos;
}

} // namespace topk
