#pragma once

#include "topk/ranking.hpp"
#include "topk/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace topk {

// Oblivious adversaries: the full outcome sequence is materialized before the
// learner moves. Presets resolve to iid specs once the horizon is known.
struct AdversarySpec {
  enum class Kind { IidBernoulli, Switching, FixedSequence };
  Kind kind = Kind::IidBernoulli;
  std::vector<double> p;   // iid; switching first phase
  std::vector<double> p2;  // switching second phase
  long long switch_round = 0;  // last round of the first phase
  std::vector<RelevanceVector> sequence;
  std::string preset;  // "uniform" | "gap" | "hard-sl"; overrides the fields above

  static AdversarySpec iid(std::vector<double> probs);
  static AdversarySpec switching(std::vector<double> first, std::vector<double> second,
                                 long long switch_round);
  static AdversarySpec fixed(std::vector<RelevanceVector> seq);
  static AdversarySpec from_preset(const std::string& name);
};

// Preset/validation resolution; exposed so fingerprints can record the
// concrete probabilities. hard-sl needs T for its T^(-1/3) margin and is
// pinned to m = 3.
AdversarySpec resolve_adversary(const AdversarySpec& spec, int m, long long T);

std::vector<RelevanceVector> generate_outcomes(const AdversarySpec& spec, int m, long long T,
                                               uint64_t seed);

// Interface the game loop drives. choose() commits the round's ranking;
// observe() then delivers the relevances of its top k objects, top rank
// first. traced_id() labels the round in the trace: reduced-game learners
// report their class, full-ranking learners the lexicographic action index.
class OnlineRanker {
 public:
  virtual ~OnlineRanker() = default;
  virtual Permutation choose(Rng& rng) = 0;
  virtual void observe(const std::vector<uint8_t>& bits) = 0;
  virtual long long traced_id() const = 0;
};

struct TraceRow {
  long long t = 0;
  long long sampled_class = 0;
  double realized_loss = 0;
  int feedback_bit = 0;
  double cum_regret = 0;
};

struct RegretTrace {
  std::string config_fingerprint;
  std::vector<TraceRow> rows;
  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
};

// Runs the loop, revealing exactly k bits per round and accounting regret
// against the best fixed ranking for the realized prefix.
RegretTrace play_game(OnlineRanker& learner, const MeasureSpec& measure, int m, int k,
                      const std::vector<RelevanceVector>& outcomes, Rng& rng);

struct SweepConfig {
  MeasureSpec measure;
  int m = 0, k = 0;
  std::string learner;  // "nw2" | "explore_exploit" | "full_info_ftl"
  std::vector<long long> grid;
  int reps = 10;
  uint64_t master_seed = 1;
  AdversarySpec adversary;
  double eta = 0, gamma = 0;       // 0 = learner defaults
  long long explore_rounds = 0;    // 0 = ceil(T^(2/3))
  int threads = 1;
};

struct SweepPoint {
  long long T = 0;
  double mean_regret = 0;
  double stderr_mean = 0;
  int reps = 0;
};

struct FitResult {
  double slope = 0, intercept = 0, r2 = 0;
  std::vector<long long> excluded;  // grid points dropped for non-positive mean
};

struct SweepResult {
  std::vector<SweepPoint> points;
  FitResult fit;
  std::string config_fingerprint;
};

// Least-squares line through (ln T, ln mean), dropping non-positive means
// with a stderr warning.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& t_and_mean);

SweepResult run_sweep(const SweepConfig& cfg);

// Learner factory shared by run_sweep and single runs. Uses measure/m/k plus
// the learner-specific overrides from cfg; T completes the defaults.
std::unique_ptr<OnlineRanker> make_learner(const SweepConfig& cfg, long long T);

// Default exploration budget for the explore-then-exploit baseline: the
// smallest integer E with E^3 >= T^2.
long long default_explore_rounds(long long T);

// Canonical JSON text describing an adversary, for config fingerprints.
// Presets record their name; explicit specs their parameters.
std::string adversary_fingerprint(const AdversarySpec& spec);

// CSV/JSON writers. Doubles use shortest round-trip formatting so identical
// configs reproduce identical bytes.
std::string format_double(double x);
void write_trace_csv(const std::string& path, const RegretTrace& trace);
void write_sweep_csv(const std::string& path, const SweepResult& result);

} // namespace topk
