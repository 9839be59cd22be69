#include "topk/harness.hpp"

#include "topk/baselines.hpp"
#include "topk/nw2.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace topk {

AdversarySpec AdversarySpec::iid(std::vector<double> probs) {
  AdversarySpec s;
  s.kind = Kind::IidBernoulli;
  s.p = std::move(probs);
  return s;
}

AdversarySpec AdversarySpec::switching(std::vector<double> first, std::vector<double> second,
                                       long long switch_round) {
  AdversarySpec s;
  s.kind = Kind::Switching;
  s.p = std::move(first);
  s.p2 = std::move(second);
  s.switch_round = switch_round;
  return s;
}

AdversarySpec AdversarySpec::fixed(std::vector<RelevanceVector> seq) {
  AdversarySpec s;
  s.kind = Kind::FixedSequence;
  s.sequence = std::move(seq);
  return s;
}

AdversarySpec AdversarySpec::from_preset(const std::string& name) {
  AdversarySpec s;
  s.preset = name;
  return s;
}

namespace {

void check_probs(const std::vector<double>& p, int m, const char* what) {
  if (static_cast<int>(p.size()) != m)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(m) +
                                " probabilities, got " + std::to_string(p.size()));
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument(std::string(what) + ": probability " + std::to_string(v) +
                                  " outside [0,1]");
}

} // namespace

AdversarySpec resolve_adversary(const AdversarySpec& spec, int m, long long T) {
  AdversarySpec r = spec;
  if (!spec.preset.empty()) {
    r = AdversarySpec{};
    r.preset = spec.preset;
    if (spec.preset == "uniform") {
      r.p.assign(m, 0.5);
    } else if (spec.preset == "gap") {
      r.p.resize(m);
      for (int i = 1; i <= m; ++i) r.p[i - 1] = std::max(0.1, 0.8 - 0.15 * (i - 1));
    } else if (spec.preset == "hard-sl") {
      if (m != 3)
        throw std::invalid_argument("adversary preset 'hard-sl' is defined for m = 3, got m = " +
                                    std::to_string(m));
      double eps = 1.0 / std::cbrt(static_cast<double>(T));
      r.p = {0.9, 0.5 + eps, 0.5 - eps};
    } else {
      throw std::invalid_argument("unknown adversary preset '" + spec.preset +
                                  "' (expected uniform|gap|hard-sl)");
    }
  }
  switch (r.kind) {
    case AdversarySpec::Kind::IidBernoulli:
      check_probs(r.p, m, "iid adversary");
      break;
    case AdversarySpec::Kind::Switching:
      check_probs(r.p, m, "switching adversary (first phase)");
      check_probs(r.p2, m, "switching adversary (second phase)");
      if (r.switch_round < 1 || r.switch_round >= T)
        throw std::invalid_argument("switching adversary: switch_round must be in [1, T)");
      break;
    case AdversarySpec::Kind::FixedSequence:
      if (static_cast<long long>(r.sequence.size()) < T)
        throw std::invalid_argument("fixed adversary: sequence holds " +
                                    std::to_string(r.sequence.size()) + " rounds, horizon is " +
                                    std::to_string(T));
      for (const auto& rv : r.sequence)
        if (rv.m != m)
          throw std::invalid_argument("fixed adversary: relevance vector for " +
                                      std::to_string(rv.m) + " objects, expected " +
                                      std::to_string(m));
      break;
  }
  return r;
}

std::vector<RelevanceVector> generate_outcomes(const AdversarySpec& spec, int m, long long T,
                                               uint64_t seed) {
  AdversarySpec r = resolve_adversary(spec, m, T);
  std::vector<RelevanceVector> out;
  out.reserve(T);
  if (r.kind == AdversarySpec::Kind::FixedSequence) {
    out.assign(r.sequence.begin(), r.sequence.begin() + T);
    return out;
  }
  Rng rng(seed);
  for (long long t = 1; t <= T; ++t) {
    const std::vector<double>& p =
        (r.kind == AdversarySpec::Kind::Switching && t > r.switch_round) ? r.p2 : r.p;
    RelevanceVector rv;
    rv.m = m;
    rv.bits.resize(m);
    for (int i = 0; i < m; ++i) rv.bits[i] = bernoulli(rng, p[i]) ? 1 : 0;
    out.push_back(std::move(rv));
  }
  return out;
}

namespace {

// Incremental best-fixed-ranking loss over the realized prefix. Linear
// measures need only per-object relevance counts; the pairwise measure keeps
// the m x m misorder counts, whose per-pair minimum is achieved by the same
// count-sorted ranking for every pair at once.
class PrefixHindsight {
 public:
  PrefixHindsight(const MeasureSpec& measure, int m)
      : measure_(measure), m_(m), counts_(m, 0),
        pairwise_(measure.kind == MeasureKind::PairwiseLoss) {
    if (pairwise_) mis_.assign(m * m, 0);
  }

  void add(const RelevanceVector& r) {
    for (int i = 0; i < m_; ++i) counts_[i] += r.bits[i];
    if (pairwise_) {
      for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b)
          if (!r.bits[a] && r.bits[b]) ++mis_[a * m_ + b];
    }
  }

  double best_total() const {
    if (pairwise_) {
      long long total = 0;
      for (int a = 0; a < m_; ++a)
        for (int b = a + 1; b < m_; ++b) total += std::min(mis_[a * m_ + b], mis_[b * m_ + a]);
      return static_cast<double>(total);
    }
    std::vector<double> scores(counts_.begin(), counts_.end());
    Permutation best = sort_ranking(scores);
    double total = 0;
    for (int obj = 1; obj <= m_; ++obj)
      total += f_scalar(measure_, best.rank_of(obj)) * static_cast<double>(counts_[obj - 1]);
    return total;
  }

 private:
  MeasureSpec measure_;
  int m_;
  std::vector<long long> counts_;
  bool pairwise_;
  std::vector<long long> mis_;
};

} // namespace

RegretTrace play_game(OnlineRanker& learner, const MeasureSpec& measure, int m, int k,
                      const std::vector<RelevanceVector>& outcomes, Rng& rng) {
  if (k < 1 || k > m) throw std::invalid_argument("play_game: k must be in [1, m]");
  RegretTrace trace;
  trace.rows.reserve(outcomes.size());
  PrefixHindsight hindsight(measure, m);
  double cum_loss = 0;
  std::vector<uint8_t> bits(k);
  for (size_t idx = 0; idx < outcomes.size(); ++idx) {
    const RelevanceVector& r = outcomes[idx];
    Permutation sigma = learner.choose(rng);
    if (sigma.size() != m) throw std::logic_error("play_game: learner returned wrong-size ranking");
    long long id = learner.traced_id();
    for (int rank = 1; rank <= k; ++rank)
      bits[rank - 1] = static_cast<uint8_t>(r.at(sigma.object_at(rank)));
    learner.observe(bits);
    double loss = eval_measure(measure, sigma, r);
    cum_loss += loss;
    hindsight.add(r);
    TraceRow row;
    row.t = static_cast<long long>(idx) + 1;
    row.sampled_class = id;
    row.realized_loss = loss;
    row.feedback_bit = bits[0];
    row.cum_regret = cum_loss - hindsight.best_total();
    trace.rows.push_back(row);
  }
  return trace;
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& t_and_mean) {
  FitResult fit;
  std::vector<double> xs, ys;
  for (const auto& [t, mean] : t_and_mean) {
    if (mean <= 0) {
      fit.excluded.push_back(static_cast<long long>(t));
      std::fprintf(stderr, "fit: dropping T=%lld (mean regret %g not positive)\n",
                   static_cast<long long>(t), mean);
      continue;
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(mean));
  }
  size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("fit: need at least two positive-mean grid points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit: all grid points share one horizon");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

long long default_explore_rounds(long long T) {
  if (T < 1) throw std::invalid_argument("explore rounds: horizon must be positive");
  long long t2 = T * T;
  long long e = std::llround(std::cbrt(static_cast<double>(t2)));
  if (e < 1) e = 1;
  while (e > 1 && (e - 1) * (e - 1) * (e - 1) >= t2) --e;
  while (e * e * e < t2) ++e;
  return e;
}

std::unique_ptr<OnlineRanker> make_learner(const SweepConfig& cfg, long long T) {
  if (cfg.learner == "nw2") {
    if (cfg.measure.kind != MeasureKind::NegPn)
      throw std::invalid_argument("learner 'nw2' targets the top-n precision measure (pn)");
    LearnerConfig lc;
    lc.m = cfg.m;
    lc.n = cfg.measure.n;
    lc.horizon = T;
    lc.eta = cfg.eta;
    lc.gamma = cfg.gamma;
    return std::make_unique<Nw2Learner>(lc);
  }
  if (cfg.learner == "explore_exploit") {
    long long e = cfg.explore_rounds > 0 ? cfg.explore_rounds : default_explore_rounds(T);
    return std::make_unique<ExploreExploitLearner>(cfg.measure, cfg.m, cfg.k, e);
  }
  if (cfg.learner == "full_info_ftl")
    return std::make_unique<FullInfoFtlLearner>(cfg.measure, cfg.m, cfg.k);
  throw std::invalid_argument("unknown learner '" + cfg.learner +
                              "' (expected nw2|explore_exploit|full_info_ftl)");
}

namespace {

nlohmann::json adversary_json(const AdversarySpec& a) {
  nlohmann::json j;
  if (!a.preset.empty()) {
    j["preset"] = a.preset;
    return j;
  }
  switch (a.kind) {
    case AdversarySpec::Kind::IidBernoulli:
      j["kind"] = "iid";
      j["p"] = a.p;
      break;
    case AdversarySpec::Kind::Switching:
      j["kind"] = "switching";
      j["p"] = a.p;
      j["p2"] = a.p2;
      j["switch_round"] = a.switch_round;
      break;
    case AdversarySpec::Kind::FixedSequence:
      j["kind"] = "fixed";
      j["rounds"] = a.sequence.size();
      break;
  }
  return j;
}

} // namespace

std::string adversary_fingerprint(const AdversarySpec& spec) { return adversary_json(spec).dump(); }

namespace {

std::string sweep_fingerprint(const SweepConfig& cfg) {
  nlohmann::json j;
  j["adversary"] = adversary_json(cfg.adversary);
  j["eta"] = cfg.eta;
  j["explore_rounds"] = cfg.explore_rounds;
  j["gamma"] = cfg.gamma;
  j["grid"] = cfg.grid;
  j["k"] = cfg.k;
  j["learner"] = cfg.learner;
  j["m"] = cfg.m;
  j["master_seed"] = cfg.master_seed;
  j["measure"] = {{"dcg_bits", cfg.measure.dcg_fixed_point_bits},
                  {"kind", cfg.measure.name()},
                  {"n", cfg.measure.n}};
  j["reps"] = cfg.reps;
  return j.dump();
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  SweepConfig c = cfg;
  if (c.grid.empty())
    for (int e = 10; e <= 16; ++e) c.grid.push_back(1LL << e);
  if (c.reps < 1) throw std::invalid_argument("sweep: reps must be positive");
  for (long long T : c.grid)
    if (T < 1) throw std::invalid_argument("sweep: horizons must be positive");

  size_t grid_n = c.grid.size();
  std::vector<std::vector<double>> finals(grid_n, std::vector<double>(c.reps, 0.0));
  size_t jobs = grid_n * static_cast<size_t>(c.reps);
  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;

  auto worker = [&]() {
    for (;;) {
      size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      {
        std::lock_guard<std::mutex> lock(err_mu);
        if (err) return;
      }
      try {
        size_t gi = j / c.reps;
        int rep = static_cast<int>(j % c.reps);
        long long T = c.grid[gi];
        uint64_t stream = static_cast<uint64_t>(gi) * c.reps + rep;
        auto outcomes =
            generate_outcomes(c.adversary, c.m, T, derive_seed(c.master_seed, stream, 0));
        auto learner = make_learner(c, T);
        Rng rng(derive_seed(c.master_seed, stream, 1));
        RegretTrace trace = play_game(*learner, c.measure, c.m, c.k, outcomes, rng);
        finals[gi][rep] = trace.final_regret();
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };

  int threads = c.threads > 0 ? c.threads
                              : std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);

  SweepResult result;
  result.config_fingerprint = sweep_fingerprint(c);
  std::vector<std::pair<double, double>> fit_input;
  for (size_t gi = 0; gi < grid_n; ++gi) {
    SweepPoint pt;
    pt.T = c.grid[gi];
    pt.reps = c.reps;
    double sum = 0;
    for (double v : finals[gi]) sum += v;
    pt.mean_regret = sum / c.reps;
    if (c.reps > 1) {
      double ss = 0;
      for (double v : finals[gi]) ss += (v - pt.mean_regret) * (v - pt.mean_regret);
      pt.stderr_mean = std::sqrt(ss / (c.reps - 1)) / std::sqrt(static_cast<double>(c.reps));
    }
    result.points.push_back(pt);
    fit_input.emplace_back(static_cast<double>(pt.T), pt.mean_regret);
  }
  result.fit = fit_loglog(fit_input);
  return result;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

} // namespace

void write_trace_csv(const std::string& path, const RegretTrace& trace) {
  std::ofstream out = open_out(path);
  out << "# config " << trace.config_fingerprint << "\n";
  out << "t,sampled_class,realized_loss,feedback_bit,cum_regret\n";
  for (const TraceRow& row : trace.rows)
    out << row.t << ',' << row.sampled_class << ',' << format_double(row.realized_loss) << ','
        << row.feedback_bit << ',' << format_double(row.cum_regret) << "\n";
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out = open_out(path);
  out << "# config " << result.config_fingerprint << "\n";
  out << "T,mean_regret,stderr,reps\n";
  for (const SweepPoint& pt : result.points)
    out << pt.T << ',' << format_double(pt.mean_regret) << ',' << format_double(pt.stderr_mean)
        << ',' << pt.reps << "\n";
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace topk
