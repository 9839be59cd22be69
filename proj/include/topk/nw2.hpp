#pragma once

#include "topk/harness.hpp"
#include "topk/pn_reduction.hpp"

#include <stdexcept>
#include <vector>

namespace topk {

struct LearnerConfig {
  int m = 0, n = 0;
  long long horizon = 0;
  double eta = 0;    // 0 = (1/V) sqrt(log K / T)
  double gamma = 0;  // 0 = eta K V
  uint64_t seed = 0; // recorded for fingerprints; the harness owns the stream
};

// Raised when the mixing weight reaches 1, which voids the tuning regime.
struct GammaError : std::invalid_argument {
  long long advised_horizon;
  GammaError(const std::string& what, long long advised)
      : std::invalid_argument(what), advised_horizon(advised) {}
};

// Row-stochastic sampling matrix over the reduced actions: representative
// rows are exponential weights over their neighborhood representatives,
// duplicate rows are uniform over all representatives. cum_z is indexed by
// class pairs.
std::vector<std::vector<double>> compute_q(const ReducedGame& rg,
                                           const std::vector<std::vector<double>>& cum_z,
                                           double eta);

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0;  // max |pi^T Q - pi^T| entry
  long long iterations = 0;
  bool power_fallback = false;
};

// Left stationary vector of a row-stochastic matrix: direct solve of
// (Q^T - I)x = 0 with sum-to-one normalization, power iteration fallback.
StationaryResult stationary_distribution(const std::vector<std::vector<double>>& q);

class Nw2Learner : public OnlineRanker {
 public:
  explicit Nw2Learner(const LearnerConfig& cfg);

  Permutation choose(Rng& rng) override;
  void observe(const std::vector<uint8_t>& bits) override;
  long long traced_id() const override;

  const ReducedGame& reduced() const { return rg_; }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  double v_bound() const { return v_; }
  const std::vector<double>& last_p() const { return p_; }
  const std::vector<double>& last_p_tilde() const { return p_tilde_; }
  const std::vector<std::vector<double>>& cum_z() const { return cum_z_; }
  double max_residual() const { return max_residual_; }

 private:
  LearnerConfig cfg_;
  ReducedGame rg_;
  double v_ = 1;
  double eta_ = 0, gamma_ = 0;
  int nclasses_ = 0, num_actions_ = 0;
  std::vector<std::vector<double>> cum_z_;  // class x class
  std::vector<double> pi_block_;            // stationary over classes
  std::vector<double> p_tilde_, p_;         // over reduced actions
  std::vector<double> inv_class_sum_;       // scratch: sum of 1/P over a class
  int last_action_ = -1;
  double max_residual_ = 0;
};

} // namespace topk
