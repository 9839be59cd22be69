#include "topk/nw2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace topk {

namespace {

// Representative-block form of the sampling matrix: one row per class,
// exponential weights over the class's neighborhood plus itself.
std::vector<std::vector<double>> q_class_block(const ReducedGame& rg,
                                               const std::vector<std::vector<double>>& cum_z,
                                               double eta) {
  int nc = rg.num_classes();
  std::vector<std::vector<double>> q(nc, std::vector<double>(nc, 0.0));
  std::vector<int> hood;
  for (int k = 0; k < nc; ++k) {
    hood.clear();
    hood.push_back(k);
    for (const auto& nb : rg.class_neighbors[k]) hood.push_back(nb.class_index);
    double best = -std::numeric_limits<double>::infinity();
    for (int a : hood) best = std::max(best, -eta * cum_z[k][a]);
    double total = 0;
    for (int a : hood) {
      double w = std::exp(-eta * cum_z[k][a] - best);
      q[k][a] = w;
      total += w;
    }
    for (int a : hood) q[k][a] /= total;
  }
  return q;
}

double stationary_residual(const std::vector<double>& pi,
                           const std::vector<std::vector<double>>& q) {
  size_t n = pi.size();
  double worst = 0;
  for (size_t j = 0; j < n; ++j) {
    double flow = 0;
    for (size_t i = 0; i < n; ++i) flow += pi[i] * q[i][j];
    worst = std::max(worst, std::fabs(flow - pi[j]));
  }
  return worst;
}

bool direct_stationary_solve(const std::vector<std::vector<double>>& q, std::vector<double>& pi) {
  size_t n = q.size();
  // (Q^T - I) x = 0 with the last equation replaced by sum(x) = 1.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (size_t r = 0; r + 1 < n; ++r) {
    for (size_t c = 0; c < n; ++c) a[r][c] = q[c][r] - (r == c ? 1.0 : 0.0);
  }
  for (size_t c = 0; c < n; ++c) a[n - 1][c] = 1.0;
  a[n - 1][n] = 1.0;

  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0) return false;
    std::swap(a[pivot], a[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      double f = a[r][col] / a[col][col];
      for (size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  pi.assign(n, 0.0);
  double total = 0;
  for (size_t r = 0; r < n; ++r) {
    double x = a[r][n] / a[r][r];
    if (!std::isfinite(x)) return false;
    pi[r] = std::max(x, 0.0);
    total += pi[r];
  }
  if (!(total > 0)) return false;
  for (auto& x : pi) x /= total;
  return true;
}

} // namespace

std::vector<std::vector<double>> compute_q(const ReducedGame& rg,
                                           const std::vector<std::vector<double>>& cum_z,
                                           double eta) {
  auto block = q_class_block(rg, cum_z, eta);
  int ka = rg.num_actions(), nc = rg.num_classes();
  std::vector<std::vector<double>> q(ka, std::vector<double>(ka, 0.0));
  for (int c = 0; c < nc; ++c) {
    int rep = rg.representatives[c];
    for (int d = 0; d < nc; ++d)
      if (block[c][d] != 0) q[rep][rg.representatives[d]] = block[c][d];
  }
  for (int dup : rg.duplicates)
    for (int c = 0; c < nc; ++c) q[dup][rg.representatives[c]] = 1.0 / nc;
  return q;
}

StationaryResult stationary_distribution(const std::vector<std::vector<double>>& q) {
  StationaryResult out;
  size_t n = q.size();
  if (direct_stationary_solve(q, out.pi)) {
    out.residual = stationary_residual(out.pi, q);
    if (out.residual <= 1e-12) return out;
  }
  // Power iteration fallback.
  out.power_fallback = true;
  out.pi.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (out.iterations = 1; out.iterations <= 1000000; ++out.iterations) {
    for (size_t j = 0; j < n; ++j) {
      double flow = 0;
      for (size_t i = 0; i < n; ++i) flow += out.pi[i] * q[i][j];
      next[j] = flow;
    }
    double total = 0;
    for (double x : next) total += x;
    for (auto& x : next) x /= total;
    out.pi.swap(next);
    out.residual = stationary_residual(out.pi, q);
    if (out.residual <= 1e-12) return out;
  }
  std::ostringstream msg;
  msg << "stationary distribution did not converge: residual " << out.residual << " after "
      << out.iterations - 1 << " iterations on a " << n << "-state chain";
  throw std::runtime_error(msg.str());
}

Nw2Learner::Nw2Learner(const LearnerConfig& cfg) : cfg_(cfg), rg_(build_reduced_game(cfg.m, cfg.n)) {
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be positive");
  nclasses_ = rg_.num_classes();
  num_actions_ = rg_.num_actions();
  v_ = rat_to_double(compute_V(build_all_v_tables(rg_)));
  double k = num_actions_;
  eta_ = cfg.eta > 0 ? cfg.eta : (1.0 / v_) * std::sqrt(std::log(k) / static_cast<double>(cfg.horizon));
  gamma_ = cfg.gamma > 0 ? cfg.gamma : eta_ * k * v_;
  if (cfg.eta < 0 || cfg.gamma < 0) throw std::invalid_argument("eta and gamma must be positive");
  if (gamma_ >= 1) {
    long long advised =
        static_cast<long long>(std::ceil(k * v_ * k * v_ * std::log(k)));
    std::ostringstream msg;
    msg << "mixing weight gamma = " << gamma_ << " >= 1; raise the horizon to at least "
        << advised << " rounds or pass an explicit gamma below 1";
    throw GammaError(msg.str(), advised);
  }
  cum_z_.assign(nclasses_, std::vector<double>(nclasses_, 0.0));
  inv_class_sum_.assign(nclasses_, 0.0);
}

Permutation Nw2Learner::choose(Rng& rng) {
  auto block = q_class_block(rg_, cum_z_, eta_);
  StationaryResult st = stationary_distribution(block);
  max_residual_ = std::max(max_residual_, st.residual);
  pi_block_ = std::move(st.pi);

  p_tilde_.assign(num_actions_, 0.0);
  for (int c = 0; c < nclasses_; ++c) p_tilde_[rg_.representatives[c]] = pi_block_[c];
  p_.resize(num_actions_);
  double mix = gamma_ / static_cast<double>(num_actions_);
  for (int a = 0; a < num_actions_; ++a) p_[a] = (1 - gamma_) * p_tilde_[a] + mix;

  last_action_ = sample_discrete(rng, p_);
  return rg_.action_permutation(last_action_);
}

void Nw2Learner::observe(const std::vector<uint8_t>& bits) {
  if (last_action_ < 0) throw std::logic_error("observe before choose");
  int phi = bits.at(0);

  for (int c = 0; c < nclasses_; ++c) {
    double s = 0;
    for (int a = c * rg_.n; a < (c + 1) * rg_.n; ++a) s += 1.0 / p_[a];
    inv_class_sum_[c] = s;
  }
  double ev2 = eta_ * v_ * v_;
  for (int k = 0; k < nclasses_; ++k) {
    double scale = ev2 * pi_block_[k] * pi_block_[k];
    cum_z_[k][k] -= scale * inv_class_sum_[k];
    for (const auto& nb : rg_.class_neighbors[k])
      cum_z_[k][nb.class_index] -= scale * (inv_class_sum_[k] + inv_class_sum_[nb.class_index]);
  }

  if (phi == 1) {
    int ci = rg_.actions[last_action_].class_index;
    int top = rg_.actions[last_action_].top_object;
    double inv_p = 1.0 / p_[last_action_];
    for (const auto& nb : rg_.class_neighbors[ci]) {
      if (nb.swap_here != top) continue;
      int d = nb.class_index;
      cum_z_[d][ci] -= pi_block_[d] * inv_p;
      cum_z_[ci][d] += pi_block_[ci] * inv_p;
    }
  }
}

long long Nw2Learner::traced_id() const {
  return last_action_ < 0 ? -1 : rg_.actions[last_action_].class_index;
}

} // namespace topk
