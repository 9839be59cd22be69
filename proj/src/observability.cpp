#include "topk/observability.hpp"

#include "topk/linalg.hpp"
#include "topk/simplex_lp.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace topk {

namespace {

RatVec loss_diff(const Game& g, int i, int j) {
  int n = g.num_outcomes();
  RatVec d(n);
  for (int o = 0; o < n; ++o) d[o] = g.loss[i][o] - g.loss[j][o];
  return d;
}

bool same_loss(const Game& g, int i, int j) { return g.loss[i] == g.loss[j]; }

std::vector<int> top_set(const Permutation& sigma, int n) {
  std::vector<int> s;
  for (int r = 1; r <= n; ++r) s.push_back(sigma.object_at(r));
  std::sort(s.begin(), s.end());
  return s;
}

struct SlackLp {
  bool feasible = false;
  Rat t;
  RatVec p;
};

// maximize t over {p in simplex, pinned rows = 0, g.p <= -t, p_c >= t}.
// t* > 0 certifies a point where every non-pinned constraint is strict.
SlackLp max_slack_lp(int n, const RatMat& pinned, const RatMat& strict_rows) {
  LpProblem lp;
  lp.num_vars = n + 1;
  lp.objective.assign(n + 1, Rat(0));
  lp.objective[n] = 1;

  LpRow simplex_row;
  simplex_row.a.assign(n + 1, Rat(1));
  simplex_row.a[n] = 0;
  simplex_row.rel = LpRel::EQ;
  simplex_row.b = 1;
  lp.rows.push_back(simplex_row);

  for (const auto& v : pinned) {
    LpRow row;
    row.a = v;
    row.a.push_back(Rat(0));
    row.rel = LpRel::EQ;
    row.b = 0;
    lp.rows.push_back(row);
  }
  for (const auto& gvec : strict_rows) {
    LpRow row;
    row.a = gvec;
    row.a.push_back(Rat(1));
    row.rel = LpRel::LE;
    row.b = 0;
    lp.rows.push_back(row);
  }
  for (int c = 0; c < n; ++c) {
    LpRow row;
    row.a.assign(n + 1, Rat(0));
    row.a[c] = -1;
    row.a[n] = 1;
    row.rel = LpRel::LE;
    row.b = 0;
    lp.rows.push_back(row);
  }

  LpResult res = solve_lp(lp);
  SlackLp out;
  if (res.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.t = res.value;
  out.p.assign(res.x.begin(), res.x.begin() + n);
  return out;
}

// max of -g.p over {p in simplex, pinned rows = 0, all cell rows <= 0}.
// Zero means the row g.p <= 0 holds with equality across the whole cell.
bool row_is_implicit(int n, const RatMat& pinned, const RatMat& cell_rows, const RatVec& g) {
  LpProblem lp;
  lp.num_vars = n;
  lp.objective.resize(n);
  for (int c = 0; c < n; ++c) lp.objective[c] = -g[c];

  LpRow simplex_row;
  simplex_row.a.assign(n, Rat(1));
  simplex_row.rel = LpRel::EQ;
  simplex_row.b = 1;
  lp.rows.push_back(simplex_row);
  for (const auto& v : pinned) lp.rows.push_back({v, LpRel::EQ, Rat(0)});
  for (const auto& r : cell_rows) lp.rows.push_back({r, LpRel::LE, Rat(0)});

  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) throw std::logic_error("implicit-row probe infeasible");
  return res.value == 0;
}

// Cell rows for action i, zero rows (duplicates) dropped.
RatMat nonzero_cell_rows(const Game& g, int i) {
  RatMat rows;
  for (int e = 0; e < g.num_actions(); ++e) {
    if (e == i || same_loss(g, i, e)) continue;
    rows.push_back(loss_diff(g, i, e));
  }
  return rows;
}

// t* > 0 for the pair slack LP, meaning dim(C_i ∩ C_j) = 2^m − 2 for a
// distinct-loss pair. Skips the implicit-equality scan that computing the
// exact dimension of a thinner intersection would need.
bool pair_cell_full_dim(const Game& g, int i, int j) {
  RatMat pinned{loss_diff(g, i, j)};
  RatMat strict;
  for (const auto& r : nonzero_cell_rows(g, i))
    if (!is_scalar_multiple(pinned[0], r)) strict.push_back(r);
  SlackLp lp = max_slack_lp(g.num_outcomes(), pinned, strict);
  return lp.feasible && lp.t > 0;
}

int polytope_dimension(int n, const RatMat& pinned, const RatMat& cell_rows) {
  RatMat strict;
  for (const auto& r : cell_rows) {
    bool degenerate = false;
    for (const auto& v : pinned)
      if (is_scalar_multiple(v, r)) degenerate = true;
    if (!degenerate) strict.push_back(r);
  }
  SlackLp lp = max_slack_lp(n, pinned, strict);
  if (!lp.feasible) return -1;
  int ambient = n - 1 - static_cast<int>(pinned.size());
  if (lp.t > 0) return ambient;

  RatMat eq;
  eq.push_back(RatVec(n, Rat(1)));
  for (const auto& v : pinned) eq.push_back(v);
  for (const auto& r : strict)
    if (row_is_implicit(n, pinned, cell_rows, r)) eq.push_back(r);
  for (int c = 0; c < n; ++c) {
    RatVec coord(n, Rat(0));
    coord[c] = -1;
    if (row_is_implicit(n, pinned, cell_rows, coord)) eq.push_back(coord);
  }
  return n - rat_rank(eq);
}

struct ColumnIndex {
  RatMat matrix;                          // num_outcomes x num_distinct
  std::vector<std::pair<int, int>> owner; // first (action, symbol) per column
};

// Distinct signal columns over the given actions. Column c of an action's
// transposed signal matrix is the outcome indicator of symbol c.
ColumnIndex distinct_columns(const Game& g, const std::vector<int>& scope) {
  int n = g.num_outcomes();
  ColumnIndex idx;
  std::map<std::vector<uint8_t>, int> seen;
  std::vector<std::vector<uint8_t>> cols;
  for (int a : scope) {
    for (int s = 0; s < g.num_symbols(); ++s) {
      std::vector<uint8_t> col(n, 0);
      bool any = false;
      for (int o = 0; o < n; ++o) {
        if (g.feedback[a][o] == s) {
          col[o] = 1;
          any = true;
        }
      }
      if (!any) continue;
      if (seen.emplace(col, static_cast<int>(cols.size())).second) {
        cols.push_back(col);
        idx.owner.emplace_back(a, s);
      }
    }
  }
  idx.matrix.assign(n, RatVec(cols.size(), Rat(0)));
  for (size_t c = 0; c < cols.size(); ++c)
    for (int o = 0; o < n; ++o)
      if (cols[c][o]) idx.matrix[o][c] = 1;
  return idx;
}

void verify_certificate(const ObservabilityCertificate& cert, const Game& g) {
  RatVec d = loss_diff(g, cert.i, cert.j);
  for (int o = 0; o < g.num_outcomes(); ++o) {
    Rat sum = 0;
    for (const auto& [a, weights] : cert.coefficients) sum += weights[g.feedback[a][o]];
    if (sum != d[o]) throw std::logic_error("certificate residual is nonzero");
  }
}

// Incremental echelon basis for span membership queries.
struct SpanBasis {
  std::vector<RatVec> rows;
  std::vector<size_t> pivots;

  void reduce(RatVec& v) const {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (v[pivots[i]] == 0) continue;
      Rat f = v[pivots[i]] / rows[i][pivots[i]];
      for (size_t j = 0; j < v.size(); ++j)
        if (rows[i][j] != 0) v[j] -= f * rows[i][j];
    }
  }

  void insert(RatVec v) {
    reduce(v);
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0) {
        rows.push_back(std::move(v));
        pivots.push_back(j);
        return;
      }
    }
  }

  bool contains(RatVec v) const {
    reduce(v);
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
};

bool all_pairs_globally_observable(const Game& g) {
  std::vector<int> scope(g.num_actions());
  for (int a = 0; a < g.num_actions(); ++a) scope[a] = a;
  ColumnIndex idx = distinct_columns(g, scope);

  SpanBasis basis;
  for (size_t c = 0; c < idx.owner.size(); ++c) {
    RatVec col(g.num_outcomes());
    for (int o = 0; o < g.num_outcomes(); ++o) col[o] = idx.matrix[o][c];
    basis.insert(std::move(col));
  }
  // Differences against action 0 generate every pairwise difference.
  for (int a = 1; a < g.num_actions(); ++a)
    if (!basis.contains(loss_diff(g, a, 0))) return false;
  return true;
}

} // namespace

const char* action_label_name(ActionLabel label) {
  switch (label) {
    case ActionLabel::Dominated: return "dominated";
    case ActionLabel::Degenerate: return "degenerate";
    case ActionLabel::ParetoOptimal: return "pareto_optimal";
  }
  return "?";
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::Trivial: return "trivial";
    case Regime::Easy: return "easy";
    case Regime::Hard: return "hard";
    case Regime::Hopeless: return "hopeless";
  }
  return "?";
}

Rat EstimatorTable::at(int action, int symbol) const {
  auto it = v.find(action);
  if (it == v.end()) return Rat(0);
  return it->second.at(static_cast<size_t>(symbol));
}

RatMat cell_inequalities(const Game& g, int action_index) {
  RatMat rows;
  for (int e = 0; e < g.num_actions(); ++e) {
    if (e == action_index) continue;
    rows.push_back(loss_diff(g, action_index, e));
  }
  return rows;
}

CellDescription describe_cell(const Game& g, int action_index) {
  CellDescription cell;
  cell.action_index = action_index;
  cell.facet_inequalities = cell_inequalities(g, action_index);
  cell.dimension = cell_dimension(g, action_index);
  return cell;
}

int cell_dimension(const Game& g, int action_index) {
  return polytope_dimension(g.num_outcomes(), {}, nonzero_cell_rows(g, action_index));
}

int pair_cell_dimension(const Game& g, int i, int j) {
  if (same_loss(g, i, j)) return cell_dimension(g, i);
  RatMat pinned{loss_diff(g, i, j)};
  return polytope_dimension(g.num_outcomes(), pinned, nonzero_cell_rows(g, i));
}

std::optional<RatVec> pair_relint_point(const Game& g, int i, int j) {
  if (same_loss(g, i, j)) return std::nullopt;
  RatMat pinned{loss_diff(g, i, j)};
  RatMat strict;
  for (const auto& r : nonzero_cell_rows(g, i))
    if (!is_scalar_multiple(pinned[0], r)) strict.push_back(r);
  SlackLp lp = max_slack_lp(g.num_outcomes(), pinned, strict);
  if (!lp.feasible || lp.t == 0) return std::nullopt;
  return lp.p;
}

ActionClassification classify_actions(const Game& g, bool exact_geometry) {
  ActionClassification out;
  int ka = g.num_actions();
  out.labels.assign(ka, ActionLabel::ParetoOptimal);

  std::map<RatVec, int> group_of;
  for (int a = 0; a < ka; ++a) {
    auto [it, fresh] = group_of.emplace(g.loss[a], static_cast<int>(out.duplicate_groups.size()));
    if (fresh) out.duplicate_groups.emplace_back();
    out.duplicate_groups[it->second].push_back(a);
  }

  if (exact_geometry) {
    int full = g.num_outcomes() - 1;
    for (int a = 0; a < ka; ++a) {
      int dim = cell_dimension(g, a);
      if (dim < 0) out.labels[a] = ActionLabel::Dominated;
      else if (dim < full) out.labels[a] = ActionLabel::Degenerate;
    }
  }
  return out;
}

bool neighbors_closed_form(const Game& g, int i, int j) {
  if (i == j || same_loss(g, i, j)) return false;
  const Permutation& a = g.actions[i];
  const Permutation& b = g.actions[j];
  if (g.measure.kind == MeasureKind::NegPn) {
    std::vector<int> sa = top_set(a, g.measure.n), sb = top_set(b, g.measure.n);
    std::vector<int> extra;
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(extra));
    return extra.size() == 1;
  }
  // Remaining measures: neighbors are exactly the adjacent-rank swaps.
  int first = 0;
  for (int r = 1; r <= g.m; ++r) {
    if (a.object_at(r) != b.object_at(r)) {
      first = r;
      break;
    }
  }
  if (first == 0 || first == g.m) return false;
  if (a.object_at(first) != b.object_at(first + 1)) return false;
  if (a.object_at(first + 1) != b.object_at(first)) return false;
  for (int r = first + 2; r <= g.m; ++r)
    if (a.object_at(r) != b.object_at(r)) return false;
  return true;
}

std::vector<std::pair<int, int>> find_neighbors(const Game& g, bool exact_geometry, int threads) {
  int ka = g.num_actions();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < ka; ++i)
    for (int j = i + 1; j < ka; ++j) pairs.emplace_back(i, j);

  std::vector<uint8_t> keep(pairs.size(), 0);
  auto evaluate = [&](size_t idx) {
    auto [i, j] = pairs[idx];
    bool predicted = neighbors_closed_form(g, i, j);
    if (exact_geometry) {
      bool measured = same_loss(g, i, j) ? false : pair_cell_full_dim(g, i, j);
      if (measured != predicted)
        throw std::logic_error("neighbor predicate disagrees with the LP dimension");
    }
    keep[idx] = predicted ? 1 : 0;
  };

  int workers = std::max(1, threads);
  if (!exact_geometry || workers == 1 || pairs.size() <= 1) {
    for (size_t idx = 0; idx < pairs.size(); ++idx) evaluate(idx);
  } else {
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto work = [&]() {
      for (;;) {
        size_t idx = next.fetch_add(1);
        if (idx >= pairs.size()) return;
        try {
          evaluate(idx);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  std::vector<std::pair<int, int>> out;
  for (size_t idx = 0; idx < pairs.size(); ++idx)
    if (keep[idx]) out.push_back(pairs[idx]);
  return out;
}

std::vector<int> neighborhood_action_set(const Game& g, int i, int j, bool exact_geometry) {
  if (!neighbors_closed_form(g, i, j)) throw std::invalid_argument("actions are not neighbors");
  std::vector<int> expected;
  if (g.measure.kind == MeasureKind::NegPn) {
    for (int e = 0; e < g.num_actions(); ++e)
      if (same_loss(g, e, i) || same_loss(g, e, j)) expected.push_back(e);
  } else {
    expected = {std::min(i, j), std::max(i, j)};
  }
  if (!exact_geometry) return expected;

  auto point = pair_relint_point(g, i, j);
  if (!point) throw std::logic_error("neighboring pair has no relative-interior point");
  // The pair cell lies in exactly the cells whose actions are optimal at a
  // relative-interior point of it.
  Rat best = dot(g.loss[i], *point);
  std::vector<int> measured;
  for (int e = 0; e < g.num_actions(); ++e)
    if (dot(g.loss[e], *point) == best) measured.push_back(e);
  if (measured != expected)
    throw std::logic_error("neighborhood action set disagrees with the LP geometry");
  return measured;
}

std::optional<ObservabilityCertificate> check_observability(const Game& g, int i, int j,
                                                            ObsKind kind) {
  std::vector<int> scope;
  if (kind == ObsKind::Local) {
    scope = neighborhood_action_set(g, i, j);
  } else {
    scope.resize(g.num_actions());
    for (int a = 0; a < g.num_actions(); ++a) scope[a] = a;
  }

  ColumnIndex idx = distinct_columns(g, scope);
  auto x = solve_linear(idx.matrix, loss_diff(g, i, j));
  if (!x) return std::nullopt;

  ObservabilityCertificate cert;
  cert.i = i;
  cert.j = j;
  cert.kind = kind;
  for (size_t c = 0; c < idx.owner.size(); ++c) {
    if ((*x)[c] == 0) continue;
    auto [a, s] = idx.owner[c];
    auto [it, fresh] = cert.coefficients.emplace(a, RatVec());
    if (fresh) it->second.assign(g.num_symbols(), Rat(0));
    it->second[s] = (*x)[c];
  }
  verify_certificate(cert, g);
  return cert;
}

EstimatorTable certificate_to_function(const ObservabilityCertificate& cert, const Game& g) {
  verify_certificate(cert, g);
  EstimatorTable table;
  table.v = cert.coefficients;
  return table;
}

AnalysisReport analyze_game(const Game& g, bool exact_geometry, int threads) {
  AnalysisReport report;
  report.measure = g.measure;
  report.m = g.m;
  report.k = g.k;

  ActionClassification cls = classify_actions(g, exact_geometry);
  for (auto label : cls.labels)
    if (label == ActionLabel::ParetoOptimal) ++report.pareto_count;
  for (const auto& group : cls.duplicate_groups)
    report.duplicate_group_sizes.push_back(static_cast<int>(group.size()));

  report.neighbors = find_neighbors(g, exact_geometry, threads);

  size_t np = report.neighbors.size();
  std::vector<std::optional<ObservabilityCertificate>> certs(np);
  int workers = std::max(1, threads);
  if (workers == 1 || np <= 1) {
    for (size_t idx = 0; idx < np; ++idx) {
      auto [i, j] = report.neighbors[idx];
      certs[idx] = check_observability(g, i, j, ObsKind::Local);
    }
  } else {
    std::atomic<size_t> next{0};
    auto work = [&]() {
      for (;;) {
        size_t idx = next.fetch_add(1);
        if (idx >= np) return;
        auto [i, j] = report.neighbors[idx];
        certs[idx] = check_observability(g, i, j, ObsKind::Local);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (size_t idx = 0; idx < np; ++idx) {
    if (certs[idx]) report.local_certificates.push_back(std::move(*certs[idx]));
    else report.failing_pairs.push_back(report.neighbors[idx]);
  }
  report.locally_observable = report.failing_pairs.empty();
  report.globally_observable = all_pairs_globally_observable(g);

  int nondominated = 0;
  for (auto label : cls.labels)
    if (label != ActionLabel::Dominated) ++nondominated;
  if (nondominated == 1) report.regime = Regime::Trivial;
  else if (report.locally_observable) report.regime = Regime::Easy;
  else if (report.globally_observable) report.regime = Regime::Hard;
  else report.regime = Regime::Hopeless;
  return report;
}

Regime classify_game(const Game& g) { return analyze_game(g).regime; }

} // namespace topk
