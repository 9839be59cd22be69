#include "topk/cli.hpp"

#include "topk/game.hpp"
#include "topk/harness.hpp"
#include "topk/nw2.hpp"
#include "topk/observability.hpp"
#include "topk/pn_reduction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topk {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

MeasureSpec make_measure(const std::string& name, int n) {
  MeasureKind kind = measure_kind_from_name(name);
  if (kind == MeasureKind::NegPn) {
    if (n < 1) throw std::invalid_argument("--n: measure pn needs a positive cutoff");
    return MeasureSpec::neg_pn(n);
  }
  if (n != 0) throw std::invalid_argument("--n: only measure pn takes a cutoff");
  switch (kind) {
    case MeasureKind::PairwiseLoss: return MeasureSpec::pairwise_loss();
    case MeasureKind::SumLoss: return MeasureSpec::sum_loss();
    case MeasureKind::NegDcg: return MeasureSpec::neg_dcg();
    default: break;
  }
  throw std::invalid_argument("--measure: unhandled measure '" + name + "'");
}

std::string base_name(const MeasureSpec& measure, int m, int k) {
  std::string s = measure.name() + "_m" + std::to_string(m);
  if (measure.kind == MeasureKind::NegPn) s += "_n" + std::to_string(measure.n);
  s += "_k" + std::to_string(k);
  return s;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out.empty() ? std::string(".") : out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

json measure_json(const MeasureSpec& measure) {
  return {{"dcg_bits", measure.dcg_fixed_point_bits},
          {"kind", measure.name()},
          {"n", measure.n}};
}

json pair_list(const std::vector<std::pair<int, int>>& pairs) {
  json arr = json::array();
  for (const auto& [i, j] : pairs) arr.push_back({i, j});
  return arr;
}

json certificate_json(const ObservabilityCertificate& cert) {
  json c;
  c["i"] = cert.i;
  c["j"] = cert.j;
  c["kind"] = cert.kind == ObsKind::Local ? "local" : "global";
  json coeffs = json::object();
  for (const auto& [action, vec] : cert.coefficients) {
    json arr = json::array();
    for (const Rat& r : vec) arr.push_back(rat_str(r));
    coeffs[std::to_string(action)] = arr;
  }
  c["coefficients"] = coeffs;
  return c;
}

void dump_matrices(const fs::path& dir, const Game& g, const std::string& base,
                   const std::string& fingerprint) {
  int n_out = g.num_outcomes();
  auto header = [&](const char* label) {
    std::string h = "# config " + fingerprint + "\n" + label;
    for (int j = 0; j < n_out; ++j) h += "," + g.outcome(j).str();
    return h + "\n";
  };
  std::string text = header("action");
  for (int i = 0; i < g.num_actions(); ++i) {
    text += std::to_string(i);
    for (int j = 0; j < n_out; ++j) text += "," + rat_str(g.loss[i][j]);
    text += "\n";
  }
  write_text(dir / ("matrix_L_" + base + ".csv"), text);

  text = header("action");
  for (int i = 0; i < g.num_actions(); ++i) {
    text += std::to_string(i);
    for (int j = 0; j < n_out; ++j) text += "," + symbol_str(g.feedback[i][j], g.k);
    text += "\n";
  }
  write_text(dir / ("matrix_H_" + base + ".csv"), text);

  for (int i = 0; i < g.num_actions(); ++i) {
    auto s = signal_matrix(g, i);
    text = header("symbol");
    for (int row = 0; row < g.num_symbols(); ++row) {
      text += symbol_str(row, g.k);
      for (int j = 0; j < n_out; ++j) text += s[row][j] ? ",1" : ",0";
      text += "\n";
    }
    write_text(dir / ("matrix_S" + std::to_string(i) + "_" + base + ".csv"), text);
  }
}

struct AnalyzeOpts {
  std::string measure;
  int m = 0, n = 0, k = 1;
  bool exact_geometry = false;
  bool dump = false;
  int threads = 1;
  std::string out = ".";
};

int run_analyze(const AnalyzeOpts& o) {
  MeasureSpec measure = make_measure(o.measure, o.n);
  Game g = build_game(measure, o.m, o.k);
  AnalysisReport rep = analyze_game(g, o.exact_geometry, o.threads);

  json config;
  config["exact_geometry"] = o.exact_geometry;
  config["k"] = o.k;
  config["m"] = o.m;
  config["measure"] = measure_json(measure);
  config["subcommand"] = "analyze";
  std::string fingerprint = config.dump();

  fs::path dir = prepare_out(o.out);
  std::string base = base_name(measure, o.m, o.k);

  std::vector<std::string> cert_files;
  if (!rep.local_certificates.empty()) {
    json certs;
    certs["config"] = config;
    json arr = json::array();
    for (const auto& c : rep.local_certificates) arr.push_back(certificate_json(c));
    certs["pairs"] = arr;
    std::string fname = "certificates_" + base + ".json";
    write_text(dir / fname, certs.dump(2) + "\n");
    cert_files.push_back(fname);
  }
  if (o.dump) dump_matrices(dir, g, base, fingerprint);

  json report;
  report["config"] = config;
  report["measure"] = measure.name();
  report["m"] = o.m;
  report["k"] = o.k;
  report["regime"] = regime_name(rep.regime);
  report["pareto_count"] = rep.pareto_count;
  report["duplicate_group_sizes"] = rep.duplicate_group_sizes;
  report["neighbor_count"] = rep.neighbors.size();
  report["failing_pairs"] = pair_list(rep.failing_pairs);
  report["globally_observable"] = rep.globally_observable;
  report["locally_observable"] = rep.locally_observable;
  report["certificate_files"] = cert_files;
  write_text(dir / ("analysis_" + base + ".json"), report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct CertifyOpts {
  std::string measure;
  int m = 0, n = 0, k = 1;
  bool dump = false;
  int threads = 1;
  std::string out = ".";
};

int run_certify_pn(const CertifyOpts& o) {
  ReducedGame rg = build_reduced_game(o.m, o.n);
  auto tables = build_all_v_tables(rg);
  GapReport gaps = gap_report(rg);

  json config;
  config["m"] = o.m;
  config["measure"] = measure_json(MeasureSpec::neg_pn(o.n));
  config["subcommand"] = "certify";
  std::string fingerprint = config.dump();

  json doc;
  doc["config"] = config;
  doc["m"] = o.m;
  doc["n"] = o.n;
  json classes = json::array();
  for (const auto& cls : rg.classes) classes.push_back(cls.top_set);
  doc["classes"] = classes;
  doc["V"] = rat_str(compute_V(tables));
  doc["min_gap"] = rat_str(gaps.min_gap);
  doc["one_over_eps_g"] = rat_str(gaps.one_over_eps_g);
  json pairs = json::array();
  for (const auto& vt : tables) {
    json p;
    p["class_c"] = vt.class_c;
    p["class_d"] = vt.class_d;
    auto sw = rg.swap_pair(vt.class_c, vt.class_d);
    p["swap_pair"] = {sw.first, sw.second};
    json entries = json::array();
    for (const auto& [action, coeffs] : vt.support) {
      json e;
      e["top_object"] = rg.actions[action].top_object;
      e["class"] = rg.actions[action].class_index;
      e["coeff_s0"] = rat_str(coeffs.first);
      e["coeff_s1"] = rat_str(coeffs.second);
      entries.push_back(e);
    }
    p["entries"] = entries;
    pairs.push_back(p);
  }
  doc["pairs"] = pairs;

  fs::path dir = prepare_out(o.out);
  write_text(dir / ("v_tables_m" + std::to_string(o.m) + "_n" + std::to_string(o.n) + ".json"),
             doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_certify(const CertifyOpts& o) {
  MeasureSpec measure = make_measure(o.measure, o.n);
  if (measure.kind == MeasureKind::NegPn && !o.dump) return run_certify_pn(o);

  Game g = build_game(measure, o.m, o.k);
  json config;
  config["k"] = o.k;
  config["m"] = o.m;
  config["measure"] = measure_json(measure);
  config["subcommand"] = "certify";
  std::string fingerprint = config.dump();

  fs::path dir = prepare_out(o.out);
  std::string base = base_name(measure, o.m, o.k);
  if (o.dump) dump_matrices(dir, g, base, fingerprint);
  if (measure.kind == MeasureKind::NegPn) return run_certify_pn(o);

  AnalysisReport rep = analyze_game(g, false, o.threads);
  json doc;
  doc["config"] = config;
  doc["regime"] = regime_name(rep.regime);
  doc["globally_observable"] = rep.globally_observable;
  doc["locally_observable"] = rep.locally_observable;
  json lp = json::array();
  for (const auto& c : rep.local_certificates) lp.push_back(certificate_json(c));
  doc["local_pairs"] = lp;
  doc["failing_pairs"] = pair_list(rep.failing_pairs);
  json gp = json::array();
  for (const auto& [i, j] : rep.failing_pairs) {
    auto cert = check_observability(g, i, j, ObsKind::Global);
    if (cert) gp.push_back(certificate_json(*cert));
  }
  doc["global_pairs_for_failing"] = gp;
  write_text(dir / ("certificates_" + base + ".json"), doc.dump(2) + "\n");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

AdversarySpec parse_adversary(const std::string& arg, int m) {
  if (arg == "uniform" || arg == "gap" || arg == "hard-sl") return AdversarySpec::from_preset(arg);
  std::ifstream f(arg, std::ios::binary);
  if (!f)
    throw std::invalid_argument("--adversary: '" + arg +
                                "' is neither a preset (uniform|gap|hard-sl) nor a readable file");
  try {
    json j = json::parse(f);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "iid") return AdversarySpec::iid(j.at("p").get<std::vector<double>>());
    if (kind == "switching")
      return AdversarySpec::switching(j.at("p").get<std::vector<double>>(),
                                      j.at("p2").get<std::vector<double>>(),
                                      j.at("switch_round").get<long long>());
    if (kind == "fixed") {
      std::vector<RelevanceVector> seq;
      for (const auto& row : j.at("rounds")) {
        RelevanceVector rv;
        rv.m = m;
        for (const auto& bit : row) {
          int b = bit.get<int>();
          if (b != 0 && b != 1) throw std::invalid_argument("relevance bits must be 0 or 1");
          rv.bits.push_back(static_cast<uint8_t>(b));
        }
        if (static_cast<int>(rv.bits.size()) != m)
          throw std::invalid_argument("each round needs exactly m = " + std::to_string(m) +
                                      " bits");
        seq.push_back(std::move(rv));
      }
      return AdversarySpec::fixed(std::move(seq));
    }
    throw std::invalid_argument("kind must be iid|switching|fixed");
  } catch (const json::exception& e) {
    throw std::invalid_argument("--adversary: bad spec file '" + arg + "': " + e.what());
  }
}

struct RunOpts {
  std::string measure;
  int m = 0, n = 0, k = 1;
  std::string learner = "nw2";
  long long horizon = 0;
  uint64_t seed = 1;
  std::string adversary = "uniform";
  double eta = 0, gamma = 0;
  long long explore_rounds = 0;
  std::string out = ".";
  std::string format = "csv";
};

int run_run(const RunOpts& o) {
  MeasureSpec measure = make_measure(o.measure, o.n);
  if (o.learner == "nw2" && o.k != 1)
    throw std::invalid_argument("--k: learner nw2 plays the top-1 feedback reduction; use --k 1");
  AdversarySpec adv = parse_adversary(o.adversary, o.m);

  SweepConfig lc;
  lc.measure = measure;
  lc.m = o.m;
  lc.k = o.k;
  lc.learner = o.learner;
  lc.eta = o.eta;
  lc.gamma = o.gamma;
  lc.explore_rounds = o.explore_rounds;

  auto outcomes = generate_outcomes(adv, o.m, o.horizon, derive_seed(o.seed, 0, 0));
  auto learner = make_learner(lc, o.horizon);
  Rng rng(derive_seed(o.seed, 0, 1));
  RegretTrace trace = play_game(*learner, measure, o.m, o.k, outcomes, rng);

  json config;
  config["adversary"] = json::parse(adversary_fingerprint(adv));
  config["eta"] = o.eta;
  config["explore_rounds"] = o.explore_rounds;
  config["gamma"] = o.gamma;
  config["horizon"] = o.horizon;
  config["k"] = o.k;
  config["learner"] = o.learner;
  config["m"] = o.m;
  config["measure"] = measure_json(measure);
  config["seed"] = o.seed;
  config["subcommand"] = "run";
  trace.config_fingerprint = config.dump();

  fs::path dir = prepare_out(o.out);
  std::string fname = "trace_" + o.learner + "_" + base_name(measure, o.m, o.k) + "_T" +
                      std::to_string(o.horizon) + "_seed" + std::to_string(o.seed);
  fs::path path;
  if (o.format == "json") {
    path = dir / (fname + ".json");
    json doc;
    doc["config"] = config;
    json rows = json::array();
    for (const TraceRow& row : trace.rows)
      rows.push_back({{"t", row.t},
                      {"sampled_class", row.sampled_class},
                      {"realized_loss", row.realized_loss},
                      {"feedback_bit", row.feedback_bit},
                      {"cum_regret", row.cum_regret}});
    doc["rows"] = rows;
    write_text(path, doc.dump(2) + "\n");
  } else {
    path = dir / (fname + ".csv");
    write_trace_csv(path.string(), trace);
  }
  std::cout << "wrote " << path.string() << " (" << trace.rows.size()
            << " rounds, final cumulative regret " << format_double(trace.final_regret())
            << ")\n";
  return 0;
}

struct SweepOpts {
  std::string measure;
  int m = 0, n = 0, k = 1;
  std::string learner = "nw2";
  std::vector<long long> grid;
  int reps = 10;
  uint64_t seed = 1;
  std::string adversary = "uniform";
  double eta = 0, gamma = 0;
  long long explore_rounds = 0;
  int threads = 1;
  std::string out = ".";
  std::string format = "csv";
};

int run_sweep_cmd(const SweepOpts& o) {
  MeasureSpec measure = make_measure(o.measure, o.n);
  if (o.learner == "nw2" && o.k != 1)
    throw std::invalid_argument("--k: learner nw2 plays the top-1 feedback reduction; use --k 1");

  SweepConfig cfg;
  cfg.measure = measure;
  cfg.m = o.m;
  cfg.k = o.k;
  cfg.learner = o.learner;
  cfg.grid = o.grid;
  cfg.reps = o.reps;
  cfg.master_seed = o.seed;
  cfg.adversary = parse_adversary(o.adversary, o.m);
  cfg.eta = o.eta;
  cfg.gamma = o.gamma;
  cfg.explore_rounds = o.explore_rounds;
  cfg.threads = o.threads;

  SweepResult res = run_sweep(cfg);

  json summary;
  summary["config"] = json::parse(res.config_fingerprint);
  summary["slope"] = res.fit.slope;
  summary["intercept"] = res.fit.intercept;
  summary["r2"] = res.fit.r2;
  summary["excluded"] = res.fit.excluded;

  fs::path dir = prepare_out(o.out);
  std::string base = "sweep_" + o.learner + "_" + base_name(measure, o.m, o.k);
  if (o.format == "json") {
    json doc;
    doc["config"] = summary["config"];
    json points = json::array();
    for (const SweepPoint& pt : res.points)
      points.push_back({{"T", pt.T},
                        {"mean_regret", pt.mean_regret},
                        {"stderr", pt.stderr_mean},
                        {"reps", pt.reps}});
    doc["points"] = points;
    write_text(dir / (base + ".json"), doc.dump(2) + "\n");
  } else {
    write_sweep_csv((dir / (base + ".csv")).string(), res);
  }
  write_text(dir / (base + "_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Partial-monitoring analysis and learners for online ranking with top-k feedback"};
  app.require_subcommand(1);

  AnalyzeOpts an;
  auto* analyze = app.add_subcommand(
      "analyze", "Cell structure, neighbors, observability, and minimax regime of a game");
  analyze->add_option("--measure", an.measure, "Loss measure: pl|sl|dcg|pn")->required();
  analyze->add_option("--m", an.m, "Number of objects")->required()->check(CLI::Range(1, 6));
  analyze->add_option("--n", an.n, "Precision cutoff (measure pn only)")->check(CLI::Range(1, 6));
  analyze->add_option("--k", an.k, "Feedback depth (top-k relevance bits)")
      ->check(CLI::Range(1, 6));
  analyze->add_flag("--exact-geometry", an.exact_geometry,
                    "Re-derive the combinatorial structure from LP geometry");
  analyze->add_flag("--dump-matrices", an.dump, "Also write loss/feedback/signal matrices as CSV");
  analyze->add_option("--threads", an.threads, "Worker threads for pair checks")
      ->check(CLI::Range(0, 1024));
  analyze->add_option("--out", an.out, "Output directory");

  CertifyOpts ce;
  auto* certify = app.add_subcommand(
      "certify", "Estimator tables (pn) or observability certificates (pl|sl|dcg)");
  certify->add_option("--measure", ce.measure, "Loss measure: pl|sl|dcg|pn")->required();
  certify->add_option("--m", ce.m, "Number of objects")->required()->check(CLI::Range(1, 8));
  certify->add_option("--n", ce.n, "Precision cutoff (measure pn only)")->check(CLI::Range(1, 8));
  certify->add_option("--k", ce.k, "Feedback depth (pl|sl|dcg certificates)")
      ->check(CLI::Range(1, 6));
  certify->add_flag("--dump-matrices", ce.dump, "Also write loss/feedback/signal matrices as CSV");
  certify->add_option("--threads", ce.threads, "Worker threads for pair checks")
      ->check(CLI::Range(0, 1024));
  certify->add_option("--out", ce.out, "Output directory");

  RunOpts ru;
  auto* run = app.add_subcommand("run", "Play one learner against one adversary, write a trace");
  run->add_option("--measure", ru.measure, "Loss measure: pl|sl|dcg|pn")->required();
  run->add_option("--m", ru.m, "Number of objects")->required()->check(CLI::Range(1, 8));
  run->add_option("--n", ru.n, "Precision cutoff (measure pn only)")->check(CLI::Range(1, 8));
  run->add_option("--k", ru.k, "Feedback depth");
  run->add_option("--learner", ru.learner, "nw2|explore_exploit|full_info_ftl");
  run->add_option("--horizon", ru.horizon, "Number of rounds T")
      ->required()
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", ru.seed, "Master seed");
  run->add_option("--adversary", ru.adversary, "Preset (uniform|gap|hard-sl) or JSON spec file");
  run->add_option("--eta", ru.eta, "Learning-rate override (nw2)")->check(CLI::NonNegativeNumber);
  run->add_option("--gamma", ru.gamma, "Exploration-mix override (nw2)")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--explore-rounds", ru.explore_rounds,
                  "Exploration budget override (explore_exploit)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--out", ru.out, "Output directory");
  run->add_option("--format", ru.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "Mean final regret across a horizon grid plus a "
                                            "log-log slope fit");
  sweep->add_option("--measure", sw.measure, "Loss measure: pl|sl|dcg|pn")->required();
  sweep->add_option("--m", sw.m, "Number of objects")->required()->check(CLI::Range(1, 8));
  sweep->add_option("--n", sw.n, "Precision cutoff (measure pn only)")->check(CLI::Range(1, 8));
  sweep->add_option("--k", sw.k, "Feedback depth");
  sweep->add_option("--learner", sw.learner, "nw2|explore_exploit|full_info_ftl");
  sweep->add_option("--grid", sw.grid, "Comma-separated horizons (default 2^10..2^16)")
      ->delimiter(',');
  sweep->add_option("--reps", sw.reps, "Repetitions per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--adversary", sw.adversary, "Preset (uniform|gap|hard-sl) or JSON spec file");
  sweep->add_option("--eta", sw.eta, "Learning-rate override (nw2)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--gamma", sw.gamma, "Exploration-mix override (nw2)")
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--explore-rounds", sw.explore_rounds,
                    "Exploration budget override (explore_exploit)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--threads", sw.threads, "Worker threads (0 = hardware)")
      ->check(CLI::Range(0, 1024));
  sweep->add_option("--out", sw.out, "Output directory");
  sweep->add_option("--format", sw.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(analyze)) return run_analyze(an);
    if (app.got_subcommand(certify)) return run_certify(ce);
    if (app.got_subcommand(run)) return run_run(ru);
    if (app.got_subcommand(sweep)) return run_sweep_cmd(sw);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace topk
