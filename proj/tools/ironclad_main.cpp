// Command-line front end: closed-form analytics, consistency thresholds,
// adversarial network simulation, attack random walks, and preset sweeps.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "ironclad/analytics.hpp"
#include "ironclad/config.hpp"
#include "ironclad/errors.hpp"
#include "ironclad/semi_markov.hpp"
#include "ironclad/simulator.hpp"
#include "ironclad/walk.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ironclad;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("IRONCLAD_OUT_DIR")) return fs::path(dir) / p;
  return p;
}

std::ofstream open_out(const std::string& path) {
  const fs::path p = resolve_out(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p);
  if (!out) throw std::ios_base::failure("cannot write output file: " + p.string());
  return out;
}

struct AnalyzeRow {
  std::vector<std::pair<std::string, double>> fields;
  void add(const std::string& name, double value) { fields.emplace_back(name, value); }
};

AnalyzeRow analyze_point(const ProtocolParams& params, double epsilon) {
  params.validate();
  const DerivedRates r = derive_rates(params);
  const SemiMarkovModel m = embedded_chain(r, params.delta);

  AnalyzeRow row;
  row.add("p", params.p);
  row.add("rho", params.rho);
  row.add("delta", static_cast<double>(params.delta));
  row.add("q", params.q);
  row.add("theta", params.theta);
  row.add("p_h", r.p_h);
  row.add("p_a", r.p_a);
  row.add("q_h", r.q_h);
  row.add("q_H", r.q_H);
  row.add("q_a", r.q_a);
  row.add("q_A", r.q_A);
  row.add("w_bar", r.w_bar);
  for (int i = 0; i < 4; ++i) {
    row.add("prob_sigma" + std::to_string(i + 1), m.stats.prob[i]);
  }
  for (int i = 0; i < 4; ++i) {
    row.add("len_sigma" + std::to_string(i + 1), m.stats.exp_len[i]);
  }
  row.add("pi0", m.pi[0]);
  row.add("pi1", m.pi[1]);
  row.add("pi2", m.pi[2]);
  row.add("alpha", m.alpha);
  row.add("beta", adversary_weight_rate(r));
  row.add("gamma", gamma_margin(params));
  row.add("tolerance_ratio", tolerance_ratio_exact(params));
  const bool weighted = params.theta > 1.0 && params.q > 0.0;
  row.add("tolerance_ratio_approx",
          weighted ? tolerance_ratio_approx(params) : std::nan(""));
  row.add("q_star_closed",
          params.theta > 1.0 ? optimal_q_closed(params.theta, r.p_h, params.delta)
                             : std::nan(""));
  row.add("q_star_numeric",
          params.theta > 1.0 ? optimal_q_numeric(r.p_h, params.delta, params.theta).q
                             : std::nan(""));
  row.add("theta_lower_bound", theta_lower_bound(r.p_h, params.delta, params.q, epsilon));
  row.add("improvement_ratio", improvement_ratio(params));
  row.add("growth_rate", chain_growth_rate(params));
  row.add("quality_bound", chain_quality_bound(params, 0.0));
  return row;
}

int cmd_analyze(const ProtocolParams& params, double epsilon, bool as_json,
                const std::string& out_path) {
  const AnalyzeRow row = analyze_point(params, epsilon);
  std::ostringstream body;
  body.precision(12);
  if (as_json) {
    body << "{";
    for (size_t i = 0; i < row.fields.size(); ++i) {
      if (i) body << ",";
      const double v = row.fields[i].second;
      body << "\"" << row.fields[i].first << "\":";
      if (std::isnan(v)) body << "null";
      else body << v;
    }
    body << "}\n";
  } else {
    body << "# schema=1\n";
    for (size_t i = 0; i < row.fields.size(); ++i) {
      body << (i ? "," : "") << row.fields[i].first;
    }
    body << "\n";
    for (size_t i = 0; i < row.fields.size(); ++i) {
      if (i) body << ",";
      if (std::isnan(row.fields[i].second)) body << "";
      else body << row.fields[i].second;
    }
    body << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_out(out_path);
    out << body.str();
  }
  return kExitOk;
}

int cmd_threshold(const std::string& curve, std::vector<double> c_grid, uint64_t delta, double q,
                  double theta, const std::string& out_path) {
  if (c_grid.empty()) {
    for (int e = -6; e <= 6; ++e) c_grid.push_back(std::ldexp(1.0, e));
  }
  std::ostringstream body;
  body.precision(12);
  body << "# schema=1 curve=" << curve << "\n";
  body << "c,rho_star_ironclad,rho_star_nakamoto,no_root\n";
  for (double c : c_grid) {
    double iron = std::nan("");
    double naka = std::nan("");
    bool no_root = false;
    if (curve != "nakamoto") {
      try {
        iron = consistency_threshold_ironclad(ThresholdQuery{c, delta, q, theta});
      } catch (const NoRootError&) {
        no_root = true;
      }
    }
    if (curve != "ironclad") naka = nakamoto_threshold(c);
    body << c << ',';
    if (!std::isnan(iron)) body << iron;
    body << ',';
    if (!std::isnan(naka)) body << naka;
    body << ',' << (no_root ? 1 : 0) << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    auto out = open_out(out_path);
    out << body.str();
  }
  return kExitOk;
}

void append_metrics_row(const std::string& path, const SimConfig& cfg,
                        const MetricsReport& report) {
  const fs::path p = resolve_out(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  const bool fresh = !fs::exists(p) || fs::file_size(p) == 0;
  std::ofstream out(p, std::ios::app);
  if (!out) throw std::ios_base::failure("cannot write output file: " + p.string());
  std::ostringstream chunk;
  chunk.precision(12);
  if (fresh) chunk << "# schema=1\n" << MetricsReport::csv_header() << "\n";
  chunk << report.csv_row(cfg) << "\n";
  out << chunk.str();  // single buffered write per row
  if (!out) throw std::ios_base::failure("write failed: " + p.string());
}

int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed,
                 const std::string& out_path, const std::string& trace_path, bool dump) {
  SimConfig cfg = load_sim_config(config_path);
  if (seed) cfg.seed = *seed;
  if (dump) {
    std::cout << dump_sim_config(cfg);
    return kExitOk;
  }
  cfg.validate();
  const Trace trace = run_simulation_trace(cfg);
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    trace.write_csv(out);
  }
  const ParallelMetrics metrics = compute_metrics(trace);
  if (out_path.empty()) {
    std::cout << "# schema=1\n" << MetricsReport::csv_header() << "\n"
              << metrics.aggregate.csv_row(cfg) << "\n";
  } else {
    append_metrics_row(out_path, cfg, metrics.aggregate);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& preset_name, unsigned jobs, std::string out_path) {
  const ExperimentPreset preset = make_preset(preset_name);
  if (out_path.empty()) out_path = preset_name + ".csv";
  const fs::path p = resolve_out(out_path);

  // Resume: completed grid points are identified by their leading key.
  std::map<uint64_t, std::string> rows;
  if (fs::exists(p)) {
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("point,", 0) == 0) continue;
      rows[std::stoull(line.substr(0, line.find(',')))] = line;
    }
  }

  std::vector<const PresetPoint*> todo;
  for (const auto& point : preset.points) {
    if (!rows.count(point.index)) todo.push_back(&point);
  }

  std::atomic<size_t> cursor{0};
  std::mutex mtx;
  const unsigned workers = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = cursor.fetch_add(1); i < todo.size(); i = cursor.fetch_add(1)) {
        const PresetPoint& point = *todo[i];
        std::ostringstream row;
        row.precision(12);
        if (preset.kind == PresetKind::Walk) {
          const WalkOutcome outcome = run_walks(point.walk);
          row << point.index << ',' << point.walk.theta << ',' << point.walk.q << ','
              << point.walk.q_tilde << ',' << point.walk.gamma << ',' << point.walk.threshold
              << ',' << outcome.runs << ',' << outcome.mean << ',' << outcome.p95;
        } else if (preset.kind == PresetKind::ToleranceGrid) {
          const double exact = tolerance_ratio_exact(point.p_h, point.delta, point.q,
                                                     point.theta);
          const double approx = point.theta > 1.0 && point.q > 0.0
                                    ? tolerance_ratio_approx(point.p_h, point.delta, point.q,
                                                             point.theta)
                                    : std::nan("");
          row << point.index << ',' << point.q << ',' << exact << ',' << approx;
        } else {
          const MetricsReport report = run_simulation(point.sim);
          row << point.index << ',' << report.csv_row(point.sim);
        }
        std::lock_guard<std::mutex> lock(mtx);
        rows[point.index] = row.str();
      }
    });
  }
  for (auto& t : pool) t.join();

  // Order-normalized rewrite: grid-key order regardless of job count.
  const fs::path tmp = p.string() + ".tmp";
  {
    if (p.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(tmp);
    if (!out) throw std::ios_base::failure("cannot write output file: " + tmp.string());
    out << "# schema=1 preset=" << preset.name << " version=" << preset.version << "\n";
    if (preset.kind == PresetKind::Walk) {
      out << "point,theta,q,q_tilde,gamma,threshold,runs,mean,p95\n";
    } else if (preset.kind == PresetKind::ToleranceGrid) {
      out << "point,q,tolerance_ratio,tolerance_ratio_approx\n";
    } else {
      out << "point," << MetricsReport::csv_header() << "\n";
    }
    for (const auto& [index, row] : rows) out << row << "\n";
  }
  fs::rename(tmp, p);
  std::cerr << "sweep '" << preset.name << "': " << rows.size() << "/" << preset.points.size()
            << " points -> " << p.string() << "\n";
  return kExitOk;
}

int cmd_walk(const WalkConfig& cfg, const std::string& hist_path, const std::string& out_path) {
  cfg.validate();
  const WalkOutcome outcome = run_walks(cfg);
  if (!hist_path.empty()) {
    auto out = open_out(hist_path);
    write_histogram_csv(out, outcome);
  }
  if (out_path.empty()) {
    write_walk_summary_csv(std::cout, cfg, outcome);
  } else {
    auto out = open_out(out_path);
    write_walk_summary_csv(out, cfg, outcome);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted-block consensus workbench"};
  app.require_subcommand(1);

  // analyze
  ProtocolParams an_params;
  double an_epsilon = 1e-10;
  bool an_json = false;
  std::string an_out, an_config;
  auto* analyze = app.add_subcommand("analyze", "closed-form quantities for one parameter point");
  analyze->add_option("--p", an_params.p, "per-slot block probability");
  analyze->add_option("--rho", an_params.rho, "adversarial mining fraction");
  analyze->add_option("--delta", an_params.delta, "network delay bound in slots");
  analyze->add_option("--q", an_params.q, "iron block probability")->required();
  analyze->add_option("--theta", an_params.theta, "iron block weight")->required();
  analyze->add_option("--epsilon", an_epsilon, "significance for the theta lower bound");
  analyze->add_option("--config", an_config, "read [params] from a config file");
  analyze->add_flag("--json", an_json, "emit a JSON object instead of CSV");
  analyze->add_option("--out", an_out, "output file (default stdout)");

  // threshold
  std::string th_curve = "both", th_out;
  std::vector<double> th_grid;
  uint64_t th_delta = 10'000'000'000'000ull;
  double th_q = 0.02, th_theta = 500.0;
  auto* threshold = app.add_subcommand("threshold", "consistency threshold curves over blocktime");
  threshold->add_option("--curve", th_curve, "ironclad | nakamoto | both")
      ->check(CLI::IsMember({"ironclad", "nakamoto", "both"}));
  threshold->add_option("--c-grid", th_grid, "normalized blocktime grid points");
  threshold->add_option("--delta", th_delta, "network delay bound in slots");
  threshold->add_option("--q", th_q, "iron block probability");
  threshold->add_option("--theta", th_theta, "iron block weight");
  threshold->add_option("--out", th_out, "output file (default stdout)");

  // simulate
  std::string sim_config, sim_out, sim_trace;
  std::optional<uint64_t> sim_seed;
  bool sim_dump = false;
  auto* simulate = app.add_subcommand("simulate", "run one adversarial network simulation");
  simulate->add_option("--config", sim_config, "simulation config file")->required();
  simulate->add_option("--seed", sim_seed, "override the config seed");
  simulate->add_option("--out", sim_out, "append the metrics row to this CSV");
  simulate->add_option("--trace", sim_trace, "dump the event trace CSV");
  simulate->add_flag("--dump-config", sim_dump, "echo the canonical config and exit");

  // sweep
  std::string sw_preset, sw_out;
  unsigned sw_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a named experiment preset");
  sweep->add_option("--preset", sw_preset, "preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  sweep->add_option("--jobs", sw_jobs, "worker count");
  sweep->add_option("--out", sw_out, "output CSV (default <preset>.csv)");

  // walk
  WalkConfig wk;
  std::string wk_hist, wk_out;
  auto* walk = app.add_subcommand("walk", "Monte-Carlo attack random walk");
  walk->add_option("--theta", wk.theta, "iron block weight")->required();
  walk->add_option("--q", wk.q, "adversary iron probability")->required();
  walk->add_option("--q-tilde", wk.q_tilde, "honest-chain iron fraction")->required();
  walk->add_option("--gamma", wk.gamma, "honest growth margin");
  walk->add_option("--threshold", wk.threshold, "give-up weight lead");
  walk->add_option("--runs", wk.runs, "Monte-Carlo repetitions");
  walk->add_option("--seed", wk.seed, "PRNG seed");
  walk->add_option("--workers", wk.workers, "worker threads");
  walk->add_option("--step-cap", wk.step_cap, "censor runs beyond this many steps");
  walk->add_option("--hist", wk_hist, "write the fork-length histogram CSV here");
  walk->add_option("--out", wk_out, "summary output file (default stdout)");

  try {
    app.parse(argc, argv);
    if (*analyze) {
      if (!an_config.empty()) {
        an_params = load_sim_config(an_config).params;
      }
      return cmd_analyze(an_params, an_epsilon, an_json, an_out);
    }
    if (*threshold) return cmd_threshold(th_curve, th_grid, th_delta, th_q, th_theta, th_out);
    if (*simulate) return cmd_simulate(sim_config, sim_seed, sim_out, sim_trace, sim_dump);
    if (*sweep) return cmd_sweep(sw_preset, sw_jobs, sw_out);
    if (*walk) return cmd_walk(wk, wk_hist, wk_out);
    return kExitBadArgs;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  } catch (const NoRootError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const BoundaryMaximizerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
