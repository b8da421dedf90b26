#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "relaymon/codec.hpp"
#include "relaymon/info.hpp"
#include "relaymon/io.hpp"
#include "relaymon/match.hpp"
#include "relaymon/region.hpp"

namespace fs = std::filesystem;
using namespace relaymon;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::string fmt(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_analyze(const std::string& game_path, const std::string& pstar_text,
                const std::string& pstar_file, const std::string& out_path) {
  GameConfig cfg = load_game_file(game_path);
  std::string ptext = pstar_text;
  if (!pstar_file.empty()) ptext = read_file(pstar_file);
  if (ptext.empty())
    throw ValidationError("analyze needs --pstar or --pstar-file");
  ProductDistribution pstar = parse_pstar(ptext);

  ConstraintReport rep = evaluate_constraint(cfg.game, cfg.monitoring, pstar);
  std::ostringstream os;
  os << "required rate R = " << fmt(rep.required_rate_bits)
     << " bits, capacity = " << fmt(rep.capacity_bits) << " bits => "
     << (rep.satisfied ? "SATISFIED" : "VIOLATED") << "\n\n"
     << rep.to_text();
  std::cout << os.str();
  if (!out_path.empty()) write_file(out_path, os.str());
  return 0;
}

int cmd_region(const std::string& game_path, std::vector<double> deltas,
               double step, double floor, bool floor_given,
               const std::string& out_dir, int jobs) {
  Timer timer;
  GameConfig cfg = load_game_file(game_path);
  if (!cfg.delta && !deltas.empty())
    throw ValidationError(
        "game file carries an explicit monitoring table; it cannot be swept "
        "parametrically, drop --delta");
  bool table_run = deltas.empty() && !cfg.delta;
  if (deltas.empty()) deltas.push_back(cfg.delta ? *cfg.delta : -1.0);
  fs::create_directories(out_dir);

  std::vector<std::string> outputs;
  for (double delta : deltas) {
    MonitoringStructure mon =
        table_run ? cfg.monitoring
                  : MonitoringStructure::binary_symmetric(
                        delta, cfg.monitoring.public_alphabet_size());
    std::vector<std::pair<std::string, double>> conventions;
    if (floor_given) {
      conventions.emplace_back("floor" + fmt(floor), floor);
    } else {
      conventions.emplace_back("floor0", 0.0);        // pure profiles included
      conventions.emplace_back("floorstep", step);    // interior grid only
    }
    for (const auto& [tag, fl] : conventions) {
      RegionResult res = sweep_region(cfg.game, mon, step, fl, jobs);
      char head[128];
      if (table_run)
        snprintf(head, sizeof head, "table_%s", tag.c_str());
      else
        snprintf(head, sizeof head, "delta%.4g_%s", delta, tag.c_str());
      std::string base = (fs::path(out_dir) / head).string();
      write_file(base + "_region.csv", res.records_csv());
      outputs.push_back(base + "_region.csv");
      std::string label =
          table_run ? std::string("table") : "delta " + fmt(delta);
      if (res.hulls_valid) {
        write_file(base + "_hull.csv", hull_csv(res.region_hull));
        write_file(base + "_feasible_hull.csv", hull_csv(res.feasible_hull));
        outputs.push_back(base + "_hull.csv");
        outputs.push_back(base + "_feasible_hull.csv");
        std::cout << label << " " << tag << ": " << res.records.size()
                  << " grid points, area ratio " << fmt(res.area_ratio)
                  << "\n";
      } else {
        std::cout << label << " " << tag << ": " << res.records.size()
                  << " grid points; payoff hulls need a 2-player game, "
                     "membership CSV written\n";
      }
    }
  }
  write_file((fs::path(out_dir) / "manifest.json").string(),
             manifest_json("region",
                           {{"game", game_path},
                            {"step", fmt(step)},
                            {"floor", floor_given ? fmt(floor) : "both"}},
                           outputs, timer.seconds()));
  return 0;
}

int cmd_simulate_coding(const std::string& game_path,
                        const std::string& pstar_text, int n, int trials,
                        double eps, const std::string& deviation_text,
                        uint64_t seed, bool suspect_only,
                        const std::string& out_dir, int jobs) {
  Timer timer;
  GameConfig cfg = load_game_file(game_path);
  ProductDistribution pstar = parse_pstar(pstar_text);
  DeviationSpec dev = parse_deviation(deviation_text, cfg.game);

  Codebook code = build_code(cfg.game, cfg.monitoring, pstar, n, eps, seed);
  ErrorEstimate est = estimate_error_probability(
      code, dev, static_cast<uint64_t>(trials), seed, jobs, suspect_only);

  std::ostringstream os;
  os << "trials " << est.trials << "\n"
     << "error estimate " << fmt(est.estimate) << " (95% CI "
     << fmt(est.ci_low) << " .. " << fmt(est.ci_high) << ")\n"
     << "mismatch trials " << est.mismatch_trials << "\n"
     << "atypical-pair events " << est.event_atypical << "\n"
     << "bin-collision events " << est.event_collision << "\n"
     << "suspect misidentifications " << est.suspect_misid << "\n"
     << "capacity overflows " << est.capacity_overflow << "\n"
     << "encoder-declared errors " << est.encoder_declared << "\n"
     << "other decode failures " << est.other_failures << "\n";
  for (size_t k = 0; k < est.per_decoder.size(); ++k)
    os << "decoder " << k + 1 << " mismatches " << est.per_decoder[k] << "\n";
  std::cout << os.str();

  fs::create_directories(out_dir);
  std::string report_path = (fs::path(out_dir) / "coding_report.txt").string();
  std::string trace_path = (fs::path(out_dir) / "coding_trace.csv").string();
  std::string book_path = (fs::path(out_dir) / "codebook.txt").string();
  write_file(report_path, os.str());
  write_file(trace_path, trace_csv(est, dev.describe()));
  write_file(book_path, code.serialize());

  // rate accounting on one fresh honest block for the report
  Rng rng(derive_seed(seed, 0xacc7ull));
  ActionBlock block(n);
  for (int t = 0; t < n; ++t)
    block[t] = sample_profile(cfg.game, pstar, DeviationSpec::none(), t, rng);
  RateAccounting acc = rate_accounting(code, block);
  std::string acc_path = (fs::path(out_dir) / "rate_accounting.txt").string();
  write_file(acc_path, acc.to_text());

  write_file((fs::path(out_dir) / "manifest.json").string(),
             manifest_json("simulate-coding",
                           {{"game", game_path},
                            {"pstar", pstar_text},
                            {"n", std::to_string(n)},
                            {"trials", std::to_string(trials)},
                            {"eps", fmt(eps)},
                            {"deviation", dev.describe()},
                            {"seed", std::to_string(seed)}},
                           {report_path, trace_path, book_path, acc_path},
                           timer.seconds()));
  return 0;
}

int cmd_simulate_game(const std::string& game_path,
                      const std::string& config_path,
                      const std::string& out_dir, int jobs) {
  Timer timer;
  GameConfig cfg = load_game_file(game_path);
  SimRunConfig run = load_sim_run(config_path, cfg.game);

  MatchTrace trace = run_match(cfg.game, cfg.monitoring, run.pstar, run.sim);
  std::vector<MatchDeviation> library;
  if (run.sim.deviation.active())
    library.push_back(run.sim.deviation);
  else
    library = default_deviation_library(cfg.game, 0);
  EquilibriumReport rep = equilibrium_check(cfg.game, cfg.monitoring,
                                            run.pstar, run.sim, library,
                                            run.matches, jobs);
  std::cout << rep.to_text();

  fs::create_directories(out_dir);
  std::string trace_path = (fs::path(out_dir) / "match_trace.csv").string();
  std::string report_path =
      (fs::path(out_dir) / "equilibrium_report.txt").string();
  write_file(trace_path, trace.blocks_csv());
  write_file(report_path, rep.to_text());
  write_file((fs::path(out_dir) / "manifest.json").string(),
             manifest_json("simulate-game",
                           {{"game", game_path},
                            {"config", config_path},
                            {"matches", std::to_string(run.matches)}},
                           {trace_path, report_path}, timer.seconds()));
  return rep.pass ? 0 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "relaymon: public-signal relay encoding for repeated games with "
      "private monitoring"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "evaluate the public-rate condition for one mixed profile");
  std::string game_path, pstar_text, pstar_file, out_path;
  analyze->add_option("--game", game_path, "game JSON file")->required();
  analyze->add_option("--pstar", pstar_text,
                      "mixed profile, e.g. 0.9,0.1;0.9,0.1");
  analyze->add_option("--pstar-file", pstar_file, "file with the same format");
  analyze->add_option("--out", out_path, "also write the report here");

  // region
  auto* region = app.add_subcommand(
      "region", "sweep mixed profiles and export the payoff region");
  std::string r_game, r_out = "region_out";
  std::vector<double> r_deltas;
  double r_step = 0.01, r_floor = 0.0;
  region->add_option("--game", r_game, "game JSON file")->required();
  region->add_option("--delta", r_deltas,
                     "noise levels for the parametric monitoring family");
  region->add_option("--step", r_step, "grid step (0, 0.5]");
  auto* floor_opt =
      region->add_option("--floor", r_floor,
                         "support floor; omit to export both conventions");
  region->add_option("--out-dir", r_out, "output directory");

  // simulate-coding
  auto* coding = app.add_subcommand(
      "simulate-coding", "Monte Carlo error estimate of the block code");
  std::string c_game, c_pstar, c_dev = "none", c_out = "coding_out";
  int c_n = 16, c_trials = 2000;
  double c_eps = 0.05;
  uint64_t c_seed = 1;
  bool c_suspect_only = false;
  coding->add_option("--game", c_game, "game JSON file")->required();
  coding->add_option("--pstar", c_pstar, "mixed profile")->required();
  coding->add_option("--n", c_n, "block length");
  coding->add_option("--trials", c_trials, "Monte Carlo trials");
  coding->add_option("--eps", c_eps, "typicality parameter");
  coding->add_option("--deviation", c_dev, "deviation spec (see README)");
  coding->add_option("--seed", c_seed, "master seed");
  coding->add_flag("--suspect-only", c_suspect_only,
                   "only run the statistical deviator test");
  coding->add_option("--out-dir", c_out, "output directory");

  // simulate-game
  auto* match = app.add_subcommand(
      "simulate-game", "run the encoder-assisted repeated game");
  std::string m_game, m_config, m_out = "match_out";
  match->add_option("--game", m_game, "game JSON file")->required();
  match->add_option("--config", m_config, "simulation config JSON")->required();
  match->add_option("--out-dir", m_out, "output directory");

  auto* schema = app.add_subcommand("schema", "print the CSV column schemas");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze)
      return cmd_analyze(game_path, pstar_text, pstar_file, out_path);
    if (*region)
      return cmd_region(r_game, r_deltas, r_step, r_floor,
                        floor_opt->count() > 0, r_out, jobs);
    if (*coding)
      return cmd_simulate_coding(c_game, c_pstar, c_n, c_trials, c_eps, c_dev,
                                 c_seed, c_suspect_only, c_out, jobs);
    if (*match) return cmd_simulate_game(m_game, m_config, m_out, jobs);
    if (*schema) {
      std::cout << schema_text();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
