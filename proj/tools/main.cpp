#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "asym/harness.hpp"
#include "asym/oracle.hpp"
#include "asym/rng.hpp"
#include "json.hpp"

namespace {

using namespace asym;

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Flags shared by the match-running subcommands; unset flags leave the
// config-file value alone.
struct CommonFlags {
  std::string config;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> budget_ms;
  std::optional<std::int64_t> budget_evals;
  std::optional<std::string> selection;
  std::optional<int> unrestricted_n;
  std::optional<std::string> type_system;
  std::optional<std::string> portfolio;
  std::optional<std::string> units_file;
  std::optional<int> frame_cap;
  bool no_forfeit = false;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "INI config with [scenario] [agents] [budget] [tournament]");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--budget-ms", budget_ms, "wall-clock budget per decision (ms)");
    app->add_option("--budget-evals", budget_evals, "evaluation-count budget per decision");
    app->add_option("--selection", selection, "av+ | av- | random");
    app->add_option("--unrestricted-n", unrestricted_n, "size of the unrestricted set");
    app->add_option("--type-system", type_system, "kind_hp | kind | unit | single");
    app->add_option("--portfolio", portfolio, "comma-separated script names");
    app->add_option("--units-file", units_file, "unit stat INI file");
    app->add_option("--frame-cap", frame_cap, "match length bound in frames");
    app->add_flag("--no-forfeit", no_forfeit, "never forfeit slow decisions");
  }

  TournamentConfig load() const {
    TournamentConfig cfg;
    if (!config.empty()) {
      cfg = load_tournament_config(config);
    } else {
      std::istringstream empty("[agents]\nlist = pgs, gab\n");
      cfg = parse_tournament_config(empty);
    }
    cfg.seed = seed;
    if (budget_ms && budget_evals) throw ConfigError("--budget-ms and --budget-evals are exclusive");
    if (budget_ms) cfg.budget = SearchBudget::wall_clock_ms(*budget_ms);
    if (budget_evals) cfg.budget = SearchBudget::node_count(*budget_evals);
    if (selection) cfg.agent.selection = parse_selection(*selection);
    if (unrestricted_n) cfg.agent.unrestricted_n = *unrestricted_n;
    if (type_system) {
      type_system_by_name(*type_system);
      cfg.agent.type_system = *type_system;
    }
    if (portfolio) cfg.agent.portfolio = portfolio_from_names(split(*portfolio));
    if (units_file) {
      auto table = std::make_shared<const KindTable>(load_kind_table(*units_file));
      for (auto& sc : cfg.scenarios) sc.table = table;
    }
    if (frame_cap)
      for (auto& sc : cfg.scenarios) sc.frame_cap = *frame_cap;
    if (no_forfeit) cfg.match.forfeit_enabled = false;
    return cfg;
  }
};

ScenarioConfig scenario_from(const TournamentConfig& cfg, const std::string& name) {
  ScenarioConfig sc = scenario_preset(name);
  if (!cfg.scenarios.empty()) {
    const ScenarioConfig& base = cfg.scenarios.front();
    sc.table = base.table;
    sc.arena = base.arena;
    sc.placement_jitter = base.placement_jitter;
    sc.separation_offset = base.separation_offset;
    sc.frame_cap = base.frame_cap;
  }
  return sc;
}

int cmd_run_match(const CommonFlags& flags, const std::string& agents,
                  const std::string& scenario, const std::string& out_path) {
  TournamentConfig cfg = flags.load();
  auto names = split(agents);
  if (names.size() != 2) throw ConfigError("--agents needs exactly two names");
  ScenarioConfig sc = scenario_from(cfg, scenario);
  sc.seed = flags.seed;
  const GameState start = generate_scenario(sc);
  auto a = make_agent(names[0], cfg.agent, derive_seed(flags.seed, 1));
  auto b = make_agent(names[1], cfg.agent, derive_seed(flags.seed, 2));
  MatchOptions opts = cfg.match;
  opts.keep_log = true;
  MatchRecord rec = run_match(*a, *b, start, cfg.budget, opts);
  rec.seed = flags.seed;
  rec.scenario = scenario;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write " + out_path);
    write_replay(out, rec);
  }
  std::printf("%s vs %s on %s seed %llu: %s (ltd2 %.3f, frame %d, %zu transitions%s)\n",
              rec.agent_first.c_str(), rec.agent_second.c_str(), scenario.c_str(),
              static_cast<unsigned long long>(flags.seed), std::string(to_string(rec.outcome)).c_str(),
              rec.final_ltd2, rec.final_state.frame(), rec.transitions.size(),
              rec.forfeit ? ", forfeit" : "");
  return 0;
}

int cmd_run_tournament(const CommonFlags& flags, std::optional<int> matches,
                       std::optional<int> workers, std::optional<double> deadline,
                       const std::string& scenarios, const std::string& pairings,
                       const std::string& out_path, bool quiet) {
  TournamentConfig cfg = flags.load();
  if (matches) cfg.matches = *matches;
  if (workers) cfg.workers = *workers;
  if (deadline) cfg.deadline_s = *deadline;
  if (!scenarios.empty()) {
    std::vector<ScenarioConfig> list;
    for (const auto& n : split(scenarios)) list.push_back(scenario_from(cfg, n));
    cfg.scenarios = std::move(list);
  }
  if (!pairings.empty()) {
    cfg.pairings.clear();
    for (const auto& item : split(pairings)) {
      const auto vs = item.find('/');
      if (vs == std::string::npos) throw ConfigError("--pairings entries look like gab/pgs");
      cfg.pairings.push_back({item.substr(0, vs), item.substr(vs + 1)});
    }
  }
  auto progress = [&](int done, int total) {
    if (!quiet && (done % 10 == 0 || done == total))
      std::fprintf(stderr, "\r%d/%d matches", done, total);
  };
  TournamentResult res = run_tournament(cfg, progress);
  if (!quiet) std::fprintf(stderr, "\n");
  if (out_path.empty()) {
    write_results_csv(std::cout, res);
  } else {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write " + out_path);
    write_results_csv(out, res);
  }
  if (!quiet) {
    std::fprintf(stderr, "%d/%d matches in %.1f s\n", res.matches_played,
                 res.matches_scheduled, res.wall_seconds);
    for (const auto& r : res.rows)
      if (r.partial)
        std::fprintf(stderr, "partial: %s %s vs %s (%d played, %d errors)\n",
                     r.scenario.c_str(), r.agent_a.c_str(), r.agent_b.c_str(), r.matches,
                     r.errors);
  }
  return 0;
}

int cmd_solve_tiny(std::uint64_t seed, int units, int depth, int checks,
                   const std::string& portfolio, const std::string& unrestricted, bool records) {
  const Portfolio P = portfolio_from_names(split(portfolio));
  TinyConfig tc;
  tc.units_per_side = units;
  int holds = 0, done = 0, refused = 0;
  std::int64_t lemma = 0;
  nlohmann::json summary;
  for (std::uint64_t k = 0; done < checks; ++k) {
    if (refused > 50 * checks) throw ConfigError("too many instances above the explosion limit");
    const std::uint64_t inst_seed = derive_seed(seed, k);
    const GameState s = tiny_instance(inst_seed, tc);
    std::vector<UnitId> free;
    if (unrestricted == "random") {
      Rng rng(derive_seed(inst_seed, 7));
      for (UnitId id : ready_units(s, Player::kFirst))
        if (rng.below(2)) free.push_back(id);
    } else if (unrestricted != "none") {
      for (const auto& t : split(unrestricted)) free.push_back(std::stoi(t));
    }
    Theorem1Report rep;
    try {
      rep = theorem1_check(s, P, free, depth);
    } catch (const ExplosionError&) {
      ++refused;
      continue;
    }
    ++done;
    holds += rep.holds;
    lemma += rep.lemma1_violations;
    if (records) {
      nlohmann::json j = {{"seed", inst_seed},       {"unrestricted", free},
                          {"v_uniform", rep.v_uniform}, {"v_asymmetric", rep.v_asymmetric},
                          {"v_full", rep.v_full},       {"holds", rep.holds},
                          {"nodes", rep.nodes_checked}, {"lemma1_violations", rep.lemma1_violations}};
      std::cout << j.dump() << '\n';
    }
  }
  summary = {{"checks", done},           {"holds", holds},
             {"refused", refused},       {"lemma1_violations", lemma},
             {"units_per_side", units},  {"depth", depth}};
  std::cout << summary.dump() << '\n';
  std::fprintf(stderr, "theorem1 holds: %d/%d\n", holds, done);
  return holds == done && lemma == 0 ? 0 : 1;
}

int cmd_replay(const std::string& path, bool verify) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  MatchRecord rec = read_replay(in);
  print_replay(std::cout, rec);
  if (verify) {
    const bool ok = verify_replay(rec);
    std::cout << "replay " << (ok ? "reproduces" : "does NOT reproduce") << " the final state\n";
    return ok ? 0 : 1;
  }
  return 0;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

int cmd_bench(const CommonFlags& flags, const std::string& scenario, const std::string& agent,
              int matches, double eval_seconds) {
  TournamentConfig cfg = flags.load();
  ScenarioConfig sc = scenario_from(cfg, scenario);
  sc.seed = flags.seed;
  const GameState start = generate_scenario(sc);

  const auto t0 = std::chrono::steady_clock::now();
  std::int64_t calls = 0;
  double sink = 0.0;
  while (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < eval_seconds) {
    sink += evaluate(start, Player::kFirst, cfg.agent.playout_steps);
    ++calls;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("playout eval: %.0f calls/s on %s (%d units/side, checksum %.3f)\n",
              static_cast<double>(calls) / secs, scenario.c_str(), sc.units_per_side,
              sink / static_cast<double>(calls));

  std::vector<double> lat;
  for (int m = 0; m < matches; ++m) {
    ScenarioConfig msc = sc;
    msc.seed = derive_seed(flags.seed, static_cast<std::uint64_t>(m));
    auto a = make_agent(agent, cfg.agent, derive_seed(msc.seed, 1));
    auto b = make_agent(agent, cfg.agent, derive_seed(msc.seed, 2));
    MatchOptions opts = cfg.match;
    opts.keep_log = false;
    opts.forfeit_enabled = false;
    MatchRecord rec = run_match(*a, *b, generate_scenario(msc), cfg.budget, opts);
    lat.insert(lat.end(), rec.latencies_ms.begin(), rec.latencies_ms.end());
  }
  if (lat.empty()) return 0;
  std::printf("%s decisions: %zu, budget %s\n", agent.c_str(), lat.size(),
              to_string(cfg.budget).c_str());
  std::printf("latency ms: p50 %.2f  p90 %.2f  p99 %.2f  max %.2f\n", percentile(lat, 0.5),
              percentile(lat, 0.9), percentile(lat, 0.99), percentile(lat, 1.0));
  const double edges[] = {1, 5, 10, 20, 30, 40, 45, 50, 1e300};
  std::size_t prev = 0;
  std::sort(lat.begin(), lat.end());
  double lo = 0;
  for (double hi : edges) {
    const auto upto = static_cast<std::size_t>(std::lower_bound(lat.begin(), lat.end(), hi) - lat.begin());
    if (upto > prev || hi < 1e300) {
      std::printf("  [%5.0f, %5s) %6zu\n", lo, hi < 1e300 ? std::to_string(static_cast<int>(hi)).c_str() : "inf",
                  upto - prev);
    }
    prev = upto;
    lo = hi;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asym: combat search with asymmetric action abstractions"};
  app.require_subcommand(1);

  CommonFlags match_flags, tour_flags, bench_flags;

  auto* run_match = app.add_subcommand("run-match", "play one match and write its replay");
  std::string agents = "gab,pgs", scenario = "zl8", match_out;
  match_flags.add_to(run_match);
  run_match->add_option("--agents", agents, "two comma-separated agent names, first player first");
  run_match->add_option("--scenario", scenario, "scenario preset");
  run_match->add_option("--out", match_out, "NDJSON replay output");

  auto* run_tour = app.add_subcommand("run-tournament", "play a tournament and print a CSV");
  std::optional<int> matches, workers;
  std::optional<double> deadline;
  std::string tour_scenarios, tour_pairings, tour_out;
  bool quiet = false;
  tour_flags.add_to(run_tour);
  run_tour->add_option("--matches", matches, "matches per pairing and scenario");
  run_tour->add_option("--workers", workers, "parallel workers (default ASYM_WORKERS or cores)");
  run_tour->add_option("--deadline-s", deadline, "stop scheduling matches after this many seconds");
  run_tour->add_option("--scenarios", tour_scenarios, "comma-separated presets");
  run_tour->add_option("--pairings", tour_pairings, "comma-separated a/b pairs");
  run_tour->add_option("--out", tour_out, "CSV output (default stdout)");
  run_tour->add_flag("--quiet", quiet, "no progress output");

  auto* solve = app.add_subcommand("solve-tiny", "check the abstraction value ordering on tiny combats");
  std::uint64_t solve_seed = 1;
  int units = 2, depth = 2, checks = 100;
  std::string portfolio = "nokav,kiter", unrestricted = "random";
  bool records = false;
  solve->add_option("--seed", solve_seed, "master seed");
  solve->add_option("--units", units, "units per side (1-3)")->check(CLI::Range(1, 3));
  solve->add_option("--depth", depth, "depth cap in transitions")->check(CLI::Range(0, 6));
  solve->add_option("--checks", checks, "number of instances")->check(CLI::PositiveNumber);
  solve->add_option("--portfolio", portfolio, "comma-separated script names");
  solve->add_option("--unrestricted", unrestricted, "random | none | comma-separated ids");
  solve->add_flag("--records", records, "print one JSON record per instance");

  auto* replay = app.add_subcommand("replay", "pretty-print an NDJSON match replay");
  std::string replay_file;
  bool verify = false;
  replay->add_option("file", replay_file, "replay file")->required();
  replay->add_flag("--verify", verify, "re-apply the actions and compare the final state");
  std::uint64_t replay_seed = 0;
  replay->add_option("--seed", replay_seed, "unused; accepted for uniformity");

  auto* bench = app.add_subcommand("bench", "playout throughput and decision latency");
  std::string bench_scenario = "zl50", bench_agent = "gab";
  int bench_matches = 1;
  double eval_seconds = 1.0;
  bench_flags.add_to(bench);
  bench->add_option("--scenario", bench_scenario, "scenario preset");
  bench->add_option("--agent", bench_agent, "agent used by both sides");
  bench->add_option("--matches", bench_matches, "matches to time");
  bench->add_option("--eval-seconds", eval_seconds, "seconds spent timing playouts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_match->parsed()) return cmd_run_match(match_flags, agents, scenario, match_out);
    if (run_tour->parsed())
      return cmd_run_tournament(tour_flags, matches, workers, deadline, tour_scenarios,
                                tour_pairings, tour_out, quiet);
    if (solve->parsed())
      return cmd_solve_tiny(solve_seed, units, depth, checks, portfolio, unrestricted, records);
    if (replay->parsed()) return cmd_replay(replay_file, verify);
    if (bench->parsed())
      return cmd_bench(bench_flags, bench_scenario, bench_agent, bench_matches, eval_seconds);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
