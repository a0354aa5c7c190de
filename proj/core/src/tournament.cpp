#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "asym/harness.hpp"
#include "asym/rng.hpp"

namespace asym {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T get_or(const pt::ptree& tree, const std::string& key, T fallback) {
  if (!tree.get_child_optional(key)) return fallback;
  const auto v = tree.get_optional<T>(key);
  if (!v) throw ConfigError("bad value for '" + key + "': '" + tree.get<std::string>(key) + "'");
  return *v;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

std::optional<int> env_workers() {
  const char* env = std::getenv("ASYM_WORKERS");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("ASYM_WORKERS must be a positive integer");
  return static_cast<int>(v);
}

TournamentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("tournament config: ") + e.what());
  }
  TournamentConfig cfg;

  std::shared_ptr<const KindTable> table = shared_default_kinds();
  if (auto file = tree.get_optional<std::string>("scenario.units_file")) {
    std::filesystem::path p(trim(*file));
    if (p.is_relative()) p = base_dir / p;
    table = std::make_shared<const KindTable>(load_kind_table(p));
  }
  const auto names =
      split_list(get_or<std::string>(tree, "scenario.presets", "zl8,dg8,zldg8,zldglg6,all8"));
  if (names.empty()) throw ConfigError("[scenario] presets is empty");
  for (const auto& n : names) {
    ScenarioConfig sc = scenario_preset(n);
    sc.table = table;
    sc.placement_jitter = get_or(tree, "scenario.jitter", sc.placement_jitter);
    sc.separation_offset = get_or(tree, "scenario.offset", sc.separation_offset);
    sc.arena.width = get_or(tree, "scenario.arena_width", sc.arena.width);
    sc.arena.height = get_or(tree, "scenario.arena_height", sc.arena.height);
    sc.frame_cap = get_or(tree, "scenario.frame_cap", sc.frame_cap);
    cfg.scenarios.push_back(std::move(sc));
  }

  if (auto pairs = tree.get_optional<std::string>("agents.pairings")) {
    for (const auto& item : split_list(*pairs)) {
      const auto colon = item.find(':', item.rfind("script:", 0) == 0 ? 7 : 0);
      // Accept "a:b" and "a vs b"; script agents contain a colon themselves.
      const auto vs = item.find(" vs ");
      if (vs != std::string::npos) {
        cfg.pairings.push_back({trim(item.substr(0, vs)), trim(item.substr(vs + 4))});
      } else if (colon != std::string::npos) {
        cfg.pairings.push_back({trim(item.substr(0, colon)), trim(item.substr(colon + 1))});
      } else {
        throw ConfigError("pairing '" + item + "' is not of the form a:b or 'a vs b'");
      }
    }
  } else {
    const auto list = split_list(get_or<std::string>(tree, "agents.list", ""));
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) cfg.pairings.push_back({list[i], list[j]});
  }
  if (cfg.pairings.empty()) throw ConfigError("[agents] needs pairings or a list of two or more agents");

  AgentConfig& a = cfg.agent;
  if (auto p = tree.get_optional<std::string>("agents.portfolio"))
    a.portfolio = portfolio_from_names(split_list(*p));
  a.selection = parse_selection(get_or<std::string>(tree, "agents.selection", "av+"));
  a.unrestricted_n = get_or(tree, "agents.unrestricted_n", a.unrestricted_n);
  a.type_system = get_or(tree, "agents.type_system", a.type_system);
  a.playout_steps = get_or(tree, "agents.playout_steps", a.playout_steps);
  a.max_depth = get_or(tree, "agents.max_depth", a.max_depth);
  if (a.unrestricted_n < 0) throw ConfigError("unrestricted_n must be nonnegative");
  type_system_by_name(a.type_system);

  const std::string mode = get_or<std::string>(tree, "budget.mode", "wallclock");
  const std::int64_t limit = get_or<std::int64_t>(tree, "budget.limit", 40);
  if (limit < 0) throw ConfigError("budget limit must be nonnegative");
  if (mode == "wallclock" || mode == "ms") {
    cfg.budget = SearchBudget::wall_clock_ms(limit);
  } else if (mode == "nodes" || mode == "evals") {
    cfg.budget = SearchBudget::node_count(limit);
  } else {
    throw ConfigError("[budget] mode must be wallclock or nodes");
  }
  cfg.match.forfeit_enabled = parse_bool(get_or<std::string>(tree, "budget.forfeit", "true"));
  cfg.match.forfeit_slack_ms = get_or(tree, "budget.forfeit_slack_ms", cfg.match.forfeit_slack_ms);
  cfg.match.keep_log = false;

  cfg.matches = get_or(tree, "tournament.matches", cfg.matches);
  cfg.seed = get_or<std::uint64_t>(tree, "tournament.seed", cfg.seed);
  cfg.workers = get_or(tree, "tournament.workers", cfg.workers);
  if (auto d = tree.get_optional<double>("tournament.deadline_s")) cfg.deadline_s = *d;
  if (cfg.matches < 1) throw ConfigError("[tournament] matches must be positive");
  if (auto w = env_workers()) cfg.workers = *w;
  return cfg;
}

struct JobResult {
  bool played = false;
  bool error = false;
  int a_result = 0;  // +1 a won, -1 b won, 0 draw
  double second_ms_sum[2] = {0.0, 0.0};
  int second_ms_count[2] = {0, 0};
  std::vector<double> latencies;
};

}  // namespace

TournamentConfig parse_tournament_config(std::istream& in) {
  return parse_config(in, std::filesystem::current_path());
}

TournamentConfig load_tournament_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tournament config " + path.string());
  return parse_config(in, path.parent_path());
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (auto w = env_workers()) return *w;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t match_seed(std::uint64_t master, std::size_t scenario, std::size_t pairing,
                         int match) {
  return derive_seed(master, scenario, pairing, static_cast<std::uint64_t>(match / 2));
}

TournamentResult run_tournament(const TournamentConfig& cfg, ProgressFn progress) {
  if (cfg.scenarios.empty()) throw ConfigError("tournament needs at least one scenario");
  if (cfg.pairings.empty()) throw ConfigError("tournament needs at least one pairing");
  for (const Pairing& p : cfg.pairings) {
    make_agent(p.agent_a, cfg.agent, 0);
    make_agent(p.agent_b, cfg.agent, 0);
  }

  const std::size_t S = cfg.scenarios.size(), P = cfg.pairings.size();
  const std::size_t M = static_cast<std::size_t>(cfg.matches);
  const std::size_t total = S * P * M;
  // Match index outermost so a deadline leaves every pairing similarly sampled.
  auto decode = [&](std::size_t job, std::size_t& s, std::size_t& p, int& m) {
    m = static_cast<int>(job / (S * P));
    s = (job / P) % S;
    p = job % P;
  };

  std::vector<JobResult> results(total);
  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::atomic<bool> stop{false};
  std::mutex progress_mutex;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  auto worker = [&] {
    while (true) {
      if (cfg.deadline_s && elapsed_s() >= *cfg.deadline_s) stop = true;
      if (stop) return;
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      std::size_t si, pi;
      int m;
      decode(job, si, pi, m);
      const Pairing& pair = cfg.pairings[pi];
      const std::uint64_t seed = match_seed(cfg.seed, si, pi, m);
      const bool swapped = (m % 2) == 1;
      JobResult& r = results[job];
      try {
        ScenarioConfig sc = cfg.scenarios[si];
        sc.seed = seed;
        const GameState start = generate_scenario(sc);
        auto a = make_agent(pair.agent_a, cfg.agent, derive_seed(seed, 1, swapped));
        auto b = make_agent(pair.agent_b, cfg.agent, derive_seed(seed, 2, swapped));
        MatchRecord rec = swapped ? run_match(*b, *a, start, cfg.budget, cfg.match)
                                  : run_match(*a, *b, start, cfg.budget, cfg.match);
        int first_result = rec.outcome == Outcome::kWinFirst    ? 1
                           : rec.outcome == Outcome::kWinSecond ? -1
                                                                : 0;
        r.a_result = swapped ? -first_result : first_result;
        const int a_side = swapped ? 1 : 0;
        for (int side = 0; side < 2; ++side) {
          const int who = side == a_side ? 0 : 1;
          for (double ms : rec.second_step_ms[side]) {
            r.second_ms_sum[who] += ms;
            ++r.second_ms_count[who];
          }
        }
        r.latencies = std::move(rec.latencies_ms);
      } catch (const std::exception&) {
        r.error = true;
      }
      r.played = true;
      const int d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, static_cast<int>(total));
      }
    }
  };

  const int workers = std::min<int>(resolve_workers(cfg.workers), static_cast<int>(total));
  std::vector<std::thread> threads;
  for (int w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  TournamentResult out;
  out.wall_seconds = elapsed_s();
  out.matches_scheduled = static_cast<int>(total);
  for (std::size_t si = 0; si < S; ++si) {
    for (std::size_t pi = 0; pi < P; ++pi) {
      PairingResult row;
      row.scenario = cfg.scenarios[si].name;
      row.agent_a = cfg.pairings[pi].agent_a;
      row.agent_b = cfg.pairings[pi].agent_b;
      double ms[2] = {0.0, 0.0};
      int count[2] = {0, 0};
      for (int m = 0; m < cfg.matches; ++m) {
        const std::size_t job = static_cast<std::size_t>(m) * S * P + si * P + pi;
        const JobResult& r = results[job];
        if (!r.played || r.error) {
          row.partial = true;
          if (r.error) ++row.errors;
          continue;
        }
        ++row.matches;
        if (r.a_result > 0) ++row.wins_a;
        else if (r.a_result < 0) ++row.wins_b;
        else ++row.draws;
        for (int k = 0; k < 2; ++k) {
          ms[k] += r.second_ms_sum[k];
          count[k] += r.second_ms_count[k];
        }
        out.latencies_ms.insert(out.latencies_ms.end(), r.latencies.begin(), r.latencies.end());
      }
      out.matches_played += row.matches;
      row.rate_a = row.matches ? (row.wins_a + 0.5 * row.draws) / row.matches : 0.0;
      row.mean_second_step_ms_a = count[0] ? ms[0] / count[0] : 0.0;
      row.mean_second_step_ms_b = count[1] ? ms[1] / count[1] : 0.0;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

void write_results_csv(std::ostream& out, const TournamentResult& result) {
  out << "scenario,agent_a,agent_b,matches,wins_a,draws,rate_a\n";
  char rate[32];
  for (const PairingResult& r : result.rows) {
    std::snprintf(rate, sizeof rate, "%.4f", r.rate_a);
    out << r.scenario << ',' << r.agent_a << ',' << r.agent_b << ',' << r.matches << ','
        << r.wins_a << ',' << r.draws << ',' << rate << '\n';
  }
}

}  // namespace asym
