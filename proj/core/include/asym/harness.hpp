#pragma once

// Scenario generation, agents, matches, replays and tournaments.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asym/abstraction.hpp"
#include "asym/engine.hpp"
#include "asym/scripts.hpp"
#include "asym/search.hpp"

namespace asym {

struct ScenarioConfig {
  std::string name;
  std::vector<std::string> kinds;  // names or abbreviations, e.g. {"Zl", "Dg"}
  int units_per_side = 8;
  Arena arena;
  int placement_jitter = 128;
  int separation_offset = 220;
  int frame_cap = kDefaultFrameCap;
  std::uint64_t seed = 0;
  std::shared_ptr<const KindTable> table = shared_default_kinds();
};

// zl8, dg8, zldg8, zldglg6, all8 and zl50 (units per side in the suffix).
ScenarioConfig scenario_preset(std::string_view name);
std::vector<std::string> preset_names();
// The five smallest configurations used for the desk-scale tournament.
std::vector<std::string> desk_scale_presets();

// First player's units at random offsets right of the arena center, the
// second player's at the mirrored positions, then both pushed apart by the
// separation offset. First player ids are 0..n-1, second n..2n-1, and unit
// n+k mirrors unit k. Throws ConfigError when the units cannot fit.
GameState generate_scenario(const ScenarioConfig& config);

struct AgentConfig {
  Portfolio portfolio = default_portfolio();
  SelectionStrategy selection = SelectionStrategy::kMoreAttackValue;
  int unrestricted_n = 4;
  std::string type_system = "kind_hp";
  int playout_steps = kPlayoutSteps;
  int max_depth = 32;
};

struct Decision {
  PlayerAction action;
  std::optional<double> value;
  std::int64_t evals = 0;
  bool ran_second_step = false;
  bool chose_second = false;
  double second_step_ms = 0.0;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // p has at least one ready unit at s.
  virtual Decision decide(const GameState& s, Player p, const SearchBudget& budget) = 0;
};

// pgs | sss | gas | gab | sab | gab_p | sab_p | script:<name>. Throws
// ConfigError on an unknown name.
std::unique_ptr<Agent> make_agent(std::string_view name, const AgentConfig& config,
                                  std::uint64_t seed);
std::vector<std::string> agent_names();

enum class Outcome { kWinFirst, kWinSecond, kDraw };
std::string_view to_string(Outcome o);
Outcome parse_outcome(std::string_view text);

struct TransitionLog {
  int frame = 0;
  PlayerAction first;
  PlayerAction second;
  std::optional<double> eval_first;
  std::optional<double> eval_second;
  double ms_first = 0.0;
  double ms_second = 0.0;
};

struct MatchRecord {
  std::uint64_t seed = 0;
  std::string scenario;
  std::string agent_first;
  std::string agent_second;
  SearchBudget budget;
  GameState initial;
  std::vector<TransitionLog> transitions;
  GameState final_state;
  Outcome outcome = Outcome::kDraw;
  double final_ltd2 = 0.0;
  std::optional<Player> forfeit;
  // Decision latencies in milliseconds, both players pooled.
  std::vector<double> latencies_ms;
  // Second-step wall time per decision of each side's agent.
  std::vector<double> second_step_ms[2];
};

struct MatchOptions {
  bool forfeit_enabled = true;
  double forfeit_slack_ms = 50.0;
  bool keep_log = true;
};

// Plays the two agents against each other from `scenario` until a terminal
// state or a forfeit.
MatchRecord run_match(Agent& first, Agent& second, const GameState& scenario,
                      const SearchBudget& budget, const MatchOptions& options = {});

Outcome outcome_of(const GameState& terminal_state);

// Newline-delimited JSON: a header record, one record per transition and a
// result record.
void write_replay(std::ostream& out, const MatchRecord& record);
MatchRecord read_replay(std::istream& in);
// Re-applies the logged actions to the logged initial state; true iff the
// reached state equals the logged final state.
bool verify_replay(const MatchRecord& record);
void print_replay(std::ostream& out, const MatchRecord& record);

struct Pairing {
  std::string agent_a;
  std::string agent_b;
};

struct TournamentConfig {
  std::vector<ScenarioConfig> scenarios;
  std::vector<Pairing> pairings;
  AgentConfig agent;
  SearchBudget budget = SearchBudget::wall_clock_ms(40);
  MatchOptions match;
  int matches = 200;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: ASYM_WORKERS or hardware concurrency
  std::optional<double> deadline_s;  // stop scheduling matches after this
};

// INI sections [scenario], [agents], [budget], [tournament].
TournamentConfig parse_tournament_config(std::istream& in);
TournamentConfig load_tournament_config(const std::filesystem::path& path);
int resolve_workers(int requested);

struct PairingResult {
  std::string scenario;
  std::string agent_a;
  std::string agent_b;
  int matches = 0;
  int wins_a = 0;
  int wins_b = 0;
  int draws = 0;
  int errors = 0;
  double rate_a = 0.0;  // (wins_a + draws / 2) / matches
  bool partial = false;
  double mean_second_step_ms_a = 0.0;
  double mean_second_step_ms_b = 0.0;
};

struct TournamentResult {
  std::vector<PairingResult> rows;
  double wall_seconds = 0.0;
  int matches_played = 0;
  int matches_scheduled = 0;
  std::vector<double> latencies_ms;
};

using ProgressFn = std::function<void(int done, int total)>;

TournamentResult run_tournament(const TournamentConfig& config, ProgressFn progress = {});
void write_results_csv(std::ostream& out, const TournamentResult& result);

// Seed of match m (0-based) of a pairing; matches 2k and 2k+1 share a
// scenario and swap sides.
std::uint64_t match_seed(std::uint64_t master, std::size_t scenario, std::size_t pairing,
                         int match);

}  // namespace asym
