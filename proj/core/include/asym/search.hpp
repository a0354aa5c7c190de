#pragma once

// Real-time decision procedures: the playout evaluation, portfolio greedy
// search and its stratified / asymmetric variants, the move-fixed-tree
// alpha-beta search and the two-step searches built on top of them.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asym/abstraction.hpp"
#include "asym/engine.hpp"
#include "asym/scripts.hpp"

namespace asym {

inline constexpr int kPlayoutSteps = 100;

struct SearchBudget {
  enum class Mode { kWallClock, kNodeCount };

  Mode mode = Mode::kNodeCount;
  std::int64_t limit = 0;  // milliseconds or evaluation calls

  static SearchBudget wall_clock_ms(std::int64_t ms) { return {Mode::kWallClock, ms}; }
  static SearchBudget node_count(std::int64_t evals) { return {Mode::kNodeCount, evals}; }
};

std::string to_string(const SearchBudget& b);

// Tracks spending against a SearchBudget. In node-count mode every evaluation
// call costs one unit. In wall-clock mode an evaluation is refused when the
// running mean evaluation time would push the search past the limit.
class BudgetTracker {
 public:
  explicit BudgetTracker(SearchBudget budget);

  const SearchBudget& budget() const { return budget_; }
  bool exhausted() const;
  std::int64_t evals() const { return evals_; }
  double elapsed_ms() const;
  // Evaluations (node count) or whole milliseconds (wall clock) left.
  std::int64_t remaining() const;

  // Holds back room for `evals` more evaluations from exhausted().
  void reserve(int evals) { reserved_ = evals; }
  void release() { reserved_ = 0; }

  // Runs fn(state) if the budget allows; records the spend.
  template <typename Fn>
  std::optional<double> try_eval(Fn&& fn) {
    if (exhausted()) return std::nullopt;
    const auto t0 = std::chrono::steady_clock::now();
    const double v = fn();
    eval_ms_total_ += std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    ++evals_;
    return v;
  }

 private:
  double mean_eval_ms() const { return evals_ ? eval_ms_total_ / static_cast<double>(evals_) : 0.0; }

  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t evals_ = 0;
  int reserved_ = 0;
  double eval_ms_total_ = 0.0;
};

// Value of a state for a player; larger is better for that player.
using EvalFn = std::function<double(const GameState&, Player)>;

// Plays NOKAV against NOKAV for up to `steps` transitions (stopping early on
// terminal states) and returns the LTD2 of the reached state for p.
double evaluate(const GameState& s, Player p = Player::kFirst, int steps = kPlayoutSteps);
EvalFn playout_evaluator(int steps = kPlayoutSteps);
EvalFn ltd2_evaluator();

// Successor after p plays `mine` and the opponent plays `theirs`.
GameState successor(const GameState& s, Player p, const PlayerAction& mine,
                    const PlayerAction& theirs);

struct TypeSystem {
  std::string name;
  std::function<int(const GameState&, const Unit&)> typing;
};

// Unit kind crossed with "hp at least half of hp0": two labels per kind.
TypeSystem kind_hp_types();
TypeSystem kind_types();
TypeSystem per_unit_types();
TypeSystem single_type();
// "kind_hp", "kind", "unit", "single"; throws ConfigError otherwise.
TypeSystem type_system_by_name(std::string_view name);

struct SearchStats {
  std::int64_t evals = 0;
  std::int64_t candidates = 0;
  int passes = 0;
};

// Optional hooks used by tests to watch which actions a search evaluates.
struct SearchObserver {
  std::function<void(const PlayerAction&, double)> on_eval;
};

struct FirstStepResult {
  PlayerAction action;
  PlayerAction opponent_action;  // held fixed during the improvement loop
  std::optional<double> value;   // eval(successor(s, action, opponent_action))
  bool hit_local_max = false;
  std::int64_t remaining = 0;
  SearchStats stats;
};

enum class SeedRule {
  kBestScript,  // argmax over the portfolio against a NOKAV opponent
  kNokav,
};

struct HillClimbOptions {
  SeedRule seed = SeedRule::kBestScript;
  SearchObserver* observer = nullptr;
};

// Portfolio greedy search. Throws PreconditionError if p has no ready unit.
FirstStepResult pgs(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval,
                    const HillClimbOptions& opts = {});
FirstStepResult pgs(const GameState& s, Player p, const Portfolio& portfolio,
                    SearchBudget budget, const EvalFn& eval);

// Stratified strategy selection: NOKAV seeds, improvement over type labels.
FirstStepResult sss(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, const TypeSystem& types,
                    SearchObserver* observer = nullptr);
FirstStepResult sss(const GameState& s, Player p, const Portfolio& portfolio,
                    SearchBudget budget, const EvalFn& eval, const TypeSystem& types);

// Greedy asymmetric search: PGS whose candidates for unrestricted units are
// all their legal moves.
FirstStepResult gas(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval,
                    std::span<const UnitId> unrestricted,
                    const HillClimbOptions& opts = {});

struct MftOptions {
  bool restrict_moves = false;  // script moves only for unrestricted units
  int max_depth = 32;           // in decision points
  SearchObserver* observer = nullptr;
};

struct MftResult {
  PlayerAction action;
  int completed_depth = 0;
  std::optional<double> value;  // value of `action` at completed_depth
  bool tree_exhausted = false;  // deeper iterations cannot change the result
  SearchStats stats;
};

// Iterative-deepening search over the move-fixed tree rooted at s. Restricted
// units are fixed to first_action at the root and to default_script below it;
// the opponent always plays default_script.
MftResult abcd_mft(const GameState& s, Player p, const PlayerAction& first_action,
                   std::span<const UnitId> unrestricted, const Portfolio& portfolio,
                   const Script& default_script, BudgetTracker& budget,
                   const EvalFn& eval, const MftOptions& opts = {});

struct TwoStepOptions {
  bool restrict_moves = false;  // the _P variants
  int max_depth = 32;
};

struct TwoStepResult {
  PlayerAction action;
  FirstStepResult first;
  std::vector<UnitId> unrestricted;
  bool ran_second_step = false;
  bool chose_second = false;
  std::optional<PlayerAction> second_action;
  int second_step_depth = 0;
  double second_step_ms = 0.0;
  std::optional<double> value;  // eval of the returned action vs. first.opponent_action
};

TwoStepResult gab(const GameState& s, Player p, const Portfolio& portfolio,
                  BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                  const TwoStepOptions& opts = {});
TwoStepResult sab(const GameState& s, Player p, const Portfolio& portfolio,
                  BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                  const TypeSystem& types, const TwoStepOptions& opts = {});
TwoStepResult gab_p(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, SelectionState& selection);
TwoStepResult sab_p(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                    const TypeSystem& types);

}  // namespace asym
