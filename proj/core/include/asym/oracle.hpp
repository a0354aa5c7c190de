#pragma once

// Exact values of tiny combats: a zero-sum matrix-game solver, backward
// induction under an action abstraction and the abstraction-ordering checks.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asym/abstraction.hpp"
#include "asym/engine.hpp"
#include "asym/scripts.hpp"
#include "asym/search.hpp"

namespace asym {

inline constexpr std::uint64_t kExplosionLimit = 512;
inline constexpr double kOracleTolerance = 1e-6;

// Payoffs to the row player, row-major.
class MatrixGame {
 public:
  MatrixGame(std::size_t rows, std::size_t cols, std::vector<double> payoff);
  explicit MatrixGame(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return payoff_[r * cols_ + c]; }

  double pure_maximin() const;
  double pure_minimax() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> payoff_;
};

struct GameValueResult {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a node has more joint actions than the explosion limit.
class ExplosionError : public std::runtime_error {
 public:
  ExplosionError(std::uint64_t rows, std::uint64_t cols, std::uint64_t limit);
  std::uint64_t rows;
  std::uint64_t cols;
};

// Value and optimal mixed strategies; strategies are mutual best responses
// within 1e-9.
GameValueResult solve_matrix_game(const MatrixGame& game);

// Largest regret of either strategy in `result` against pure deviations.
double best_response_gap(const MatrixGame& game, const GameValueResult& result);

struct GameValueOptions {
  Player player = Player::kFirst;
  std::uint64_t explosion_limit = kExplosionLimit;
  // Called on every non-leaf node before its matrix is built.
  std::function<void(const GameState&)> on_node;
};

// Backward induction over depth_cap transitions: player rows are restricted
// by `abstraction`, the opponent keeps every legal action.
double game_value(const GameState& s, const AbstractionSpec& abstraction, int depth_cap,
                  const GameValueOptions& opts = {});

struct Theorem1Report {
  double v_uniform = 0.0;
  double v_asymmetric = 0.0;
  double v_full = 0.0;
  bool holds = false;
  std::int64_t nodes_checked = 0;
  std::int64_t lemma1_violations = 0;
};

Theorem1Report theorem1_check(const GameState& s, const Portfolio& portfolio,
                              std::span<const UnitId> unrestricted, int depth_cap,
                              const GameValueOptions& opts = {});

// Enumerates all three action sets for p at s and counts failures of
// uniform <= asymmetric <= full (as sets of actions).
std::int64_t lemma1_violations(const GameState& s, Player p, const Portfolio& portfolio,
                               std::span<const UnitId> unrestricted);

struct TinyConfig {
  int units_per_side = 2;
  int arena_width = 160;
  int arena_height = 40;
  int frame_cap = 400;
};

// Small corridor combat whose height forbids vertical moves. Kinds are
// drawn among Zealot, Zergling and Marine; positions and initial hp are
// randomized.
GameState tiny_instance(std::uint64_t seed, const TinyConfig& config = {});

// Exhaustive search of the move-fixed tree to `depth` decision points.
// Ties go to the root action with the fewest units deviating from
// first_action, then to the lexicographically smallest.
struct BruteForceMft {
  PlayerAction action;
  double value = 0.0;
};
BruteForceMft brute_force_mft(const GameState& s, Player p, const PlayerAction& first_action,
                              std::span<const UnitId> unrestricted, const Portfolio& portfolio,
                              const Script& default_script, const EvalFn& eval, int depth,
                              bool restrict_moves = false);

}  // namespace asym
