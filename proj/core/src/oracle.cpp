#include "asym/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "asym/rng.hpp"

namespace asym {

MatrixGame::MatrixGame(std::size_t rows, std::size_t cols, std::vector<double> payoff)
    : rows_(rows), cols_(cols), payoff_(std::move(payoff)) {
  if (rows_ == 0 || cols_ == 0) throw PreconditionError("matrix game needs a row and a column");
  if (payoff_.size() != rows_ * cols_) throw PreconditionError("matrix game payoff size mismatch");
  for (double v : payoff_)
    if (!std::isfinite(v)) throw PreconditionError("matrix game payoff is not finite");
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw PreconditionError("ragged payoff matrix");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

MatrixGame::MatrixGame(const std::vector<std::vector<double>>& rows)
    : MatrixGame(rows.size(), rows.empty() ? 0 : rows.front().size(), flatten(rows)) {}

double MatrixGame::pure_maximin() const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows_; ++r) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cols_; ++c) worst = std::min(worst, (*this)(r, c));
    best = std::max(best, worst);
  }
  return best;
}

double MatrixGame::pure_minimax() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cols_; ++c) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) worst = std::max(worst, (*this)(r, c));
    best = std::min(best, worst);
  }
  return best;
}

ExplosionError::ExplosionError(std::uint64_t rows, std::uint64_t cols, std::uint64_t limit)
    : std::runtime_error("node has " + std::to_string(rows) + " x " + std::to_string(cols) +
                         " joint actions, above the limit of " + std::to_string(limit)),
      rows(rows),
      cols(cols) {}

double best_response_gap(const MatrixGame& g, const GameValueResult& res) {
  double gap = 0.0;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    double v = 0.0;
    for (std::size_t c = 0; c < g.cols(); ++c) v += g(r, c) * res.col_strategy[c];
    gap = std::max(gap, v - res.value);
  }
  for (std::size_t c = 0; c < g.cols(); ++c) {
    double v = 0.0;
    for (std::size_t r = 0; r < g.rows(); ++r) v += g(r, c) * res.row_strategy[r];
    gap = std::max(gap, res.value - v);
  }
  return gap;
}

namespace {

constexpr double kBestResponseTol = 1e-9;

// Iterated removal of weakly dominated rows and columns. Keeps the value
// and, padded with zeros, optimal strategies of the reduced game.
void reduce_dominated(const MatrixGame& g, std::vector<std::size_t>& rows,
                      std::vector<std::size_t>& cols) {
  auto row_dominates = [&](std::size_t a, std::size_t b) {
    for (std::size_t c : cols)
      if (g(a, c) < g(b, c)) return false;
    return true;
  };
  auto col_dominates = [&](std::size_t a, std::size_t b) {
    for (std::size_t r : rows)
      if (g(r, a) > g(r, b)) return false;
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rows.size() && !changed; ++i)
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (i == j || !row_dominates(rows[j], rows[i])) continue;
        // Equal rows: drop the later one only.
        if (row_dominates(rows[i], rows[j]) && j > i) continue;
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    for (std::size_t i = 0; i < cols.size() && !changed; ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (i == j || !col_dominates(cols[j], cols[i])) continue;
        if (col_dominates(cols[i], cols[j]) && j > i) continue;
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
  }
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Solves [M -1; 1' 0] [z; v] = [0; 1] for one side's mixed strategy on a
// square support.
std::optional<std::pair<Eigen::VectorXd, double>> equalizer(const Eigen::MatrixXd& m) {
  const Eigen::Index k = m.rows();
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
  sys.topLeftCorner(k, k) = m;
  sys.topRightCorner(k, 1).setConstant(-1.0);
  sys.bottomLeftCorner(1, k).setConstant(1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  for (Eigen::Index i = 0; i < k; ++i)
    if (sol(i) < -1e-12) return std::nullopt;
  Eigen::VectorXd z = sol.head(k).cwiseMax(0.0);
  z /= z.sum();
  return std::make_pair(z, sol(k));
}

}  // namespace

GameValueResult solve_matrix_game(const MatrixGame& g) {
  const std::size_t m = g.rows(), n = g.cols();
  GameValueResult res;
  res.row_strategy.assign(m, 0.0);
  res.col_strategy.assign(n, 0.0);

  const double lo = g.pure_maximin(), hi = g.pure_minimax();
  if (lo == hi) {
    for (std::size_t r = 0; r < m; ++r) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n; ++c) worst = std::min(worst, g(r, c));
      if (worst == lo) {
        res.row_strategy[r] = 1.0;
        break;
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) worst = std::max(worst, g(r, c));
      if (worst == hi) {
        res.col_strategy[c] = 1.0;
        break;
      }
    }
    res.value = lo;
    return res;
  }

  std::vector<std::size_t> rows(m), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  reduce_dominated(g, rows, cols);

  // A positive shift keeps the value away from zero, so some square
  // support has a nonsingular bordered system.
  double min_payoff = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) min_payoff = std::min(min_payoff, g(r, c));
  const double shift = 1.0 - min_payoff;

  const std::size_t kmax = std::min(rows.size(), cols.size());
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::size_t> ri(k);
    std::iota(ri.begin(), ri.end(), 0);
    do {
      std::vector<std::size_t> ci(k);
      std::iota(ci.begin(), ci.end(), 0);
      do {
        Eigen::MatrixXd sub(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b)
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                g(rows[ri[a]], cols[ci[b]]) + shift;
        auto col = equalizer(sub);
        if (!col) continue;
        auto row = equalizer(sub.transpose());
        if (!row) continue;
        std::fill(res.row_strategy.begin(), res.row_strategy.end(), 0.0);
        std::fill(res.col_strategy.begin(), res.col_strategy.end(), 0.0);
        for (std::size_t a = 0; a < k; ++a) {
          res.row_strategy[rows[ri[a]]] = row->first(static_cast<Eigen::Index>(a));
          res.col_strategy[cols[ci[a]]] = col->first(static_cast<Eigen::Index>(a));
        }
        double v = 0.0;
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < n; ++c)
            v += res.row_strategy[r] * g(r, c) * res.col_strategy[c];
        res.value = v;
        if (best_response_gap(g, res) <= kBestResponseTol) return res;
      } while (next_combination(ci, cols.size()));
    } while (next_combination(ri, rows.size()));
  }
  throw SolverError("support enumeration found no equilibrium");
}

namespace {

bool in_set(std::span<const UnitId> ids, UnitId id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

double value_rec(const GameState& s, const AbstractionSpec& spec, const AbstractionSpec& full,
                 int depth, const GameValueOptions& opts) {
  const Player p = opts.player;
  if (depth == 0 || terminal(s)) return ltd2(s, p);
  if (opts.on_node) opts.on_node(s);
  const ActionSpace rows = action_space(s, p, spec);
  const ActionSpace cols = action_space(s, opponent(p), full);
  if (rows.saturated() || cols.saturated() ||
      (rows.size() > 0 && cols.size() > opts.explosion_limit / rows.size()))
    throw ExplosionError(rows.size(), cols.size(), opts.explosion_limit);

  std::vector<double> payoff;
  payoff.reserve(rows.size() * cols.size());
  for (const PlayerAction& r : rows)
    for (const PlayerAction& c : cols)
      payoff.push_back(value_rec(successor(s, p, r, c), spec, full, depth - 1, opts));
  if (payoff.size() == 1) return payoff.front();
  return solve_matrix_game(MatrixGame(rows.size(), cols.size(), std::move(payoff))).value;
}

}  // namespace

double game_value(const GameState& s, const AbstractionSpec& abstraction, int depth_cap,
                  const GameValueOptions& opts) {
  if (depth_cap < 0) throw PreconditionError("depth cap must be nonnegative");
  const AbstractionSpec full = AbstractionSpec::unabstracted(abstraction.portfolio);
  return value_rec(s, abstraction, full, depth_cap, opts);
}

std::int64_t lemma1_violations(const GameState& s, Player p, const Portfolio& portfolio,
                               std::span<const UnitId> unrestricted) {
  const ActionSpace uni = action_space(s, p, AbstractionSpec::uniform(portfolio));
  const ActionSpace asy = action_space(
      s, p, AbstractionSpec::asymmetric(portfolio, {unrestricted.begin(), unrestricted.end()}));
  const ActionSpace all = action_space(s, p, AbstractionSpec::unabstracted(portfolio));

  std::int64_t violations = 0;
  constexpr std::uint64_t kEnumerationCap = 1u << 16;
  if (all.saturated() || all.size() > kEnumerationCap) {
    // Product sets: inclusion holds iff it holds factor by factor.
    for (std::size_t k = 0; k < all.units().size(); ++k) {
      auto subset = [](const std::vector<Move>& a, const std::vector<Move>& b) {
        return std::all_of(a.begin(), a.end(), [&](Move m) {
          return std::find(b.begin(), b.end(), m) != b.end();
        });
      };
      if (!subset(uni.factor(k), asy.factor(k))) ++violations;
      if (!subset(asy.factor(k), all.factor(k))) ++violations;
    }
    return violations;
  }
  std::unordered_set<PlayerAction, PlayerActionHash> asy_set(asy.begin(), asy.end());
  std::unordered_set<PlayerAction, PlayerActionHash> all_set(all.begin(), all.end());
  for (const PlayerAction& a : uni)
    if (!asy_set.contains(a)) ++violations;
  for (const PlayerAction& a : asy_set)
    if (!all_set.contains(a)) ++violations;
  return violations;
}

Theorem1Report theorem1_check(const GameState& s, const Portfolio& portfolio,
                              std::span<const UnitId> unrestricted, int depth_cap,
                              const GameValueOptions& opts) {
  Theorem1Report rep;
  rep.v_uniform = game_value(s, AbstractionSpec::uniform(portfolio), depth_cap, opts);
  rep.v_asymmetric = game_value(
      s, AbstractionSpec::asymmetric(portfolio, {unrestricted.begin(), unrestricted.end()}),
      depth_cap, opts);
  GameValueOptions full_opts = opts;
  full_opts.on_node = [&](const GameState& node) {
    ++rep.nodes_checked;
    rep.lemma1_violations += lemma1_violations(node, opts.player, portfolio, unrestricted);
    if (opts.on_node) opts.on_node(node);
  };
  rep.v_full = game_value(s, AbstractionSpec::unabstracted(portfolio), depth_cap, full_opts);
  rep.holds = rep.v_asymmetric >= rep.v_uniform - kOracleTolerance &&
              rep.v_full >= rep.v_asymmetric - kOracleTolerance;
  return rep;
}

GameState tiny_instance(std::uint64_t seed, const TinyConfig& config) {
  if (config.units_per_side < 1 || config.units_per_side > 3)
    throw PreconditionError("tiny instances have 1 to 3 units per side");
  auto kinds = shared_default_kinds();
  const KindId choices[] = {kinds->at("Zealot"), kinds->at("Zergling"),
                            kinds->at("Marine")};
  Rng rng(seed);
  const Arena arena{config.arena_width, config.arena_height};
  std::vector<Unit> units;
  const int n = config.units_per_side;
  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < n; ++k) {
      Unit u;
      u.id = side * n + k;
      u.owner = side == 0 ? Player::kFirst : Player::kSecond;
      u.kind = choices[rng.below(3)];
      const UnitKind& kind = (*kinds)[u.kind];
      if (kind.height > arena.height || 2 * kind.width > arena.width)
        throw PreconditionError("tiny arena too small for its units");
      const int half = arena.width / 2;
      const int lo = side == 0 ? kind.width / 2 : half + kind.width / 2;
      const int hi = side == 0 ? half - (kind.width - kind.width / 2)
                               : arena.width - (kind.width - kind.width / 2);
      u.x = static_cast<int>(rng.between(lo, hi));
      u.y = arena.height / 2;
      u.hp = static_cast<int>(rng.between(1, kind.hp0));
      u.cooldown_frame = static_cast<int>(rng.between(0, kind.cooldown));
      u.ready_frame = (k == 0 || rng.below(4) != 0) ? 0 : static_cast<int>(rng.between(1, 4));
      units.push_back(u);
    }
  }
  return GameState(kinds, arena, config.frame_cap, std::move(units));
}

namespace {

struct MftBrute {
  Player p;
  std::span<const UnitId> unrestricted;
  const Portfolio& portfolio;
  const Script& default_script;
  const EvalFn& eval;
  bool restrict_moves;

  bool allowed_free(const GameState& s, const Unit& u, Move m, const DamageLedger& ledger) const {
    if (!restrict_moves) return true;
    for (const Script& sc : portfolio)
      if (sc.policy(s, u, ledger) == m) return true;
    return false;
  }

  // Root and inner children alike: all legal actions, filtered by the
  // required moves of restricted units.
  std::vector<PlayerAction> children(const GameState& s,
                                     const std::function<std::optional<Move>(UnitId)>& fixed,
                                     const DamageLedger& ledger) const {
    std::vector<PlayerAction> out;
    const ActionSpace all = action_space(s, p, AbstractionSpec::unabstracted(portfolio));
    for (const PlayerAction& a : all) {
      bool ok = true;
      for (const UnitMove& um : a) {
        if (in_set(unrestricted, um.unit)) {
          ok = allowed_free(s, *s.find(um.unit), um.move, ledger);
        } else {
          ok = fixed(um.unit) == um.move;
        }
        if (!ok) break;
      }
      if (ok) out.push_back(a);
    }
    return out;
  }

  double value(const GameState& s, int depth) const {
    if (depth == 0 || terminal(s)) return eval(s, p);
    DamageLedger ledger;
    std::vector<std::pair<UnitId, Move>> fixed_moves;
    for (const Unit& u : s.units()) {
      if (u.owner != p || !s.is_ready(u) || in_set(unrestricted, u.id)) continue;
      const Move m = default_script.policy(s, u, ledger);
      if (m.is_attack()) ledger.commit(m.target, s.kind_of(u).damage);
      fixed_moves.emplace_back(u.id, m);
    }
    auto fixed = [&](UnitId id) -> std::optional<Move> {
      for (const auto& [uid, m] : fixed_moves)
        if (uid == id) return m;
      return std::nullopt;
    };
    const PlayerAction theirs = script_action(s, opponent(p), default_script);
    double best = -std::numeric_limits<double>::infinity();
    for (const PlayerAction& a : children(s, fixed, ledger))
      best = std::max(best, value(successor(s, p, a, theirs), depth - 1));
    return best;
  }
};

}  // namespace

BruteForceMft brute_force_mft(const GameState& s, Player p, const PlayerAction& first_action,
                              std::span<const UnitId> unrestricted, const Portfolio& portfolio,
                              const Script& default_script, const EvalFn& eval, int depth,
                              bool restrict_moves) {
  if (depth < 1) throw PreconditionError("brute-force depth must be at least 1");
  MftBrute brute{p, unrestricted, portfolio, default_script, eval, restrict_moves};
  DamageLedger ledger;
  for (const UnitMove& um : first_action)
    if (!in_set(unrestricted, um.unit) && um.move.is_attack())
      ledger.commit(um.move.target, s.kind_of(*s.find(um.unit)).damage);
  auto fixed = [&](UnitId id) -> std::optional<Move> {
    const Move* m = first_action.find(id);
    return m ? std::optional<Move>(*m) : std::nullopt;
  };
  const PlayerAction theirs = script_action(s, opponent(p), default_script);
  BruteForceMft best{first_action, -std::numeric_limits<double>::infinity()};
  bool have = false;
  int best_dev = 0;
  for (const PlayerAction& a : brute.children(s, fixed, ledger)) {
    const double v = brute.value(successor(s, p, a, theirs), depth - 1);
    int dev = 0;
    for (std::size_t j = 0; j < a.size(); ++j) dev += a[j].move != first_action[j].move;
    if (!have || v > best.value || (v == best.value && dev < best_dev)) {
      best = {a, v};
      best_dev = dev;
      have = true;
    }
  }
  return best;
}

}  // namespace asym
