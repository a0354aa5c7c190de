#include <algorithm>
#include <limits>
#include <numeric>

#include "asym/search.hpp"

namespace asym {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMaxOrderedRoot = 1u << 20;

int deviations(const PlayerAction& a, const PlayerAction& first) {
  int n = 0;
  for (std::size_t j = 0; j < a.size(); ++j) n += a[j].move != first[j].move;
  return n;
}

class MoveFixedTree {
 public:
  MoveFixedTree(Player p, std::vector<UnitId> unrestricted, const Portfolio& portfolio,
                const Script& default_script, BudgetTracker& budget, const EvalFn& eval,
                const MftOptions& opts, SearchStats& stats)
      : p_(p),
        unrestricted_(std::move(unrestricted)),
        portfolio_(portfolio),
        default_script_(default_script),
        budget_(budget),
        eval_(eval),
        opts_(opts),
        stats_(stats) {}

  bool is_unrestricted(UnitId id) const {
    return std::binary_search(unrestricted_.begin(), unrestricted_.end(), id);
  }

  std::vector<Move> free_moves(const GameState& s, const Unit& u, const DamageLedger& ledger) const {
    std::vector<Move> f;
    if (opts_.restrict_moves) {
      for (const Script& sc : portfolio_) f.push_back(sc.policy(s, u, ledger));
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
    } else {
      append_legal_moves(s, u, f);
    }
    return f;
  }

  // Root actions: restricted units keep their first-step move.
  ActionSpace root_space(const GameState& s, const PlayerAction& first) const {
    DamageLedger ledger;
    for (const UnitMove& um : first) {
      if (!is_unrestricted(um.unit) && um.move.is_attack())
        ledger.commit(um.move.target, s.kind_of(*s.find(um.unit)).damage);
    }
    std::vector<UnitId> units;
    std::vector<std::vector<Move>> factors;
    for (const UnitMove& um : first) {
      units.push_back(um.unit);
      if (is_unrestricted(um.unit)) {
        factors.push_back(free_moves(s, *s.find(um.unit), ledger));
      } else {
        factors.push_back({um.move});
      }
    }
    return ActionSpace(std::move(units), std::move(factors));
  }

  // Below the root: restricted units follow the default script.
  ActionSpace inner_space(const GameState& s) const {
    DamageLedger ledger;
    std::vector<UnitId> units;
    std::vector<std::vector<Move>> factors;
    for (const Unit& u : s.units()) {
      if (u.owner != p_ || !s.is_ready(u)) continue;
      units.push_back(u.id);
      if (is_unrestricted(u.id)) {
        factors.emplace_back();
      } else {
        const Move m = default_script_.policy(s, u, ledger);
        if (m.is_attack()) ledger.commit(m.target, s.kind_of(u).damage);
        factors.push_back({m});
      }
    }
    for (std::size_t k = 0; k < units.size(); ++k) {
      if (factors[k].empty()) factors[k] = free_moves(s, *s.find(units[k]), ledger);
    }
    return ActionSpace(std::move(units), std::move(factors));
  }

  PlayerAction opponent_action(const GameState& s) const {
    return script_action(s, opponent(p_), default_script_);
  }

  // Max value reachable from s within `depth` further decision points, or
  // nullopt when the budget ran out.
  std::optional<double> value(const GameState& s, int depth) {
    if (depth == 0 || terminal(s)) {
      if (depth == 0 && !terminal(s)) cut_off_ = true;
      return leaf(s);
    }
    const PlayerAction theirs = opponent_action(s);
    const ActionSpace space = inner_space(s);
    double best = kNegInf;
    for (const PlayerAction& a : space) {
      ++stats_.candidates;
      auto v = value(successor(s, p_, a, theirs), depth - 1);
      if (!v) return std::nullopt;
      best = std::max(best, *v);
    }
    return best;
  }

  std::optional<double> leaf(const GameState& s) {
    auto v = budget_.try_eval([&] { return eval_(s, p_); });
    if (v) ++stats_.evals;
    return v;
  }

  bool cut_off() const { return cut_off_; }
  void reset_cut_off() { cut_off_ = false; }

 private:
  Player p_;
  std::vector<UnitId> unrestricted_;
  const Portfolio& portfolio_;
  const Script& default_script_;
  BudgetTracker& budget_;
  const EvalFn& eval_;
  const MftOptions& opts_;
  SearchStats& stats_;
  bool cut_off_ = false;
};

}  // namespace

MftResult abcd_mft(const GameState& s, Player p, const PlayerAction& first_action,
                   std::span<const UnitId> unrestricted, const Portfolio& portfolio,
                   const Script& default_script, BudgetTracker& budget,
                   const EvalFn& eval, const MftOptions& opts) {
  MftResult result;
  result.action = first_action;

  std::vector<UnitId> free;
  for (UnitId id : unrestricted)
    if (first_action.find(id)) free.push_back(id);
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  if (free.empty()) return result;

  MoveFixedTree tree(p, std::move(free), portfolio, default_script, budget, eval, opts,
                     result.stats);
  const ActionSpace root = tree.root_space(s, first_action);
  const PlayerAction theirs = tree.opponent_action(s);
  if (root.saturated()) return result;

  // First iteration: actions ordered by how many units deviate from the
  // first-step action, so a cut-short iteration still covers its neighbours.
  // Later iterations go best-first by the previous values.
  std::vector<std::uint64_t> order;
  bool covers_root = true;
  if (root.size() <= kMaxOrderedRoot) {
    order.resize(root.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint8_t> changes(root.size(), 0);
    for (std::uint64_t k = 0; k < root.size(); ++k)
      changes[k] = static_cast<std::uint8_t>(deviations(root[k], first_action));
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
      return changes[a] < changes[b];
    });
  } else {
    // Too many to list: the first-step action and its single-unit deviations.
    covers_root = false;
    std::vector<std::uint64_t> digit(first_action.size(), 0), stride(first_action.size(), 1);
    std::uint64_t base = 0;
    for (std::size_t j = first_action.size(); j-- > 0;) {
      const auto& f = root.factor(j);
      const auto it = std::find(f.begin(), f.end(), first_action[j].move);
      digit[j] = it == f.end() ? 0 : static_cast<std::uint64_t>(it - f.begin());
      if (j + 1 < first_action.size()) stride[j] = stride[j + 1] * root.factor(j + 1).size();
    }
    for (std::size_t j = 0; j < first_action.size(); ++j) base += digit[j] * stride[j];
    order.push_back(base);
    for (std::size_t j = 0; j < first_action.size(); ++j)
      for (std::uint64_t d = 0; d < root.factor(j).size(); ++d)
        if (d != digit[j]) order.push_back(base - digit[j] * stride[j] + d * stride[j]);
  }

  std::vector<double> values(order.size(), kNegInf);
  for (int depth = 1; depth <= opts.max_depth; ++depth) {
    tree.reset_cut_off();
    std::uint64_t best_index = 0;
    double best_value = kNegInf;
    int best_dev = 0;
    bool have_best = false;
    bool complete = true;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::uint64_t idx = order[pos];
      const PlayerAction a = root[idx];
      ++result.stats.candidates;
      auto v = tree.value(successor(s, p, a, theirs), depth - 1);
      if (!v) {
        complete = false;
        break;
      }
      values[pos] = *v;
      if (opts.observer && opts.observer->on_eval) opts.observer->on_eval(a, *v);
      const int dev = deviations(a, first_action);
      if (!have_best || *v > best_value ||
          (*v == best_value && (dev < best_dev || (dev == best_dev && idx < best_index)))) {
        best_index = idx;
        best_value = *v;
        best_dev = dev;
        have_best = true;
      }
    }
    if (!complete || !covers_root) {
      // Anytime answer from a partial first iteration.
      if ((depth == 1 || !covers_root) && have_best) {
        result.action = root[best_index];
        result.value = best_value;
      }
      break;
    }
    result.action = root[best_index];
    result.value = best_value;
    result.completed_depth = depth;
    if (!tree.cut_off()) {
      result.tree_exhausted = true;
      break;
    }
    std::vector<std::size_t> perm(order.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::uint64_t> reordered(order.size());
    for (std::size_t k = 0; k < perm.size(); ++k) reordered[k] = order[perm[k]];
    order = std::move(reordered);
  }
  return result;
}

}  // namespace asym
