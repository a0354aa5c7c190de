#include <algorithm>
#include <limits>
#include <map>

#include "asym/search.hpp"

namespace asym {

namespace {

std::optional<double> charged_eval(BudgetTracker& budget, const EvalFn& eval,
                                   const GameState& s, Player p, const PlayerAction& mine,
                                   const PlayerAction& theirs, SearchStats& stats,
                                   SearchObserver* observer) {
  auto v = budget.try_eval([&] { return eval(successor(s, p, mine, theirs), p); });
  if (v) {
    ++stats.evals;
    if (observer && observer->on_eval) observer->on_eval(mine, *v);
  }
  return v;
}

// Picks the script whose all-units action scores best for `who` while the
// other side plays NOKAV. Falls back to the first script when the budget runs
// out before any score is known.
std::size_t best_seed_script(const GameState& s, Player who, const Portfolio& portfolio,
                             BudgetTracker& budget, const EvalFn& eval,
                             SearchStats& stats) {
  if (portfolio.size() == 1 || !has_ready_unit(s, who)) return 0;
  const PlayerAction other = script_action(s, opponent(who), nokav_script());
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < portfolio.size(); ++j) {
    const PlayerAction a = script_action(s, who, portfolio[j]);
    auto v = charged_eval(budget, eval, s, who, a, other, stats, nullptr);
    if (!v) break;
    if (*v > best_v) {
      best_v = *v;
      best = j;
    }
  }
  return best;
}

struct Seeds {
  PlayerAction mine;
  PlayerAction theirs;
};

Seeds seed_actions(const GameState& s, Player p, const Portfolio& portfolio,
                   BudgetTracker& budget, const EvalFn& eval, SeedRule rule,
                   SearchStats& stats) {
  if (rule == SeedRule::kNokav) {
    return {script_action(s, p, nokav_script()),
            script_action(s, opponent(p), nokav_script())};
  }
  const std::size_t mine = best_seed_script(s, p, portfolio, budget, eval, stats);
  const std::size_t theirs =
      best_seed_script(s, opponent(p), portfolio, budget, eval, stats);
  return {script_action(s, p, portfolio[mine]),
          script_action(s, opponent(p), portfolio[theirs])};
}

void require_actor(const GameState& s, Player p) {
  if (!has_ready_unit(s, p))
    throw PreconditionError(std::string("player ") + std::string(to_string(p)) +
                            " has no ready unit");
}

// Candidate moves for the k-th entry of `current`: every script's move given
// the other entries' committed damage, or every legal move when unrestricted.
void unit_candidates(const GameState& s, const PlayerAction& current, std::size_t k,
                     const Portfolio& portfolio, bool unrestricted, DamageLedger& ledger,
                     std::vector<Move>& out) {
  out.clear();
  const Unit& u = *s.find(current[k].unit);
  if (unrestricted) {
    append_legal_moves(s, u, out);
    return;
  }
  fill_ledger(s, current, k, ledger);
  for (const Script& sc : portfolio) out.push_back(sc.policy(s, u, ledger));
}

// Greedy improvement loop shared by PGS and GAS.
FirstStepResult unit_hill_climb(const GameState& s, Player p, const Portfolio& portfolio,
                                BudgetTracker& budget, const EvalFn& eval,
                                std::span<const UnitId> unrestricted,
                                const HillClimbOptions& opts) {
  require_actor(s, p);
  FirstStepResult r;
  Seeds seeds = seed_actions(s, p, portfolio, budget, eval, opts.seed, r.stats);
  r.action = std::move(seeds.mine);
  r.opponent_action = std::move(seeds.theirs);

  auto finish = [&](bool local_max) {
    r.hit_local_max = local_max;
    r.remaining = budget.remaining();
    return std::move(r);
  };

  r.value = charged_eval(budget, eval, s, p, r.action, r.opponent_action, r.stats,
                         opts.observer);
  if (!r.value) return finish(false);

  DamageLedger ledger;
  std::vector<Move> moves;
  while (true) {
    ++r.stats.passes;
    bool changed = false;
    for (std::size_t k = 0; k < r.action.size(); ++k) {
      if (k > 0 && budget.exhausted()) return finish(false);
      const bool free = std::find(unrestricted.begin(), unrestricted.end(),
                                  r.action[k].unit) != unrestricted.end();
      unit_candidates(s, r.action, k, portfolio, free, ledger, moves);
      for (Move m : moves) {
        ++r.stats.candidates;
        if (m == r.action[k].move) continue;
        PlayerAction candidate = r.action;
        candidate.set(k, m);
        auto v = charged_eval(budget, eval, s, p, candidate, r.opponent_action, r.stats,
                              opts.observer);
        if (!v) return finish(false);
        if (*v > *r.value) {
          r.action = std::move(candidate);
          r.value = v;
          changed = true;
        }
      }
    }
    if (!changed) return finish(true);
    if (budget.exhausted()) return finish(false);
  }
}

}  // namespace

FirstStepResult pgs(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, const HillClimbOptions& opts) {
  return unit_hill_climb(s, p, portfolio, budget, eval, {}, opts);
}

FirstStepResult pgs(const GameState& s, Player p, const Portfolio& portfolio,
                    SearchBudget budget, const EvalFn& eval) {
  BudgetTracker tracker(budget);
  return pgs(s, p, portfolio, tracker, eval);
}

FirstStepResult gas(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval,
                    std::span<const UnitId> unrestricted, const HillClimbOptions& opts) {
  return unit_hill_climb(s, p, portfolio, budget, eval, unrestricted, opts);
}

FirstStepResult sss(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, const TypeSystem& types,
                    SearchObserver* observer) {
  require_actor(s, p);
  FirstStepResult r;
  r.action = script_action(s, p, nokav_script());
  r.opponent_action = script_action(s, opponent(p), nokav_script());

  auto finish = [&](bool local_max) {
    r.hit_local_max = local_max;
    r.remaining = budget.remaining();
    return std::move(r);
  };

  // Entry indices of the action grouped by type label, labels ascending.
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < r.action.size(); ++k)
    groups[types.typing(s, *s.find(r.action[k].unit))].push_back(k);

  r.value = charged_eval(budget, eval, s, p, r.action, r.opponent_action, r.stats, observer);
  if (!r.value) return finish(false);

  DamageLedger ledger;
  while (true) {
    ++r.stats.passes;
    bool changed = false;
    bool first_group = true;
    for (const auto& [label, members] : groups) {
      if (!first_group && budget.exhausted()) return finish(false);
      first_group = false;
      for (const Script& sc : portfolio) {
        ++r.stats.candidates;
        PlayerAction candidate = r.action;
        ledger.clear();
        for (std::size_t k = 0; k < candidate.size(); ++k) {
          if (std::find(members.begin(), members.end(), k) != members.end()) continue;
          if (candidate[k].move.is_attack())
            ledger.commit(candidate[k].move.target, s.kind_of(*s.find(candidate[k].unit)).damage);
        }
        for (std::size_t k : members) {
          const Unit& u = *s.find(candidate[k].unit);
          const Move m = sc.policy(s, u, ledger);
          if (m.is_attack()) ledger.commit(m.target, s.kind_of(u).damage);
          candidate.set(k, m);
        }
        if (candidate == r.action) continue;
        auto v = charged_eval(budget, eval, s, p, candidate, r.opponent_action, r.stats,
                              observer);
        if (!v) return finish(false);
        if (*v > *r.value) {
          r.action = std::move(candidate);
          r.value = v;
          changed = true;
        }
      }
    }
    if (!changed) return finish(true);
    if (budget.exhausted()) return finish(false);
  }
}

FirstStepResult sss(const GameState& s, Player p, const Portfolio& portfolio,
                    SearchBudget budget, const EvalFn& eval, const TypeSystem& types) {
  BudgetTracker tracker(budget);
  return sss(s, p, portfolio, tracker, eval, types);
}

}  // namespace asym
