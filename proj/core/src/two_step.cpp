#include <algorithm>
#include <chrono>

#include "asym/search.hpp"

namespace asym {

namespace {

std::vector<UnitId> ready_subset(const GameState& s, std::vector<UnitId> ids) {
  std::erase_if(ids, [&](UnitId id) {
    const Unit* u = s.find(id);
    return !u || !s.is_ready(*u);
  });
  return ids;
}

TwoStepResult second_step(const GameState& s, Player p, const Portfolio& portfolio,
                          BudgetTracker& budget, const EvalFn& eval,
                          std::vector<UnitId> unrestricted, FirstStepResult first,
                          const TwoStepOptions& opts) {
  TwoStepResult r;
  r.action = first.action;
  r.value = first.value;
  r.unrestricted = std::move(unrestricted);
  r.first = std::move(first);
  if (!r.first.hit_local_max || r.unrestricted.empty() || budget.exhausted()) return r;

  const auto t0 = std::chrono::steady_clock::now();
  r.ran_second_step = true;
  // Keep one evaluation back for scoring the second-step action.
  budget.reserve(1);
  MftOptions mft_opts;
  mft_opts.restrict_moves = opts.restrict_moves;
  mft_opts.max_depth = opts.max_depth;
  const Script nokav = nokav_script();
  MftResult mft = abcd_mft(s, p, r.first.action, r.unrestricted, portfolio, nokav, budget,
                           eval, mft_opts);
  budget.release();
  r.second_step_depth = mft.completed_depth;
  r.second_action = mft.action;

  if (mft.action != r.first.action) {
    auto v2 = budget.try_eval(
        [&] { return eval(successor(s, p, mft.action, r.first.opponent_action), p); });
    if (v2 && !(*r.first.value > *v2)) {
      r.action = mft.action;
      r.value = v2;
      r.chose_second = true;
    }
  }
  r.second_step_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

TwoStepResult gab(const GameState& s, Player p, const Portfolio& portfolio,
                  BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                  const TwoStepOptions& opts) {
  auto unrestricted = ready_subset(s, select_unrestricted(s, p, selection));
  FirstStepResult first = pgs(s, p, portfolio, budget, eval);
  return second_step(s, p, portfolio, budget, eval, std::move(unrestricted), std::move(first),
                     opts);
}

TwoStepResult sab(const GameState& s, Player p, const Portfolio& portfolio,
                  BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                  const TypeSystem& types, const TwoStepOptions& opts) {
  auto unrestricted = ready_subset(s, select_unrestricted(s, p, selection));
  FirstStepResult first = sss(s, p, portfolio, budget, eval, types);
  return second_step(s, p, portfolio, budget, eval, std::move(unrestricted), std::move(first),
                     opts);
}

TwoStepResult gab_p(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, SelectionState& selection) {
  TwoStepOptions opts;
  opts.restrict_moves = true;
  return gab(s, p, portfolio, budget, eval, selection, opts);
}

TwoStepResult sab_p(const GameState& s, Player p, const Portfolio& portfolio,
                    BudgetTracker& budget, const EvalFn& eval, SelectionState& selection,
                    const TypeSystem& types) {
  TwoStepOptions opts;
  opts.restrict_moves = true;
  return sab(s, p, portfolio, budget, eval, selection, types, opts);
}

}  // namespace asym
