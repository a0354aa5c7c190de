#include <limits>

#include "asym/search.hpp"

namespace asym {

double evaluate(const GameState& s, Player p, int steps) {
  thread_local PlayerAction first, second;
  thread_local DamageLedger ledger;
  GameState g = s;
  for (int i = 0; i < steps && !terminal(g); ++i) {
    script_action_into(g, Player::kFirst, &nokav_policy, first, ledger);
    script_action_into(g, Player::kSecond, &nokav_policy, second, ledger);
    apply_in_place(g, first, second);
  }
  return ltd2(g, p);
}

EvalFn playout_evaluator(int steps) {
  return [steps](const GameState& s, Player p) { return evaluate(s, p, steps); };
}

EvalFn ltd2_evaluator() {
  return [](const GameState& s, Player p) { return ltd2(s, p); };
}

GameState successor(const GameState& s, Player p, const PlayerAction& mine,
                    const PlayerAction& theirs) {
  GameState next = s;
  if (p == Player::kFirst) {
    apply_in_place(next, mine, theirs);
  } else {
    apply_in_place(next, theirs, mine);
  }
  return next;
}

TypeSystem kind_hp_types() {
  return {"kind_hp", [](const GameState& s, const Unit& u) {
            const bool healthy = 2 * u.hp >= s.kind_of(u).hp0;
            return 2 * static_cast<int>(u.kind) + (healthy ? 0 : 1);
          }};
}

TypeSystem kind_types() {
  return {"kind", [](const GameState&, const Unit& u) { return static_cast<int>(u.kind); }};
}

TypeSystem per_unit_types() {
  return {"unit", [](const GameState&, const Unit& u) { return static_cast<int>(u.id); }};
}

TypeSystem single_type() {
  return {"single", [](const GameState&, const Unit&) { return 0; }};
}

TypeSystem type_system_by_name(std::string_view name) {
  if (name == "kind_hp") return kind_hp_types();
  if (name == "kind") return kind_types();
  if (name == "unit") return per_unit_types();
  if (name == "single") return single_type();
  throw ConfigError("unknown type system '" + std::string(name) + "'");
}

}  // namespace asym
