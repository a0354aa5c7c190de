#include "asym/scripts.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <unordered_set>

namespace asym {

void DamageLedger::commit(UnitId target, int damage) {
  if (target < 0) return;
  const auto k = static_cast<std::size_t>(target);
  if (k >= damage_.size()) damage_.resize(k + 1, 0);
  if (damage_[k] == 0) touched_.push_back(target);
  damage_[k] += damage;
}

void DamageLedger::clear() {
  for (UnitId t : touched_) damage_[static_cast<std::size_t>(t)] = 0;
  touched_.clear();
}

namespace {

long squared_distance(int ax, int ay, int bx, int by) {
  const long dx = static_cast<long>(ax) - bx;
  const long dy = static_cast<long>(ay) - by;
  return dx * dx + dy * dy;
}

bool doomed(const Unit& t, const DamageLedger& ledger) {
  return t.hp - ledger.committed(t.id) <= 0;
}

// In-range, not-yet-doomed enemy with the highest dpf/hp; lowest id on ties.
const Unit* no_overkill_target(const GameState& s, const Unit& u,
                               const DamageLedger& ledger) {
  const Unit* best = nullptr;
  double best_av = -1.0;
  for (const Unit& t : s.units()) {
    if (t.owner == u.owner || doomed(t, ledger) || !in_range(s, u, t)) continue;
    const double av = attack_value(s, t);
    if (av > best_av) {
      best = &t;
      best_av = av;
    }
  }
  return best;
}

const Unit* closest_enemy(const GameState& s, const Unit& u, const DamageLedger* ledger) {
  const Unit* best = nullptr;
  long best_d = LONG_MAX;
  for (const Unit& t : s.units()) {
    if (t.owner == u.owner || (ledger && doomed(t, *ledger))) continue;
    const long d = squared_distance(u.x, u.y, t.x, t.y);
    if (d < best_d) {
      best = &t;
      best_d = d;
    }
  }
  return best;
}

// Legal directional move that strictly improves the squared distance to
// `target` the most (closer when toward, farther otherwise); U > D > L > R on
// ties. Wait when no move improves it.
Move step_relative(const GameState& s, const Unit& u, const Unit& target, bool toward) {
  const UnitKind& k = s.kind_of(u);
  const int step = k.speed * kMoveFrames;
  long best_d = squared_distance(u.x, u.y, target.x, target.y);
  Move best = Move::wait();
  for (Move m : kDirections) {
    int nx = u.x, ny = u.y;
    switch (m.type) {
      case MoveType::kUp: ny -= step; break;
      case MoveType::kDown: ny += step; break;
      case MoveType::kLeft: nx -= step; break;
      default: nx += step; break;
    }
    if (!in_bounds(s.arena(), k, nx, ny)) continue;
    const long d = squared_distance(nx, ny, target.x, target.y);
    if (toward ? d < best_d : d > best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

Move approach_or_wait(const GameState& s, const Unit& u, const DamageLedger& ledger) {
  const Unit* target = closest_enemy(s, u, &ledger);
  if (!target) return Move::wait();
  return step_relative(s, u, *target, /*toward=*/true);
}

}  // namespace

Move nokav_policy(const GameState& s, const Unit& u, const DamageLedger& ledger) {
  if (weapon_ready(s, u)) {
    if (const Unit* t = no_overkill_target(s, u, ledger)) return Move::attack(t->id);
  } else {
    // Reloading next to a live target: hold position until the weapon is back.
    for (const Unit& t : s.units()) {
      if (t.owner != u.owner && !doomed(t, ledger) && in_range(s, u, t))
        return Move::wait();
    }
  }
  return approach_or_wait(s, u, ledger);
}

Move kiter_policy(const GameState& s, const Unit& u, const DamageLedger& ledger) {
  if (weapon_ready(s, u)) {
    if (const Unit* t = no_overkill_target(s, u, ledger)) return Move::attack(t->id);
    return approach_or_wait(s, u, ledger);
  }
  const Unit* threat = closest_enemy(s, u, nullptr);
  if (!threat) return Move::wait();
  return step_relative(s, u, *threat, /*toward=*/false);
}

Move Script::operator()(const GameState& s, UnitId u, const DamageLedger& ledger) const {
  return policy(s, require_ready(s, u), ledger);
}

Move Script::operator()(const GameState& s, UnitId u) const {
  return (*this)(s, u, DamageLedger{});
}

Move nokav(const GameState& s, UnitId u, const DamageLedger& ledger) {
  return nokav_policy(s, require_ready(s, u), ledger);
}

Move kiter(const GameState& s, UnitId u, const DamageLedger& ledger) {
  return kiter_policy(s, require_ready(s, u), ledger);
}

Script nokav_script() { return {"nokav", &nokav_policy}; }
Script kiter_script() { return {"kiter", &kiter_policy}; }

Script script_by_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "nokav") return nokav_script();
  if (lower == "kiter") return kiter_script();
  throw ConfigError("unknown script '" + std::string(name) + "'");
}

Portfolio::Portfolio(std::vector<Script> scripts) : scripts_(std::move(scripts)) {
  if (scripts_.empty()) throw ConfigError("portfolio must contain at least one script");
  std::unordered_set<std::string> seen;
  for (const Script& sc : scripts_) {
    if (!sc.policy) throw ConfigError("script '" + sc.name + "' has no policy");
    if (!seen.insert(sc.name).second)
      throw ConfigError("duplicate script '" + sc.name + "' in portfolio");
  }
}

std::vector<std::string> Portfolio::names() const {
  std::vector<std::string> out;
  for (const Script& sc : scripts_) out.push_back(sc.name);
  return out;
}

Portfolio default_portfolio() { return Portfolio({nokav_script(), kiter_script()}); }

Portfolio portfolio_from_names(const std::vector<std::string>& names) {
  std::vector<Script> scripts;
  for (const auto& n : names) scripts.push_back(script_by_name(n));
  return Portfolio(std::move(scripts));
}

void script_action_into(const GameState& s, Player p, ScriptPolicy policy,
                        PlayerAction& out, DamageLedger& scratch) {
  out.clear();
  scratch.clear();
  for (const Unit& u : s.units()) {
    if (u.owner != p || !s.is_ready(u)) continue;
    const Move m = policy(s, u, scratch);
    if (m.is_attack()) scratch.commit(m.target, s.kind_of(u).damage);
    out.push_back({u.id, m});
  }
}

PlayerAction script_action(const GameState& s, Player p, const Script& script) {
  PlayerAction out;
  DamageLedger ledger;
  script_action_into(s, p, script.policy, out, ledger);
  return out;
}

void fill_ledger(const GameState& s, const PlayerAction& a, std::size_t skip,
                 DamageLedger& ledger) {
  ledger.clear();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k == skip || !a[k].move.is_attack()) continue;
    const Unit* u = s.find(a[k].unit);
    if (u) ledger.commit(a[k].move.target, s.kind_of(*u).damage);
  }
}

}  // namespace asym
