#include "asym/engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

namespace asym {

std::string_view to_string(Player p) {
  return p == Player::kFirst ? "first" : "second";
}

std::string to_string(Move m) {
  switch (m.type) {
    case MoveType::kUp: return "U";
    case MoveType::kDown: return "D";
    case MoveType::kLeft: return "L";
    case MoveType::kRight: return "R";
    case MoveType::kWait: return "W";
    case MoveType::kAttack: return "A" + std::to_string(m.target);
  }
  return "?";
}

std::optional<Move> parse_move(std::string_view text) {
  if (text == "U") return Move::up();
  if (text == "D") return Move::down();
  if (text == "L") return Move::left();
  if (text == "R") return Move::right();
  if (text == "W") return Move::wait();
  if (text.size() >= 2 && text[0] == 'A') {
    UnitId target = 0;
    for (char c : text.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      target = target * 10 + (c - '0');
    }
    return Move::attack(target);
  }
  return std::nullopt;
}

const Move* PlayerAction::find(UnitId u) const {
  auto it = std::lower_bound(moves_.begin(), moves_.end(), u,
                             [](const UnitMove& um, UnitId id) { return um.unit < id; });
  if (it == moves_.end() || it->unit != u) return nullptr;
  return &it->move;
}

Move PlayerAction::at(UnitId u) const {
  const Move* m = find(u);
  if (!m) throw PreconditionError("action has no move for unit " + std::to_string(u));
  return *m;
}

std::string to_string(const PlayerAction& a) {
  std::string out = "(";
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(a[k].unit) + ':' + to_string(a[k].move);
  }
  return out + ')';
}

std::size_t PlayerActionHash::operator()(const PlayerAction& a) const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  for (const auto& um : a) {
    mix(static_cast<std::uint64_t>(um.unit));
    mix(static_cast<std::uint64_t>(um.move.type));
    mix(static_cast<std::uint64_t>(um.move.target + 1));
  }
  return static_cast<std::size_t>(h);
}

namespace {

int half_low(int extent) { return extent / 2; }
int half_high(int extent) { return extent - extent / 2; }

std::size_t index_of(const std::vector<Unit>& units, UnitId id) {
  auto it = std::lower_bound(units.begin(), units.end(), id,
                             [](const Unit& u, UnitId v) { return u.id < v; });
  if (it == units.end() || it->id != id) return units.size();
  return static_cast<std::size_t>(it - units.begin());
}

void displacement(MoveType t, int step, int& dx, int& dy) {
  dx = dy = 0;
  switch (t) {
    case MoveType::kUp: dy = -step; break;
    case MoveType::kDown: dy = step; break;
    case MoveType::kLeft: dx = -step; break;
    case MoveType::kRight: dx = step; break;
    default: break;
  }
}

}  // namespace

GameState::GameState(std::shared_ptr<const KindTable> kinds, Arena arena,
                     int frame_cap, std::vector<Unit> units, int frame)
    : kinds_(std::move(kinds)),
      arena_(arena),
      frame_cap_(frame_cap),
      frame_(frame),
      units_(std::move(units)) {
  if (!kinds_) throw PreconditionError("game state needs a kind table");
  if (frame_cap_ <= 0) throw PreconditionError("frame cap must be positive");
  if (frame_ < 0) throw PreconditionError("frame must be nonnegative");
  if (arena_.width <= 0 || arena_.height <= 0)
    throw PreconditionError("arena must have positive size");
  std::sort(units_.begin(), units_.end(),
            [](const Unit& a, const Unit& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < units_.size(); ++k) {
    const Unit& u = units_[k];
    if (u.id < 0) throw PreconditionError("unit ids must be nonnegative");
    if (k > 0 && units_[k - 1].id == u.id)
      throw PreconditionError("duplicate unit id " + std::to_string(u.id));
    if (u.kind >= kinds_->size())
      throw PreconditionError("unit " + std::to_string(u.id) + " has unknown kind");
    const UnitKind& kind = (*kinds_)[u.kind];
    if (u.hp < 1 || u.hp > kind.hp0)
      throw PreconditionError("unit " + std::to_string(u.id) + " hp out of range");
    if (!in_bounds(arena_, kind, u.x, u.y))
      throw PreconditionError("unit " + std::to_string(u.id) + " outside the arena");
  }
}

const Unit* GameState::find(UnitId id) const {
  std::size_t k = index_of(units_, id);
  return k == units_.size() ? nullptr : &units_[k];
}

int GameState::unit_count(Player p) const {
  return static_cast<int>(std::count_if(units_.begin(), units_.end(),
                                        [p](const Unit& u) { return u.owner == p; }));
}

bool GameState::operator==(const GameState& o) const {
  if (frame_ != o.frame_ || frame_cap_ != o.frame_cap_ || !(arena_ == o.arena_) ||
      units_ != o.units_)
    return false;
  if (kinds_ == o.kinds_) return true;
  return kinds_ && o.kinds_ && *kinds_ == *o.kinds_;
}

Unit& StateEditor::unit(UnitId id) {
  std::size_t k = index_of(s_.units_, id);
  if (k == s_.units_.size()) throw PreconditionError("no unit " + std::to_string(id));
  return s_.units_[k];
}

void StateEditor::remove(UnitId id) {
  std::size_t k = index_of(s_.units_, id);
  if (k == s_.units_.size()) throw PreconditionError("no unit " + std::to_string(id));
  s_.units_.erase(s_.units_.begin() + static_cast<std::ptrdiff_t>(k));
}

bool in_bounds(const Arena& arena, const UnitKind& kind, int x, int y) {
  return x - half_low(kind.width) >= 0 && x + half_high(kind.width) <= arena.width &&
         y - half_low(kind.height) >= 0 && y + half_high(kind.height) <= arena.height;
}

bool in_range(const GameState& s, const Unit& attacker, const Unit& target) {
  const UnitKind& ak = s.kind_of(attacker);
  const UnitKind& tk = s.kind_of(target);
  const long dx = std::labs(static_cast<long>(attacker.x) - target.x);
  const long dy = std::labs(static_cast<long>(attacker.y) - target.y);
  if (ak.melee()) {
    // Gap between bounding boxes, in doubled pixels.
    const long gx = std::max(0L, 2 * dx - (ak.width + tk.width));
    const long gy = std::max(0L, 2 * dy - (ak.height + tk.height));
    const long reach = 2L * kMeleeReach;
    return gx * gx + gy * gy <= reach * reach;
  }
  const long reach = ak.range + std::max(tk.width, tk.height) / 2;
  return dx * dx + dy * dy <= reach * reach;
}

bool weapon_ready(const GameState& s, const Unit& u) {
  return u.cooldown_frame <= s.frame() && s.kind_of(u).damage > 0;
}

const Unit& require_ready(const GameState& s, UnitId id) {
  const Unit* u = s.find(id);
  if (!u) throw PreconditionError("unit " + std::to_string(id) + " is not alive");
  if (!s.is_ready(*u))
    throw PreconditionError("unit " + std::to_string(id) + " is not ready");
  return *u;
}

void append_legal_moves(const GameState& s, const Unit& u, std::vector<Move>& out) {
  const UnitKind& k = s.kind_of(u);
  const int step = k.speed * kMoveFrames;
  for (Move d : kDirections) {
    int dx, dy;
    displacement(d.type, step, dx, dy);
    if (in_bounds(s.arena(), k, u.x + dx, u.y + dy)) out.push_back(d);
  }
  out.push_back(Move::wait());
  if (!weapon_ready(s, u)) return;
  for (const Unit& t : s.units()) {
    if (t.owner != u.owner && in_range(s, u, t)) out.push_back(Move::attack(t.id));
  }
}

std::vector<Move> legal_moves(const GameState& s, UnitId id) {
  const Unit& u = require_ready(s, id);
  std::vector<Move> out;
  append_legal_moves(s, u, out);
  return out;
}

bool is_legal(const GameState& s, const Unit& u, Move m) {
  const UnitKind& k = s.kind_of(u);
  switch (m.type) {
    case MoveType::kWait:
      return true;
    case MoveType::kAttack: {
      const Unit* t = s.find(m.target);
      return t && t->owner != u.owner && weapon_ready(s, u) && in_range(s, u, *t);
    }
    default: {
      int dx, dy;
      displacement(m.type, k.speed * kMoveFrames, dx, dy);
      return in_bounds(s.arena(), k, u.x + dx, u.y + dy);
    }
  }
}

std::vector<UnitId> ready_units(const GameState& s, Player p) {
  std::vector<UnitId> out;
  for (const Unit& u : s.units())
    if (u.owner == p && s.is_ready(u)) out.push_back(u.id);
  return out;
}

bool has_ready_unit(const GameState& s, Player p) {
  for (const Unit& u : s.units())
    if (u.owner == p && s.is_ready(u)) return true;
  return false;
}

void validate_action(const GameState& s, Player p, const PlayerAction& a) {
  std::size_t k = 0;
  for (const Unit& u : s.units()) {
    if (u.owner != p || !s.is_ready(u)) continue;
    if (k >= a.size())
      throw IllegalActionError(u.id, "no move for ready unit " + std::to_string(u.id));
    if (a[k].unit != u.id)
      throw IllegalActionError(a[k].unit, "move for unit " + std::to_string(a[k].unit) +
                                              " out of order or not a ready unit of " +
                                              std::string(to_string(p)));
    if (!is_legal(s, u, a[k].move))
      throw IllegalActionError(u.id, "illegal move " + to_string(a[k].move) +
                                         " for unit " + std::to_string(u.id));
    ++k;
  }
  if (k != a.size())
    throw IllegalActionError(a[k].unit, "unit " + std::to_string(a[k].unit) +
                                            " is not a ready unit of " +
                                            std::string(to_string(p)));
}

GameState apply(const GameState& s, const PlayerAction& first,
                const PlayerAction& second) {
  if (terminal(s)) throw PreconditionError("cannot apply actions to a terminal state");
  validate_action(s, Player::kFirst, first);
  validate_action(s, Player::kSecond, second);
  GameState next = s;
  apply_in_place(next, first, second);
  return next;
}

void apply_in_place(GameState& s, const PlayerAction& first,
                    const PlayerAction& second) {
  thread_local std::vector<int> pending;
  std::vector<Unit>& units = s.units_;
  pending.assign(units.size(), 0);
  const int frame = s.frame_;

  auto commit = [&](const PlayerAction& a) {
    for (const UnitMove& um : a) {
      std::size_t k = index_of(units, um.unit);
      if (k == units.size()) continue;
      Unit& u = units[k];
      const UnitKind& kind = (*s.kinds_)[u.kind];
      switch (um.move.type) {
        case MoveType::kWait:
          u.ready_frame = frame + kWaitFrames;
          break;
        case MoveType::kAttack: {
          std::size_t t = index_of(units, um.move.target);
          if (t != units.size()) pending[t] += kind.damage;
          u.cooldown_frame = frame + kind.cooldown;
          u.ready_frame = frame + kAttackFrames;
          break;
        }
        default: {
          int dx, dy;
          displacement(um.move.type, kind.speed * kMoveFrames, dx, dy);
          u.x += dx;
          u.y += dy;
          u.ready_frame = frame + kMoveFrames;
          break;
        }
      }
    }
  };
  commit(first);
  commit(second);

  std::size_t w = 0;
  for (std::size_t k = 0; k < units.size(); ++k) {
    Unit& u = units[k];
    u.hp -= pending[k];
    if (u.hp > 0) units[w++] = u;
  }
  units.resize(w);

  int next = INT_MAX;
  for (const Unit& u : units) next = std::min(next, u.ready_frame);
  if (units.empty()) next = frame + kWaitFrames;
  next = std::max(next, frame + 1);
  s.frame_ = std::min(next, s.frame_cap_);
}

bool terminal(const GameState& s) {
  if (s.frame() >= s.frame_cap()) return true;
  bool first = false, second = false;
  for (const Unit& u : s.units()) {
    (u.owner == Player::kFirst ? first : second) = true;
    if (first && second) return false;
  }
  return true;
}

TerminalStatus is_terminal(const GameState& s) {
  if (!terminal(s)) return {};
  return {true, ltd2(s, Player::kFirst)};
}

double dpf(const UnitKind& k) {
  return static_cast<double>(k.damage) / static_cast<double>(k.cooldown + 1);
}

double dpf(const GameState& s, const Unit& u) { return dpf(s.kind_of(u)); }

double attack_value(const GameState& s, const Unit& u) {
  return dpf(s, u) / static_cast<double>(u.hp);
}

double ltd2(const GameState& s, Player p) {
  double sums[2] = {0.0, 0.0};
  for (const Unit& u : s.units())
    sums[player_index(u.owner)] += std::sqrt(static_cast<double>(u.hp)) * dpf(s, u);
  return sums[player_index(p)] - sums[player_index(opponent(p))];
}

}  // namespace asym
