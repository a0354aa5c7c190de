#pragma once

// Deterministic forward model of a multi-unit combat: unit kinds, states,
// legal moves, durative simultaneous transitions and the LTD2 utility.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asym {

using UnitId = std::int32_t;
using KindId = std::uint8_t;

inline constexpr UnitId kNoUnit = -1;

// Durations (in frames) of the three move families and the melee reach.
inline constexpr int kMoveFrames = 4;
inline constexpr int kWaitFrames = 4;
inline constexpr int kAttackFrames = 5;
inline constexpr int kMeleeReach = 8;
inline constexpr int kDefaultFrameCap = 3000;

// kFirst is the player being searched for in most APIs; all utilities are
// reported from kFirst's point of view unless a Player argument says otherwise.
enum class Player : std::uint8_t { kFirst = 0, kSecond = 1 };

constexpr Player opponent(Player p) {
  return p == Player::kFirst ? Player::kSecond : Player::kFirst;
}
constexpr int player_index(Player p) { return static_cast<int>(p); }
std::string_view to_string(Player p);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllegalActionError : public std::invalid_argument {
 public:
  IllegalActionError(UnitId unit, const std::string& what)
      : std::invalid_argument(what), unit_(unit) {}
  UnitId unit() const { return unit_; }

 private:
  UnitId unit_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UnitKind {
  std::string name;
  std::string abbrev;
  int hp0 = 1;
  int damage = 0;
  int range = 0;  // pixels, 0 = melee
  int cooldown = 0;
  int speed = 1;  // pixels per frame
  int width = 0;
  int height = 0;

  bool melee() const { return range == 0; }
  bool operator==(const UnitKind&) const = default;
};

class KindTable {
 public:
  // Throws ConfigError when a stat violates the UnitKind invariants or the
  // name/abbreviation is already taken.
  KindId add(UnitKind kind);

  const UnitKind& operator[](KindId id) const { return kinds_[id]; }
  std::size_t size() const { return kinds_.size(); }
  std::span<const UnitKind> kinds() const { return kinds_; }

  // Matches either the full name or the abbreviation, case-insensitively.
  std::optional<KindId> find(std::string_view name) const;
  KindId at(std::string_view name) const;

  bool operator==(const KindTable&) const = default;

 private:
  std::vector<UnitKind> kinds_;
};

// Zealot, Dragoon, Zergling and Marine with the shipped default stats.
KindTable default_kind_table();
const std::shared_ptr<const KindTable>& shared_default_kinds();

// INI layout: one section per kind, keys hp0/damage/range/cooldown/speed/
// width/height and an optional abbrev.
KindTable parse_kind_table(std::istream& in);
KindTable load_kind_table(const std::filesystem::path& path);
void write_kind_table(std::ostream& out, const KindTable& table);

struct Unit {
  UnitId id = kNoUnit;
  Player owner = Player::kFirst;
  KindId kind = 0;
  int x = 0;
  int y = 0;
  int hp = 0;
  int ready_frame = 0;
  int cooldown_frame = 0;

  bool operator==(const Unit&) const = default;
};

enum class MoveType : std::uint8_t { kUp, kDown, kLeft, kRight, kWait, kAttack };

struct Move {
  MoveType type = MoveType::kWait;
  UnitId target = kNoUnit;

  static constexpr Move up() { return {MoveType::kUp, kNoUnit}; }
  static constexpr Move down() { return {MoveType::kDown, kNoUnit}; }
  static constexpr Move left() { return {MoveType::kLeft, kNoUnit}; }
  static constexpr Move right() { return {MoveType::kRight, kNoUnit}; }
  static constexpr Move wait() { return {MoveType::kWait, kNoUnit}; }
  static constexpr Move attack(UnitId t) { return {MoveType::kAttack, t}; }

  bool is_directional() const { return type <= MoveType::kRight; }
  bool is_attack() const { return type == MoveType::kAttack; }

  bool operator==(const Move&) const = default;
  // Canonical order: U < D < L < R < W < Attack(lowest target first).
  auto operator<=>(const Move&) const = default;
};

std::string to_string(Move m);
// Inverse of to_string: "U", "D", "L", "R", "W" or "A<target id>".
std::optional<Move> parse_move(std::string_view text);

inline constexpr Move kDirections[4] = {Move::up(), Move::down(), Move::left(),
                                        Move::right()};

struct UnitMove {
  UnitId unit = kNoUnit;
  Move move;
  bool operator==(const UnitMove&) const = default;
};

// One move per ready unit of a player, ordered by ascending unit id, so that
// a[k] is the move of the k-th ready unit.
class PlayerAction {
 public:
  PlayerAction() = default;
  explicit PlayerAction(std::vector<UnitMove> moves) : moves_(std::move(moves)) {}

  std::size_t size() const { return moves_.size(); }
  bool empty() const { return moves_.empty(); }
  const UnitMove& operator[](std::size_t k) const { return moves_[k]; }
  void set(std::size_t k, Move m) { moves_[k].move = m; }
  void push_back(UnitMove um) { moves_.push_back(um); }
  void clear() { moves_.clear(); }
  void reserve(std::size_t n) { moves_.reserve(n); }

  // Move of unit u, or nullptr when u has no entry.
  const Move* find(UnitId u) const;
  Move at(UnitId u) const;

  auto begin() const { return moves_.begin(); }
  auto end() const { return moves_.end(); }
  std::span<const UnitMove> moves() const { return moves_; }

  bool operator==(const PlayerAction&) const = default;

 private:
  std::vector<UnitMove> moves_;
};

std::string to_string(const PlayerAction& a);

struct PlayerActionHash {
  std::size_t operator()(const PlayerAction& a) const;
};

struct Arena {
  int width = 1280;
  int height = 780;
  bool operator==(const Arena&) const = default;
};

class GameState {
 public:
  GameState() = default;
  // Units are sorted by id; ids must be unique, positions inside the arena
  // and hit points in [1, hp0]. Throws PreconditionError otherwise.
  GameState(std::shared_ptr<const KindTable> kinds, Arena arena, int frame_cap,
            std::vector<Unit> units, int frame = 0);

  int frame() const { return frame_; }
  int frame_cap() const { return frame_cap_; }
  const Arena& arena() const { return arena_; }
  const KindTable& kinds() const { return *kinds_; }
  const std::shared_ptr<const KindTable>& kinds_ptr() const { return kinds_; }

  std::span<const Unit> units() const { return units_; }
  const Unit* find(UnitId id) const;
  const UnitKind& kind_of(const Unit& u) const { return (*kinds_)[u.kind]; }
  bool is_ready(const Unit& u) const { return u.ready_frame <= frame_; }
  int unit_count(Player p) const;

  bool operator==(const GameState& o) const;

 private:
  friend void apply_in_place(GameState&, const PlayerAction&, const PlayerAction&);
  friend class StateEditor;

  std::shared_ptr<const KindTable> kinds_;
  Arena arena_;
  int frame_cap_ = kDefaultFrameCap;
  int frame_ = 0;
  std::vector<Unit> units_;
};

// Direct field access for building hand-crafted test and scenario states.
class StateEditor {
 public:
  explicit StateEditor(GameState& s) : s_(s) {}
  Unit& unit(UnitId id);
  void set_frame(int frame) { s_.frame_ = frame; }
  void remove(UnitId id);

 private:
  GameState& s_;
};

bool in_bounds(const Arena& arena, const UnitKind& kind, int x, int y);
bool in_range(const GameState& s, const Unit& attacker, const Unit& target);
bool weapon_ready(const GameState& s, const Unit& u);

// Throws PreconditionError when the unit is unknown, dead or busy.
const Unit& require_ready(const GameState& s, UnitId id);

std::vector<Move> legal_moves(const GameState& s, UnitId id);
// Unchecked variant; appends to out in canonical order.
void append_legal_moves(const GameState& s, const Unit& u, std::vector<Move>& out);
bool is_legal(const GameState& s, const Unit& u, Move m);

std::vector<UnitId> ready_units(const GameState& s, Player p);
bool has_ready_unit(const GameState& s, Player p);

// Validates both actions, then commits them simultaneously. Throws
// IllegalActionError naming the offending unit.
GameState apply(const GameState& s, const PlayerAction& first,
                const PlayerAction& second);
void validate_action(const GameState& s, Player p, const PlayerAction& a);
// Same transition without validation, for search internals.
void apply_in_place(GameState& s, const PlayerAction& first,
                    const PlayerAction& second);

struct TerminalStatus {
  bool terminal = false;
  std::optional<double> utility;  // for kFirst
};

bool terminal(const GameState& s);
TerminalStatus is_terminal(const GameState& s);

double dpf(const UnitKind& k);
double dpf(const GameState& s, const Unit& u);
// Attack value dpf/hp with current hit points.
double attack_value(const GameState& s, const Unit& u);

// Sum of sqrt(hp)*dpf for p minus the same sum for p's opponent.
double ltd2(const GameState& s, Player p = Player::kFirst);

}  // namespace asym
