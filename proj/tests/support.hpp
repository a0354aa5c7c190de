#pragma once

#include <initializer_list>
#include <vector>

#include "asym/engine.hpp"

namespace asym::test {

inline Unit make_unit(UnitId id, Player owner, const char* kind, int x, int y, int hp = 0) {
  const KindTable& t = *shared_default_kinds();
  Unit u;
  u.id = id;
  u.owner = owner;
  u.kind = t.at(kind);
  u.x = x;
  u.y = y;
  u.hp = hp > 0 ? hp : t[u.kind].hp0;
  return u;
}

inline GameState make_state(std::vector<Unit> units, Arena arena = {640, 480},
                            int frame_cap = 3000, int frame = 0) {
  return GameState(shared_default_kinds(), arena, frame_cap, std::move(units), frame);
}

inline PlayerAction action(std::initializer_list<UnitMove> moves) {
  return PlayerAction(std::vector<UnitMove>(moves));
}

constexpr Player P1 = Player::kFirst;
constexpr Player P2 = Player::kSecond;

}  // namespace asym::test
