#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "asym/engine.hpp"
#include "asym/rng.hpp"
#include "support.hpp"

namespace asym {
namespace {

using test::action;
using test::make_state;
using test::make_unit;
using test::P1;
using test::P2;

std::vector<Move> moves(std::initializer_list<Move> m) { return m; }

TEST(LegalMoves, CenteredMeleeWithoutTargets) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 320, 240),
                                  make_unit(1, P2, "Zl", 600, 240)});
  EXPECT_EQ(legal_moves(s, 0),
            moves({Move::up(), Move::down(), Move::left(), Move::right(), Move::wait()}));
}

TEST(LegalMoves, LeftWallExcludesLeft) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 16, 240),
                                  make_unit(1, P2, "Zl", 600, 240)});
  const auto m = legal_moves(s, 0);
  EXPECT_EQ(std::count(m.begin(), m.end(), Move::left()), 0);
  EXPECT_EQ(m.size(), 4u);
}

TEST(LegalMoves, RangedUnitSeesEnemyInRange) {
  const GameState s = make_state({make_unit(0, P1, "Dg", 200, 240),
                                  make_unit(1, P2, "Zl", 300, 240)});
  const auto m = legal_moves(s, 0);
  EXPECT_NE(std::find(m.begin(), m.end(), Move::attack(1)), m.end());
  EXPECT_EQ(m.back(), Move::attack(1));
}

TEST(LegalMoves, NoAttackWhileReloading) {
  GameState s = make_state({make_unit(0, P1, "Dg", 200, 240),
                            make_unit(1, P2, "Zl", 300, 240)});
  StateEditor(s).unit(0).cooldown_frame = 5;
  const auto m = legal_moves(s, 0);
  EXPECT_EQ(std::find(m.begin(), m.end(), Move::attack(1)), m.end());
}

TEST(LegalMoves, UnknownOrBusyUnitIsRejected) {
  GameState s = make_state({make_unit(0, P1, "Zl", 320, 240),
                            make_unit(1, P2, "Zl", 600, 240)});
  EXPECT_THROW(legal_moves(s, 7), PreconditionError);
  StateEditor(s).unit(0).ready_frame = 3;
  EXPECT_THROW(legal_moves(s, 0), PreconditionError);
}

TEST(Range, MeleeReachIsEightPixelsBetweenBoxes) {
  // Zealots are 32 wide: centers 40 apart leave an 8 px gap.
  const GameState in = make_state({make_unit(0, P1, "Zl", 200, 240),
                                   make_unit(1, P2, "Zl", 240, 240)});
  const GameState out = make_state({make_unit(0, P1, "Zl", 200, 240),
                                    make_unit(1, P2, "Zl", 241, 240)});
  EXPECT_TRUE(in_range(in, in.units()[0], in.units()[1]));
  EXPECT_FALSE(in_range(out, out.units()[0], out.units()[1]));
}

TEST(Range, RangedReachAddsHalfTheTargetExtent) {
  // Dragoon range 128 plus half of the Zealot's 40 px height.
  const GameState in = make_state({make_unit(0, P1, "Dg", 100, 240),
                                   make_unit(1, P2, "Zl", 248, 240)});
  const GameState out = make_state({make_unit(0, P1, "Dg", 100, 240),
                                    make_unit(1, P2, "Zl", 249, 240)});
  EXPECT_TRUE(in_range(in, in.units()[0], in.units()[1]));
  EXPECT_FALSE(in_range(out, out.units()[0], out.units()[1]));
}

TEST(ReadyUnits, FreshStateAllReady) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 100, 100), make_unit(1, P1, "Zl", 100, 200),
                                  make_unit(2, P2, "Zl", 500, 100)});
  EXPECT_EQ(ready_units(s, P1), (std::vector<UnitId>{0, 1}));
  EXPECT_EQ(ready_units(s, P2), (std::vector<UnitId>{2}));
}

TEST(ReadyUnits, AllBusyAfterMoving) {
  GameState s = make_state({make_unit(0, P1, "Zl", 100, 100), make_unit(1, P1, "Lg", 100, 200),
                            make_unit(2, P2, "Dg", 500, 100)},
                           {640, 480}, 3000, 2);
  for (UnitId id : {0, 1}) StateEditor(s).unit(id).ready_frame = 2 + kMoveFrames;
  EXPECT_TRUE(ready_units(s, P1).empty());
  EXPECT_FALSE(has_ready_unit(s, P1));
  EXPECT_EQ(ready_units(s, P2), (std::vector<UnitId>{2}));
}

TEST(ReadyUnits, MixedTimers) {
  GameState s = make_state({make_unit(0, P1, "Zl", 100, 100), make_unit(1, P1, "Zl", 100, 200),
                            make_unit(2, P1, "Zl", 100, 300), make_unit(3, P2, "Zl", 500, 100)},
                           {640, 480}, 3000, 10);
  StateEditor e(s);
  e.unit(0).ready_frame = 10;
  e.unit(1).ready_frame = 11;
  e.unit(2).ready_frame = 3;
  EXPECT_EQ(ready_units(s, P1), (std::vector<UnitId>{0, 2}));
}

TEST(Apply, BothWaitAdvancesByWaitDuration) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 100, 100),
                                  make_unit(1, P2, "Zl", 500, 100)});
  const GameState n = apply(s, action({{0, Move::wait()}}), action({{1, Move::wait()}}));
  EXPECT_EQ(n.frame(), kWaitFrames);
  ASSERT_EQ(n.units().size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(n.units()[k].x, s.units()[k].x);
    EXPECT_EQ(n.units()[k].y, s.units()[k].y);
    EXPECT_EQ(n.units()[k].hp, s.units()[k].hp);
  }
}

TEST(Apply, MoveDisplacesBySpeedTimesDuration) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 100, 100),
                                  make_unit(1, P2, "Lg", 500, 100)});
  const GameState n = apply(s, action({{0, Move::down()}}), action({{1, Move::left()}}));
  EXPECT_EQ(n.find(0)->y, 100 + 4 * kMoveFrames);
  EXPECT_EQ(n.find(1)->x, 500 - 5 * kMoveFrames);
  EXPECT_EQ(n.find(0)->ready_frame, kMoveFrames);
}

TEST(Apply, MutualKillRemovesBoth) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 200, 240, 16),
                                  make_unit(1, P2, "Zl", 240, 240, 16)});
  const GameState n = apply(s, action({{0, Move::attack(1)}}), action({{1, Move::attack(0)}}));
  EXPECT_TRUE(n.units().empty());
  const TerminalStatus t = is_terminal(n);
  EXPECT_TRUE(t.terminal);
  ASSERT_TRUE(t.utility);
  EXPECT_EQ(*t.utility, 0.0);
}

TEST(Apply, DamageUsesPreStateHitPoints) {
  // Both attack; the weaker one dies but its blow still lands.
  const GameState s = make_state({make_unit(0, P1, "Zl", 200, 240, 10),
                                  make_unit(1, P2, "Zl", 240, 240, 100)});
  const GameState n = apply(s, action({{0, Move::attack(1)}}), action({{1, Move::attack(0)}}));
  ASSERT_EQ(n.units().size(), 1u);
  EXPECT_EQ(n.units()[0].id, 1);
  EXPECT_EQ(n.units()[0].hp, 84);
}

TEST(Apply, AttackSetsHitPointsAndCooldown) {
  // Zealot (d=16, cd=22) on a 40 hp Marine at frame 10.
  const GameState s = make_state({make_unit(0, P1, "Zl", 200, 240),
                                  make_unit(1, P2, "Mr", 233, 240)},
                                 {640, 480}, 3000, 10);
  const GameState n = apply(s, action({{0, Move::attack(1)}}), action({{1, Move::wait()}}));
  EXPECT_EQ(n.find(1)->hp, 24);
  EXPECT_EQ(n.find(0)->cooldown_frame, 32);
  EXPECT_EQ(n.find(0)->ready_frame, 10 + kAttackFrames);
  EXPECT_EQ(n.frame(), 14);
}

TEST(Apply, IllegalMoveNamesTheUnit) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 100, 240),
                                  make_unit(1, P2, "Zl", 500, 240)});
  try {
    apply(s, action({{0, Move::attack(1)}}), action({{1, Move::wait()}}));
    FAIL() << "out-of-range attack accepted";
  } catch (const IllegalActionError& e) {
    EXPECT_EQ(e.unit(), 0);
  }
  try {
    apply(s, action({{0, Move::wait()}}), action({{1, Move::wait()}, {2, Move::wait()}}));
    FAIL() << "extra unit accepted";
  } catch (const IllegalActionError& e) {
    EXPECT_EQ(e.unit(), 2);
  }
  EXPECT_THROW(apply(s, action({}), action({{1, Move::wait()}})), IllegalActionError);
}

TEST(Apply, WallMoveIsIllegal) {
  const GameState s = make_state({make_unit(0, P1, "Zl", 16, 240),
                                  make_unit(1, P2, "Zl", 500, 240)});
  EXPECT_THROW(apply(s, action({{0, Move::left()}}), action({{1, Move::wait()}})),
               IllegalActionError);
}

TEST(Terminal, Cases) {
  const GameState live = make_state({make_unit(0, P1, "Zl", 100, 240),
                                     make_unit(1, P2, "Zl", 500, 240)});
  EXPECT_FALSE(is_terminal(live).terminal);
  EXPECT_FALSE(is_terminal(live).utility);

  const GameState won = make_state({make_unit(0, P1, "Zl", 100, 240)});
  ASSERT_TRUE(is_terminal(won).terminal);
  EXPECT_GT(*is_terminal(won).utility, 0.0);

  const GameState capped = make_state({make_unit(0, P1, "Zl", 100, 240),
                                       make_unit(1, P2, "Zl", 540, 240)},
                                      {640, 480}, 100, 100);
  ASSERT_TRUE(is_terminal(capped).terminal);
  EXPECT_EQ(*is_terminal(capped).utility, 0.0);
}

TEST(Utility, DamagePerFrame) {
  EXPECT_NEAR(dpf(UnitKind{"a", "", 1, 16, 0, 22, 1, 1, 1}), 0.69565, 1e-5);
  EXPECT_EQ(dpf(UnitKind{"a", "", 1, 0, 0, 22, 1, 1, 1}), 0.0);
  EXPECT_EQ(dpf(UnitKind{"a", "", 1, 6, 0, 0, 1, 1, 1}), 6.0);
}

TEST(Utility, Ltd2) {
  const GameState lone = make_state({make_unit(0, P1, "Zl", 100, 240, 25)});
  EXPECT_NEAR(ltd2(lone, P1), 5.0 * 16.0 / 23.0, 1e-12);
  EXPECT_NEAR(ltd2(lone, P1), 3.478, 1e-3);

  const GameState even = make_state({make_unit(0, P1, "Dg", 100, 240), make_unit(1, P1, "Zl", 100, 100),
                                     make_unit(2, P2, "Dg", 500, 240), make_unit(3, P2, "Zl", 500, 100)});
  EXPECT_EQ(ltd2(even, P1), 0.0);

  const GameState two_one = make_state({make_unit(0, P1, "Mr", 100, 240), make_unit(1, P1, "Mr", 100, 100),
                                        make_unit(2, P2, "Mr", 500, 240)});
  EXPECT_NEAR(ltd2(two_one, P1), std::sqrt(40.0) * 6.0 / 16.0, 1e-12);
  EXPECT_NEAR(ltd2(two_one, P2), -std::sqrt(40.0) * 6.0 / 16.0, 1e-12);
}

TEST(Moves, TextRoundTrip) {
  for (Move m : {Move::up(), Move::down(), Move::left(), Move::right(), Move::wait(),
                 Move::attack(0), Move::attack(123)}) {
    auto parsed = parse_move(to_string(m));
    ASSERT_TRUE(parsed);
    EXPECT_EQ(*parsed, m);
  }
  EXPECT_FALSE(parse_move("A"));
  EXPECT_FALSE(parse_move("X"));
  EXPECT_FALSE(parse_move("A1b"));
}

TEST(Moves, CanonicalOrder) {
  EXPECT_LT(Move::up(), Move::down());
  EXPECT_LT(Move::right(), Move::wait());
  EXPECT_LT(Move::wait(), Move::attack(0));
  EXPECT_LT(Move::attack(2), Move::attack(5));
}

TEST(GameStateCtor, RejectsBadUnits) {
  EXPECT_THROW(make_state({make_unit(0, P1, "Zl", 100, 240), make_unit(0, P2, "Zl", 300, 240)}),
               PreconditionError);
  EXPECT_THROW(make_state({make_unit(0, P1, "Zl", 5, 240)}), PreconditionError);
  Unit hurt = make_unit(0, P1, "Zl", 100, 240);
  hurt.hp = 161;
  EXPECT_THROW(make_state({hurt}), PreconditionError);
}

TEST(KindTableIni, RoundTrip) {
  std::stringstream ss;
  write_kind_table(ss, default_kind_table());
  EXPECT_EQ(parse_kind_table(ss), default_kind_table());
}

TEST(KindTableIni, RejectsInvalidStats) {
  std::istringstream zero_hp("[Blob]\nhp0 = 0\ndamage = 1\nrange = 0\ncooldown = 1\n"
                             "speed = 1\nwidth = 1\nheight = 1\n");
  EXPECT_THROW(parse_kind_table(zero_hp), ConfigError);
  std::istringstream missing("[Blob]\nhp0 = 10\n");
  EXPECT_THROW(parse_kind_table(missing), ConfigError);
  std::istringstream dup("[A]\nabbrev = x\nhp0 = 1\ndamage = 1\nrange = 0\ncooldown = 1\n"
                         "speed = 1\nwidth = 1\nheight = 1\n"
                         "[B]\nabbrev = X\nhp0 = 1\ndamage = 1\nrange = 0\ncooldown = 1\n"
                         "speed = 1\nwidth = 1\nheight = 1\n");
  EXPECT_THROW(parse_kind_table(dup), ConfigError);
}

// Random legal play on random states: utility stays zero-sum, hp and unit
// counts never grow, the frame strictly advances.
TEST(EngineProperties, RandomLegalPlay) {
  Rng rng(2024);
  const char* kinds[] = {"Zl", "Dg", "Lg", "Mr"};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Unit> units;
    for (UnitId id = 0; id < 6; ++id) {
      Unit u = make_unit(id, id < 3 ? P1 : P2, kinds[rng.below(4)],
                         (id < 3 ? 150 : 330) + rng.between(0, 150), rng.between(40, 440));
      u.hp = rng.between(1, shared_default_kinds()->operator[](u.kind).hp0);
      units.push_back(u);
    }
    GameState s = make_state(units, {640, 480}, 400);
    while (!terminal(s)) {
      PlayerAction a[2];
      for (Player p : {P1, P2}) {
        for (UnitId id : ready_units(s, p)) {
          const auto legal = legal_moves(s, id);
          a[player_index(p)].push_back({id, legal[rng.below(legal.size())]});
        }
      }
      const GameState n = apply(s, a[0], a[1]);
      EXPECT_LT(std::abs(ltd2(n, P1) + ltd2(n, P2)), 1e-12);
      EXPECT_GT(n.frame(), s.frame());
      EXPECT_LE(n.units().size(), s.units().size());
      for (const Unit& u : n.units()) EXPECT_LE(u.hp, s.find(u.id)->hp);
      s = n;
    }
  }
}

}  // namespace
}  // namespace asym
