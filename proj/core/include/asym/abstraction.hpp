#pragma once

// Script-induced move sets, uniform / asymmetric action abstractions and the
// strategies that pick which units stay unrestricted.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "asym/engine.hpp"
#include "asym/rng.hpp"
#include "asym/scripts.hpp"

namespace asym {

enum class AbstractionMode { kUniform, kAsymmetric, kUnabstracted };

struct AbstractionSpec {
  Portfolio portfolio = default_portfolio();
  AbstractionMode mode = AbstractionMode::kUniform;
  // Only read in kAsymmetric mode; ids that are not ready at a state are
  // ignored there.
  std::vector<UnitId> unrestricted;

  static AbstractionSpec uniform(Portfolio p);
  static AbstractionSpec asymmetric(Portfolio p, std::vector<UnitId> unrestricted);
  static AbstractionSpec unabstracted(Portfolio p = default_portfolio());
};

// Deduplicated moves the portfolio's scripts return for u, in canonical order.
// The no-overkill ledger is empty unless one is passed.
std::vector<Move> script_moves(const GameState& s, UnitId u, const Portfolio& p);
std::vector<Move> script_moves(const GameState& s, UnitId u, const Portfolio& p,
                               const DamageLedger& ledger);

// Lazy Cartesian product of per-unit move sets. Index order is mixed radix
// with the lowest unit id as the most significant digit.
class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(std::vector<UnitId> units, std::vector<std::vector<Move>> factors);

  // Number of actions, saturating at UINT64_MAX (see saturated()).
  std::uint64_t size() const { return size_; }
  bool saturated() const { return saturated_; }
  std::span<const UnitId> units() const { return units_; }
  const std::vector<Move>& factor(std::size_t k) const { return factors_[k]; }

  PlayerAction operator[](std::uint64_t index) const;

  class iterator {
   public:
    using value_type = PlayerAction;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    const PlayerAction& operator*() const { return current_; }
    const PlayerAction* operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || digits_ == o.digits_); }

   private:
    friend class ActionSpace;
    const ActionSpace* space_ = nullptr;
    std::vector<std::size_t> digits_;
    PlayerAction current_;
    bool done_ = true;
  };

  iterator begin() const;
  iterator end() const { return iterator{}; }

 private:
  std::vector<UnitId> units_;
  std::vector<std::vector<Move>> factors_;
  std::uint64_t size_ = 1;
  bool saturated_ = false;
};

// Throws PreconditionError when p has no ready unit.
ActionSpace enumerate_actions(const GameState& s, Player p, const AbstractionSpec& spec);
// Same, but a player without ready units gets the single empty action.
ActionSpace action_space(const GameState& s, Player p, const AbstractionSpec& spec);

enum class SelectionStrategy { kMoreAttackValue, kLessAttackValue, kRandom };

std::string_view to_string(SelectionStrategy s);
// "av+", "av-", "random" (or "r"); throws ConfigError otherwise.
SelectionStrategy parse_selection(std::string_view text);

struct SelectionState {
  SelectionState() = default;
  SelectionState(SelectionStrategy strategy, int set_size, std::uint64_t seed)
      : strategy(strategy), set_size(set_size), rng(seed) {}

  SelectionStrategy strategy = SelectionStrategy::kMoreAttackValue;
  int set_size = 4;
  std::vector<UnitId> current;  // persisted set for kRandom
  bool anchored = false;
  Rng rng;
};

// AV+ / AV-: the set_size ready units with the largest / smallest dpf/hp,
// ties broken by the state's rng. Random: a set drawn among living units on
// the first call and kept, with eliminated members replaced by random living
// restricted units. Result is sorted by id.
std::vector<UnitId> select_unrestricted(const GameState& s, Player p, SelectionState& sel);

}  // namespace asym
