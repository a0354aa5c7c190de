#pragma once

// Scripted unit policies (NOKAV, Kiter) and the portfolio they form.

#include <string>
#include <string_view>
#include <vector>

#include "asym/engine.hpp"

namespace asym {

// Damage already committed against each target by other friendly units in
// the action being assembled. Keyed by unit id.
class DamageLedger {
 public:
  void commit(UnitId target, int damage);
  int committed(UnitId target) const {
    return target >= 0 && static_cast<std::size_t>(target) < damage_.size()
               ? damage_[static_cast<std::size_t>(target)]
               : 0;
  }
  void clear();

 private:
  std::vector<int> damage_;
  std::vector<UnitId> touched_;
};

// The scripts assume u is alive and ready; the id-taking wrappers below check.
using ScriptPolicy = Move (*)(const GameState&, const Unit&, const DamageLedger&);

struct Script {
  std::string name;
  ScriptPolicy policy = nullptr;

  Move operator()(const GameState& s, UnitId u, const DamageLedger& ledger) const;
  Move operator()(const GameState& s, UnitId u) const;
  bool operator==(const Script& o) const { return name == o.name && policy == o.policy; }
};

Move nokav(const GameState& s, UnitId u, const DamageLedger& ledger = {});
Move kiter(const GameState& s, UnitId u, const DamageLedger& ledger = {});

Move nokav_policy(const GameState& s, const Unit& u, const DamageLedger& ledger);
Move kiter_policy(const GameState& s, const Unit& u, const DamageLedger& ledger);

Script nokav_script();
Script kiter_script();
// "nokav" or "kiter" (case-insensitive); throws ConfigError otherwise.
Script script_by_name(std::string_view name);

class Portfolio {
 public:
  // Throws ConfigError when empty or when two scripts share a name.
  explicit Portfolio(std::vector<Script> scripts);

  std::size_t size() const { return scripts_.size(); }
  const Script& operator[](std::size_t k) const { return scripts_[k]; }
  auto begin() const { return scripts_.begin(); }
  auto end() const { return scripts_.end(); }
  std::vector<std::string> names() const;

 private:
  std::vector<Script> scripts_;
};

// [NOKAV, Kiter]
Portfolio default_portfolio();
Portfolio portfolio_from_names(const std::vector<std::string>& names);

// Applies the script to every ready unit of p in ascending id order, sharing
// one no-overkill ledger across the whole action.
PlayerAction script_action(const GameState& s, Player p, const Script& script);
void script_action_into(const GameState& s, Player p, ScriptPolicy policy,
                        PlayerAction& out, DamageLedger& scratch);

// Ledger holding the attacks of every move in a except entry `skip`.
void fill_ledger(const GameState& s, const PlayerAction& a, std::size_t skip,
                 DamageLedger& ledger);

}  // namespace asym
