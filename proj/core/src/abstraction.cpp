#include "asym/abstraction.hpp"

#include <algorithm>

namespace asym {

AbstractionSpec AbstractionSpec::uniform(Portfolio p) {
  return {std::move(p), AbstractionMode::kUniform, {}};
}

AbstractionSpec AbstractionSpec::asymmetric(Portfolio p, std::vector<UnitId> unrestricted) {
  std::sort(unrestricted.begin(), unrestricted.end());
  unrestricted.erase(std::unique(unrestricted.begin(), unrestricted.end()),
                     unrestricted.end());
  return {std::move(p), AbstractionMode::kAsymmetric, std::move(unrestricted)};
}

AbstractionSpec AbstractionSpec::unabstracted(Portfolio p) {
  return {std::move(p), AbstractionMode::kUnabstracted, {}};
}

std::vector<Move> script_moves(const GameState& s, UnitId u, const Portfolio& p,
                               const DamageLedger& ledger) {
  const Unit& unit = require_ready(s, u);
  std::vector<Move> out;
  for (const Script& sc : p) out.push_back(sc.policy(s, unit, ledger));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Move> script_moves(const GameState& s, UnitId u, const Portfolio& p) {
  return script_moves(s, u, p, DamageLedger{});
}

ActionSpace::ActionSpace(std::vector<UnitId> units, std::vector<std::vector<Move>> factors)
    : units_(std::move(units)), factors_(std::move(factors)) {
  if (units_.size() != factors_.size())
    throw PreconditionError("action space needs one factor per unit");
  for (const auto& f : factors_) {
    if (f.empty()) throw PreconditionError("action space factor is empty");
    if (saturated_) continue;
    if (size_ > UINT64_MAX / f.size()) {
      saturated_ = true;
      size_ = UINT64_MAX;
    } else {
      size_ *= f.size();
    }
  }
}

PlayerAction ActionSpace::operator[](std::uint64_t index) const {
  std::vector<UnitMove> moves(units_.size());
  for (std::size_t k = units_.size(); k-- > 0;) {
    const std::uint64_t radix = factors_[k].size();
    moves[k] = {units_[k], factors_[k][index % radix]};
    index /= radix;
  }
  return PlayerAction(std::move(moves));
}

ActionSpace::iterator ActionSpace::begin() const {
  iterator it;
  it.space_ = this;
  it.digits_.assign(units_.size(), 0);
  for (std::size_t k = 0; k < units_.size(); ++k)
    it.current_.push_back({units_[k], factors_[k][0]});
  it.done_ = false;
  return it;
}

ActionSpace::iterator& ActionSpace::iterator::operator++() {
  for (std::size_t k = digits_.size(); k-- > 0;) {
    const auto& f = space_->factors_[k];
    if (++digits_[k] < f.size()) {
      current_.set(k, f[digits_[k]]);
      return *this;
    }
    digits_[k] = 0;
    current_.set(k, f[0]);
  }
  done_ = true;
  return *this;
}

ActionSpace action_space(const GameState& s, Player p, const AbstractionSpec& spec) {
  std::vector<UnitId> units;
  std::vector<std::vector<Move>> factors;
  for (const Unit& u : s.units()) {
    if (u.owner != p || !s.is_ready(u)) continue;
    units.push_back(u.id);
    const bool unrestricted =
        spec.mode == AbstractionMode::kUnabstracted ||
        (spec.mode == AbstractionMode::kAsymmetric &&
         std::find(spec.unrestricted.begin(), spec.unrestricted.end(), u.id) !=
             spec.unrestricted.end());
    std::vector<Move> f;
    if (unrestricted) {
      append_legal_moves(s, u, f);
    } else {
      f = script_moves(s, u.id, spec.portfolio);
    }
    factors.push_back(std::move(f));
  }
  return ActionSpace(std::move(units), std::move(factors));
}

ActionSpace enumerate_actions(const GameState& s, Player p, const AbstractionSpec& spec) {
  if (!has_ready_unit(s, p))
    throw PreconditionError(std::string("player ") + std::string(to_string(p)) +
                            " has no ready unit to act with");
  return action_space(s, p, spec);
}

std::string_view to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::kMoreAttackValue: return "av+";
    case SelectionStrategy::kLessAttackValue: return "av-";
    case SelectionStrategy::kRandom: return "random";
  }
  return "?";
}

SelectionStrategy parse_selection(std::string_view text) {
  if (text == "av+" || text == "AV+") return SelectionStrategy::kMoreAttackValue;
  if (text == "av-" || text == "AV-") return SelectionStrategy::kLessAttackValue;
  if (text == "random" || text == "r" || text == "R") return SelectionStrategy::kRandom;
  throw ConfigError("unknown selection strategy '" + std::string(text) + "'");
}

std::vector<UnitId> select_unrestricted(const GameState& s, Player p, SelectionState& sel) {
  const auto n = static_cast<std::size_t>(std::max(sel.set_size, 0));

  if (sel.strategy == SelectionStrategy::kRandom) {
    std::vector<UnitId> living;
    for (const Unit& u : s.units())
      if (u.owner == p) living.push_back(u.id);
    if (!sel.anchored) {
      sel.anchored = true;
      sel.rng.shuffle(std::span<UnitId>(living));
      living.resize(std::min(n, living.size()));
      sel.current = std::move(living);
      std::sort(sel.current.begin(), sel.current.end());
      return sel.current;
    }
    std::erase_if(sel.current, [&](UnitId id) {
      const Unit* u = s.find(id);
      return !u || u->owner != p;
    });
    std::vector<UnitId> restricted;
    for (UnitId id : living)
      if (std::find(sel.current.begin(), sel.current.end(), id) == sel.current.end())
        restricted.push_back(id);
    while (sel.current.size() < n && !restricted.empty()) {
      const auto k = static_cast<std::size_t>(sel.rng.below(restricted.size()));
      sel.current.push_back(restricted[k]);
      restricted.erase(restricted.begin() + static_cast<std::ptrdiff_t>(k));
    }
    std::sort(sel.current.begin(), sel.current.end());
    return sel.current;
  }

  std::vector<std::pair<double, UnitId>> ranked;
  for (const Unit& u : s.units())
    if (u.owner == p && s.is_ready(u)) ranked.emplace_back(attack_value(s, u), u.id);
  sel.rng.shuffle(std::span<std::pair<double, UnitId>>(ranked));
  if (sel.strategy == SelectionStrategy::kMoreAttackValue) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
  } else {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::vector<UnitId> out;
  for (std::size_t k = 0; k < ranked.size() && k < n; ++k) out.push_back(ranked[k].second);
  std::sort(out.begin(), out.end());
  sel.current = out;
  return out;
}

}  // namespace asym
