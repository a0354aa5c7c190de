#include <algorithm>
#include <cctype>

#include "asym/harness.hpp"
#include "asym/rng.hpp"

namespace asym {

namespace {

struct Preset {
  const char* name;
  std::vector<std::string> kinds;
  int units;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = {
      {"zl8", {"Zl"}, 8},
      {"dg8", {"Dg"}, 8},
      {"zldg8", {"Zl", "Dg"}, 8},
      {"zldglg6", {"Zl", "Dg", "Lg"}, 6},
      {"all8", {"Zl", "Dg", "Lg", "Mr"}, 8},
      {"zl16", {"Zl"}, 16},
      {"zl50", {"Zl"}, 50},
  };
  return kPresets;
}

}  // namespace

ScenarioConfig scenario_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (name == p.name) {
      ScenarioConfig c;
      c.name = p.name;
      c.kinds = p.kinds;
      c.units_per_side = p.units;
      return c;
    }
  }
  throw ConfigError("unknown scenario preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const Preset& p : presets()) out.emplace_back(p.name);
  return out;
}

std::vector<std::string> desk_scale_presets() {
  return {"zl8", "dg8", "zldg8", "zldglg6", "all8"};
}

GameState generate_scenario(const ScenarioConfig& c) {
  if (c.kinds.empty()) throw ConfigError("scenario needs at least one unit kind");
  if (c.units_per_side < 1) throw ConfigError("scenario needs at least one unit per side");
  if (c.units_per_side % static_cast<int>(c.kinds.size()) != 0)
    throw ConfigError("units_per_side must be divisible by the number of kinds");
  if (c.placement_jitter < 0 || c.separation_offset < 0)
    throw ConfigError("jitter and separation offset must be nonnegative");

  const KindTable& table = *c.table;
  std::vector<KindId> kinds;
  for (const auto& k : c.kinds) kinds.push_back(table.at(k));

  const int cx = c.arena.width / 2, cy = c.arena.height / 2;
  for (KindId k : kinds) {
    const UnitKind& kind = table[k];
    const int far_x = cx + c.placement_jitter + c.separation_offset;
    const int near_x = cx + c.separation_offset;
    const bool fits = in_bounds(c.arena, kind, far_x, cy - c.placement_jitter) &&
                      in_bounds(c.arena, kind, far_x, cy + c.placement_jitter) &&
                      in_bounds(c.arena, kind, c.arena.width - far_x, cy) &&
                      in_bounds(c.arena, kind, c.arena.width - near_x, cy) &&
                      in_bounds(c.arena, kind, near_x, cy);
    if (!fits)
      throw ConfigError("units of kind " + kind.name + " do not fit a " +
                        std::to_string(c.arena.width) + "x" +
                        std::to_string(c.arena.height) +
                        " arena with this jitter and offset; use a larger arena");
  }

  Rng rng(c.seed);
  const int n = c.units_per_side;
  const int per_kind = n / static_cast<int>(kinds.size());
  std::vector<Unit> units;
  units.reserve(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    Unit u;
    u.id = k;
    u.owner = Player::kFirst;
    u.kind = kinds[static_cast<std::size_t>(k / per_kind)];
    u.hp = table[u.kind].hp0;
    const int dx = rng.between(0, c.placement_jitter);
    const int dy = rng.between(-c.placement_jitter, c.placement_jitter);
    u.x = cx + dx + c.separation_offset;
    u.y = cy + dy;
    units.push_back(u);
  }
  for (int k = 0; k < n; ++k) {
    Unit u = units[static_cast<std::size_t>(k)];
    u.id = n + k;
    u.owner = Player::kSecond;
    u.x = c.arena.width - u.x;
    units.push_back(u);
  }
  return GameState(c.table, c.arena, c.frame_cap, std::move(units));
}

namespace {

class ScriptAgent : public Agent {
 public:
  explicit ScriptAgent(Script script) : script_(std::move(script)) {}
  std::string name() const override { return "script:" + script_.name; }
  Decision decide(const GameState& s, Player p, const SearchBudget&) override {
    Decision d;
    d.action = script_action(s, p, script_);
    return d;
  }

 private:
  Script script_;
};

enum class Algorithm { kPgs, kSss, kGas, kGab, kSab, kGabP, kSabP };

struct AlgorithmName {
  const char* name;
  Algorithm algorithm;
};

constexpr AlgorithmName kAlgorithms[] = {
    {"pgs", Algorithm::kPgs}, {"sss", Algorithm::kSss},   {"gas", Algorithm::kGas},
    {"gab", Algorithm::kGab}, {"sab", Algorithm::kSab},   {"gab_p", Algorithm::kGabP},
    {"sab_p", Algorithm::kSabP},
};

class SearchAgent : public Agent {
 public:
  SearchAgent(std::string name, Algorithm algorithm, const AgentConfig& config,
              std::uint64_t seed)
      : name_(std::move(name)),
        algorithm_(algorithm),
        config_(config),
        selection_(config.selection, config.unrestricted_n, seed),
        types_(type_system_by_name(config.type_system)),
        eval_(playout_evaluator(config.playout_steps)) {}

  std::string name() const override { return name_; }

  Decision decide(const GameState& s, Player p, const SearchBudget& budget) override {
    BudgetTracker tracker(budget);
    Decision d;
    const Portfolio& P = config_.portfolio;
    TwoStepOptions opts;
    opts.max_depth = config_.max_depth;
    auto take_first = [&](FirstStepResult r) {
      d.action = std::move(r.action);
      d.value = r.value;
    };
    auto take_two = [&](TwoStepResult r) {
      d.action = std::move(r.action);
      d.value = r.value;
      d.ran_second_step = r.ran_second_step;
      d.chose_second = r.chose_second;
      d.second_step_ms = r.second_step_ms;
    };
    switch (algorithm_) {
      case Algorithm::kPgs:
        take_first(pgs(s, p, P, tracker, eval_));
        break;
      case Algorithm::kSss:
        take_first(sss(s, p, P, tracker, eval_, types_));
        break;
      case Algorithm::kGas: {
        std::vector<UnitId> free = select_unrestricted(s, p, selection_);
        take_first(gas(s, p, P, tracker, eval_, free));
        break;
      }
      case Algorithm::kGab:
        take_two(gab(s, p, P, tracker, eval_, selection_, opts));
        break;
      case Algorithm::kSab:
        take_two(sab(s, p, P, tracker, eval_, selection_, types_, opts));
        break;
      case Algorithm::kGabP:
        opts.restrict_moves = true;
        take_two(gab(s, p, P, tracker, eval_, selection_, opts));
        break;
      case Algorithm::kSabP:
        opts.restrict_moves = true;
        take_two(sab(s, p, P, tracker, eval_, selection_, types_, opts));
        break;
    }
    d.evals = tracker.evals();
    return d;
  }

 private:
  std::string name_;
  Algorithm algorithm_;
  AgentConfig config_;
  SelectionState selection_;
  TypeSystem types_;
  EvalFn eval_;
};

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::unique_ptr<Agent> make_agent(std::string_view name, const AgentConfig& config,
                                  std::uint64_t seed) {
  const std::string key = lower(name);
  if (key.rfind("script:", 0) == 0)
    return std::make_unique<ScriptAgent>(script_by_name(key.substr(7)));
  for (const AlgorithmName& a : kAlgorithms)
    if (key == a.name) return std::make_unique<SearchAgent>(key, a.algorithm, config, seed);
  throw ConfigError("unknown agent '" + std::string(name) + "'");
}

std::vector<std::string> agent_names() {
  std::vector<std::string> out;
  for (const AlgorithmName& a : kAlgorithms) out.emplace_back(a.name);
  out.emplace_back("script:nokav");
  out.emplace_back("script:kiter");
  return out;
}

}  // namespace asym
