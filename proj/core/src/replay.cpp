#include <iomanip>
#include <istream>
#include <ostream>

#include "asym/harness.hpp"
#include "json.hpp"

namespace asym {

namespace {

using nlohmann::json;

json action_json(const PlayerAction& a) {
  json out = json::array();
  for (const UnitMove& um : a) out.push_back({um.unit, to_string(um.move)});
  return out;
}

PlayerAction action_from_json(const json& j) {
  PlayerAction a;
  for (const json& e : j) {
    auto m = parse_move(e.at(1).get<std::string>());
    if (!m) throw ConfigError("bad move in replay: " + e.dump());
    a.push_back({e.at(0).get<UnitId>(), *m});
  }
  return a;
}

json units_json(const GameState& s) {
  json out = json::array();
  for (const Unit& u : s.units()) {
    out.push_back({{"id", u.id},
                   {"owner", player_index(u.owner)},
                   {"kind", s.kind_of(u).name},
                   {"x", u.x},
                   {"y", u.y},
                   {"hp", u.hp},
                   {"ready", u.ready_frame},
                   {"cooldown", u.cooldown_frame}});
  }
  return out;
}

std::vector<Unit> units_from_json(const json& j, const KindTable& table) {
  std::vector<Unit> units;
  for (const json& e : j) {
    Unit u;
    u.id = e.at("id").get<UnitId>();
    u.owner = e.at("owner").get<int>() == 0 ? Player::kFirst : Player::kSecond;
    u.kind = table.at(e.at("kind").get<std::string>());
    u.x = e.at("x").get<int>();
    u.y = e.at("y").get<int>();
    u.hp = e.at("hp").get<int>();
    u.ready_frame = e.at("ready").get<int>();
    u.cooldown_frame = e.at("cooldown").get<int>();
    units.push_back(u);
  }
  return units;
}

json kinds_json(const KindTable& table) {
  json out = json::array();
  for (const UnitKind& k : table.kinds()) {
    out.push_back({{"name", k.name},
                   {"abbrev", k.abbrev},
                   {"hp0", k.hp0},
                   {"damage", k.damage},
                   {"range", k.range},
                   {"cooldown", k.cooldown},
                   {"speed", k.speed},
                   {"width", k.width},
                   {"height", k.height}});
  }
  return out;
}

KindTable kinds_from_json(const json& j) {
  KindTable table;
  for (const json& e : j) {
    UnitKind k;
    k.name = e.at("name").get<std::string>();
    k.abbrev = e.value("abbrev", std::string());
    k.hp0 = e.at("hp0").get<int>();
    k.damage = e.at("damage").get<int>();
    k.range = e.at("range").get<int>();
    k.cooldown = e.at("cooldown").get<int>();
    k.speed = e.at("speed").get<int>();
    k.width = e.at("width").get<int>();
    k.height = e.at("height").get<int>();
    table.add(std::move(k));
  }
  return table;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void write_replay(std::ostream& out, const MatchRecord& rec) {
  const GameState& s0 = rec.initial;
  json header = {
      {"type", "header"},
      {"seed", rec.seed},
      {"scenario", rec.scenario},
      {"agents", {rec.agent_first, rec.agent_second}},
      {"budget",
       {{"mode", rec.budget.mode == SearchBudget::Mode::kWallClock ? "wallclock" : "nodes"},
        {"limit", rec.budget.limit}}},
      {"arena", {{"width", s0.arena().width}, {"height", s0.arena().height}}},
      {"frame_cap", s0.frame_cap()},
      {"frame", s0.frame()},
      {"kinds", kinds_json(s0.kinds())},
      {"units", units_json(s0)},
  };
  out << header.dump() << '\n';
  for (const TransitionLog& t : rec.transitions) {
    json line = {{"type", "transition"},
                 {"frame", t.frame},
                 {"first", action_json(t.first)},
                 {"second", action_json(t.second)},
                 {"eval_first", optional_number(t.eval_first)},
                 {"eval_second", optional_number(t.eval_second)},
                 {"ms_first", t.ms_first},
                 {"ms_second", t.ms_second}};
    out << line.dump() << '\n';
  }
  json result = {{"type", "result"},
                 {"outcome", std::string(to_string(rec.outcome))},
                 {"final_ltd2", rec.final_ltd2},
                 {"frame", rec.final_state.frame()},
                 {"forfeit", rec.forfeit ? json(player_index(*rec.forfeit)) : json(nullptr)},
                 {"units", units_json(rec.final_state)}};
  out << result.dump() << '\n';
}

MatchRecord read_replay(std::istream& in) {
  MatchRecord rec;
  std::shared_ptr<const KindTable> kinds;
  Arena arena;
  int frame_cap = kDefaultFrameCap;
  bool have_header = false, have_result = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError("replay line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      rec.seed = j.at("seed").get<std::uint64_t>();
      rec.scenario = j.value("scenario", std::string());
      rec.agent_first = j.at("agents").at(0).get<std::string>();
      rec.agent_second = j.at("agents").at(1).get<std::string>();
      const json& b = j.at("budget");
      rec.budget = b.at("mode").get<std::string>() == "wallclock"
                       ? SearchBudget::wall_clock_ms(b.at("limit").get<std::int64_t>())
                       : SearchBudget::node_count(b.at("limit").get<std::int64_t>());
      arena = {j.at("arena").at("width").get<int>(), j.at("arena").at("height").get<int>()};
      frame_cap = j.at("frame_cap").get<int>();
      kinds = std::make_shared<const KindTable>(kinds_from_json(j.at("kinds")));
      rec.initial = GameState(kinds, arena, frame_cap, units_from_json(j.at("units"), *kinds),
                              j.at("frame").get<int>());
      have_header = true;
    } else if (type == "transition") {
      if (!have_header) throw ConfigError("replay transition before header");
      TransitionLog t;
      t.frame = j.at("frame").get<int>();
      t.first = action_from_json(j.at("first"));
      t.second = action_from_json(j.at("second"));
      t.eval_first = number_or_null(j, "eval_first");
      t.eval_second = number_or_null(j, "eval_second");
      t.ms_first = j.value("ms_first", 0.0);
      t.ms_second = j.value("ms_second", 0.0);
      rec.transitions.push_back(std::move(t));
    } else if (type == "result") {
      if (!have_header) throw ConfigError("replay result before header");
      rec.outcome = parse_outcome(j.at("outcome").get<std::string>());
      rec.final_ltd2 = j.at("final_ltd2").get<double>();
      if (!j.at("forfeit").is_null())
        rec.forfeit = j.at("forfeit").get<int>() == 0 ? Player::kFirst : Player::kSecond;
      rec.final_state = GameState(kinds, arena, frame_cap,
                                  units_from_json(j.at("units"), *kinds),
                                  j.at("frame").get<int>());
      have_result = true;
    } else {
      throw ConfigError("unknown replay record type '" + type + "'");
    }
  }
  if (!have_header || !have_result) throw ConfigError("replay is missing its header or result");
  return rec;
}

void print_replay(std::ostream& out, const MatchRecord& rec) {
  out << rec.agent_first << " vs " << rec.agent_second << "  seed " << rec.seed;
  if (!rec.scenario.empty()) out << "  scenario " << rec.scenario;
  out << "  budget " << to_string(rec.budget) << '\n';
  out << "units: " << rec.initial.unit_count(Player::kFirst) << " vs "
      << rec.initial.unit_count(Player::kSecond) << '\n';
  for (const TransitionLog& t : rec.transitions) {
    out << "f" << std::setw(5) << std::left << t.frame << std::right;
    out << " first[" << to_string(t.first) << "]";
    if (t.eval_first) out << " v=" << std::fixed << std::setprecision(2) << *t.eval_first;
    out << " second[" << to_string(t.second) << "]";
    if (t.eval_second) out << " v=" << std::fixed << std::setprecision(2) << *t.eval_second;
    out << '\n';
  }
  out << "result: " << to_string(rec.outcome) << "  ltd2 " << std::fixed << std::setprecision(3)
      << rec.final_ltd2 << "  frame " << rec.final_state.frame();
  if (rec.forfeit) out << "  forfeit by " << to_string(*rec.forfeit);
  out << '\n';
}

}  // namespace asym
