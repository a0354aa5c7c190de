#include <chrono>
#include <cmath>

#include "asym/harness.hpp"

namespace asym {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kWinFirst: return "win_first";
    case Outcome::kWinSecond: return "win_second";
    case Outcome::kDraw: return "draw";
  }
  return "?";
}

Outcome parse_outcome(std::string_view text) {
  if (text == "win_first") return Outcome::kWinFirst;
  if (text == "win_second") return Outcome::kWinSecond;
  if (text == "draw") return Outcome::kDraw;
  throw ConfigError("unknown outcome '" + std::string(text) + "'");
}

Outcome outcome_of(const GameState& s) {
  const TerminalStatus t = is_terminal(s);
  if (!t.terminal) throw PreconditionError("outcome of a non-terminal state");
  if (std::abs(*t.utility) < 1e-9) return Outcome::kDraw;
  return *t.utility > 0 ? Outcome::kWinFirst : Outcome::kWinSecond;
}

MatchRecord run_match(Agent& first, Agent& second, const GameState& scenario,
                      const SearchBudget& budget, const MatchOptions& options) {
  MatchRecord rec;
  rec.agent_first = first.name();
  rec.agent_second = second.name();
  rec.budget = budget;
  rec.initial = scenario;

  Agent* agents[2] = {&first, &second};
  GameState s = scenario;
  while (!terminal(s)) {
    TransitionLog log;
    log.frame = s.frame();
    PlayerAction* actions[2] = {&log.first, &log.second};
    std::optional<double>* evals[2] = {&log.eval_first, &log.eval_second};
    double* times[2] = {&log.ms_first, &log.ms_second};
    for (Player p : {Player::kFirst, Player::kSecond}) {
      if (!has_ready_unit(s, p)) continue;
      const int i = player_index(p);
      const auto t0 = std::chrono::steady_clock::now();
      Decision d = agents[i]->decide(s, p, budget);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      rec.latencies_ms.push_back(ms);
      if (d.ran_second_step) rec.second_step_ms[i].push_back(d.second_step_ms);
      *actions[i] = std::move(d.action);
      *evals[i] = d.value;
      *times[i] = ms;
      if (options.forfeit_enabled && budget.mode == SearchBudget::Mode::kWallClock &&
          ms > static_cast<double>(budget.limit) + options.forfeit_slack_ms) {
        rec.forfeit = p;
      }
    }
    if (rec.forfeit) break;
    s = apply(s, log.first, log.second);
    if (options.keep_log) rec.transitions.push_back(std::move(log));
  }

  rec.final_state = s;
  rec.final_ltd2 = ltd2(s, Player::kFirst);
  if (rec.forfeit) {
    rec.outcome = *rec.forfeit == Player::kFirst ? Outcome::kWinSecond : Outcome::kWinFirst;
  } else {
    rec.outcome = outcome_of(s);
  }
  return rec;
}

bool verify_replay(const MatchRecord& rec) {
  GameState s = rec.initial;
  for (const TransitionLog& t : rec.transitions) {
    if (s.frame() != t.frame || terminal(s)) return false;
    try {
      s = apply(s, t.first, t.second);
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  return s == rec.final_state;
}

}  // namespace asym
