#include "shootout/core_model.hpp"

namespace shootout {

void validate_state(const RuleParams& params, const ScoreState& state) {
  params.validate();
  if (state.round < 1) throw InvalidArgument("round must be positive");
  if (state.a_goals < 0 || state.b_goals < 0)
    throw InvalidArgument("goal counts must be non-negative");
  if (state.a_goals > state.round || state.b_goals > state.round)
    throw InvalidArgument("a team cannot score more goals than rounds played");
  if (state.phase == Phase::Regulation && (state.a_goals > params.m || state.b_goals > params.n))
    throw InvalidArgument("regulation score exceeds the (m, n) targets");
}

RoundVerdict adjudicate_round(const RuleParams& params, const ScoreState& state) {
  validate_state(params, state);
  if (state.phase != Phase::Regulation)
    throw InvalidArgument("adjudicate_round requires a regulation state");
  return adjudicate_round_unchecked(params.m, params.n, state.a_goals, state.b_goals);
}

Transcript replay_round_model(const RuleParams& params, const std::vector<KickPair>& rounds,
                              const std::vector<KickPair>& sd_rounds) {
  params.validate();
  Transcript t;
  t.rounds = rounds;
  t.sd_rounds = sd_rounds;

  ScoreState state;
  RoundVerdict verdict = RoundVerdict::Continue;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    if (verdict != RoundVerdict::Continue)
      throw InvalidArgument("kicks recorded after regulation was decided (round " +
                            std::to_string(i + 1) + ")");
    state.round = static_cast<int>(i + 1);
    state.a_goals += rounds[i].a_scored ? 1 : 0;
    state.b_goals += rounds[i].b_scored ? 1 : 0;
    verdict = adjudicate_round(params, state);
  }
  t.regulation_score = {state.a_goals, state.b_goals};
  t.final_score = t.regulation_score;

  switch (verdict) {
    case RoundVerdict::AWins:
      t.result = ShootoutResult::AWins;
      break;
    case RoundVerdict::BWins:
      t.result = ShootoutResult::BWins;
      break;
    case RoundVerdict::Continue:
      t.result = ShootoutResult::Unresolved;
      break;
    case RoundVerdict::GoToSuddenDeath:
      t.reached_sudden_death = true;
      break;
  }
  if (!t.reached_sudden_death) {
    if (!sd_rounds.empty())
      throw InvalidArgument("sudden-death kicks recorded but regulation did not end at (m, n)");
    return t;
  }

  RoundVerdict sd_verdict = RoundVerdict::Continue;
  for (std::size_t i = 0; i < sd_rounds.size(); ++i) {
    if (sd_verdict != RoundVerdict::Continue)
      throw InvalidArgument("kicks recorded after sudden death was decided");
    t.final_score.first += sd_rounds[i].a_scored ? 1 : 0;
    t.final_score.second += sd_rounds[i].b_scored ? 1 : 0;
    sd_verdict = adjudicate_sudden_death(sd_rounds[i].a_scored, sd_rounds[i].b_scored);
  }
  t.result = sd_verdict == RoundVerdict::AWins   ? ShootoutResult::AWins
             : sd_verdict == RoundVerdict::BWins ? ShootoutResult::BWins
                                                 : ShootoutResult::Unresolved;
  return t;
}

Transcript replay_sequential_model(const RuleParams& params, const std::vector<bool>& kicks) {
  params.validate();
  Transcript t;
  int a = 0;
  int b = 0;
  for (std::size_t k = 0; k < kicks.size(); ++k) {
    if (t.result != ShootoutResult::Unresolved)
      throw InvalidArgument("kicks recorded after the sequential shootout was decided");
    const bool a_kicks = k % 2 == 0;
    if (a_kicks) {
      t.rounds.push_back({kicks[k], false});
      a += kicks[k] ? 1 : 0;
      if (a == params.m) {
        t.result = ShootoutResult::AWins;
        t.last_round_partial = true;
      }
    } else {
      t.rounds.back().b_scored = kicks[k];
      b += kicks[k] ? 1 : 0;
      if (b == params.n) t.result = ShootoutResult::BWins;
    }
  }
  // An unfinished record whose last round only has A's kick is partial too.
  if (kicks.size() % 2 == 1) t.last_round_partial = true;
  t.final_score = {a, b};
  t.regulation_score = t.final_score;
  return t;
}

std::string to_string(RoundVerdict v) {
  switch (v) {
    case RoundVerdict::AWins: return "AWins";
    case RoundVerdict::BWins: return "BWins";
    case RoundVerdict::GoToSuddenDeath: return "GoToSuddenDeath";
    case RoundVerdict::Continue: return "Continue";
  }
  return "?";
}

std::string to_string(ShootoutResult r) {
  switch (r) {
    case ShootoutResult::AWins: return "AWins";
    case ShootoutResult::BWins: return "BWins";
    case ShootoutResult::Unresolved: return "Unresolved";
  }
  return "?";
}

std::string to_string(ShootoutModel model) {
  return model == ShootoutModel::RoundBased ? "round" : "sequential";
}

}  // namespace shootout
