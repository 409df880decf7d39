#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shootout/errors.hpp"

namespace shootout {

/// An (m, n) shootout instance: A kicks first in every round and needs m
/// goals, B kicks second and needs n < m goals. p and q are the per-kick
/// success probabilities of A and B.
template <typename Scalar>
struct BasicRuleParams {
  int m = 5;
  int n = 4;
  Scalar p = Scalar(0.75);
  Scalar q = Scalar(0.60);

  /// Throws InvalidArgument unless m > n >= 1 and 0 < p, q < 1.
  void validate() const {
    if (n < 1) throw InvalidArgument("n must be a positive integer, got " + std::to_string(n));
    if (m <= n)
      throw InvalidArgument("m must exceed n, got m=" + std::to_string(m) +
                            " n=" + std::to_string(n));
    // Written as negations so NaN is rejected too.
    if (!(p > Scalar(0) && p < Scalar(1)))
      throw InvalidArgument("p must lie in the open interval (0,1)");
    if (!(q > Scalar(0) && q < Scalar(1)))
      throw InvalidArgument("q must lie in the open interval (0,1)");
  }
};

using RuleParams = BasicRuleParams<double>;

enum class Phase { Regulation, SuddenDeath };

/// Running score. For adjudication the counts are taken after both kicks of
/// `round` have been taken.
struct ScoreState {
  int a_goals = 0;
  int b_goals = 0;
  int round = 1;
  Phase phase = Phase::Regulation;
};

enum class RoundVerdict { AWins, BWins, GoToSuddenDeath, Continue };

enum class Team { A, B };

enum class ShootoutResult { AWins, BWins, Unresolved };

/// Round-based: A and B kick in rounds and targets are checked at the end of
/// each round. Sequential: single alternating kicks, first to its target wins.
enum class ShootoutModel { RoundBased, Sequential };

/// Checks the ScoreState invariants against `params`; throws InvalidArgument.
void validate_state(const RuleParams& params, const ScoreState& state);

/// End-of-round verdict for a regulation round.
RoundVerdict adjudicate_round(const RuleParams& params, const ScoreState& state);

/// adjudicate_round without validation, for callers that maintain the
/// ScoreState invariants themselves (the simulator's inner loop).
constexpr RoundVerdict adjudicate_round_unchecked(int m, int n, int a_goals, int b_goals) noexcept {
  const bool a_done = a_goals == m;
  const bool b_done = b_goals == n;
  if (a_done && b_done) return RoundVerdict::GoToSuddenDeath;
  if (a_done) return RoundVerdict::AWins;
  if (b_done) return RoundVerdict::BWins;
  return RoundVerdict::Continue;
}

/// Verdict for one sudden-death round.
constexpr RoundVerdict adjudicate_sudden_death(bool a_scored, bool b_scored) noexcept {
  if (a_scored && !b_scored) return RoundVerdict::AWins;
  if (!a_scored && b_scored) return RoundVerdict::BWins;
  return RoundVerdict::Continue;
}

struct KickPair {
  bool a_scored = false;
  bool b_scored = false;

  friend bool operator==(const KickPair&, const KickPair&) = default;
};

/// Kick-by-kick record of one shootout, shaped like the round tables used
/// to explain the rule. `final_score` counts every goal, sudden death
/// included. `regulation_score` is the score when regulation ended and
/// `reached_sudden_death` is set when that score was exactly (m, n).
///
/// For the sequential (alternating-kick) model `last_round_partial` is set
/// when A's clinching kick ended the shootout before B's kick of that round;
/// the b_scored flag of that last round is then meaningless and false.
struct Transcript {
  std::vector<KickPair> rounds;
  std::vector<KickPair> sd_rounds;
  ShootoutResult result = ShootoutResult::Unresolved;
  std::pair<int, int> final_score{0, 0};
  std::pair<int, int> regulation_score{0, 0};
  bool reached_sudden_death = false;
  bool last_round_partial = false;

  int total_rounds() const noexcept {
    return static_cast<int>(rounds.size() + sd_rounds.size());
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Replays kick outcomes through the round-based rule and returns the
/// resulting transcript. Throws InvalidArgument if kicks continue after the
/// shootout was decided, or if sudden-death kicks are given although
/// regulation never reached (m, n). A regulation that has not yet produced a
/// verdict, or a sudden death that has not been decided, yields Unresolved.
Transcript replay_round_model(const RuleParams& params, const std::vector<KickPair>& rounds,
                              const std::vector<KickPair>& sd_rounds = {});

/// Replays an alternating-kick (sequential model) record: A, B, A, B, ...
/// with the first team to reach its target winning immediately.
Transcript replay_sequential_model(const RuleParams& params, const std::vector<bool>& kicks);

std::string to_string(RoundVerdict v);
std::string to_string(ShootoutResult r);
std::string to_string(ShootoutModel model);

}  // namespace shootout
