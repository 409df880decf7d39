#pragma once

#include <cstdint>
#include <string>

#include "shootout/core_model.hpp"

namespace shootout {

struct SimConfig {
  RuleParams params;
  ShootoutModel model = ShootoutModel::RoundBased;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  // Sudden-death rounds played before a trial is recorded as Unresolved.
  // For the sequential model the cap applies to the total number of rounds.
  int sd_round_cap = 10'000;
  // 0 means one worker per hardware thread.
  unsigned threads = 0;

  void validate() const;
};

/// Batch statistics. Frequencies and means are taken over resolved trials
/// only; censored trials are counted in `unresolved_count`.
struct BatchEstimate {
  std::uint64_t trials = 0;
  std::uint64_t resolved = 0;
  std::uint64_t a_wins = 0;
  std::uint64_t unresolved_count = 0;
  double a_win_freq = 0.0;
  double ci95_halfwidth_winfreq = 0.0;
  double mean_rounds = 0.0;
  double stddev_rounds = 0.0;
};

/// One shootout, fully determined by (config.seed, trial_index). Kicks are
/// drawn A then B each round; regulation is adjudicated through
/// adjudicate_round and sudden death through adjudicate_sudden_death.
Transcript simulate_one(const SimConfig& config, std::uint64_t trial_index);

/// Runs config.trials independent shootouts (trial indices 0..trials-1).
/// Bit-identical for identical configs regardless of thread count.
BatchEstimate estimate(const SimConfig& config);

/// Two-row kick table in the style of the classic shootout examples: one
/// column per round, a check mark for a goal and a cross for a miss, and a
/// result column such as "A wins 5-3" or "Sudden Death 5-4".
std::string render_transcript(const Transcript& t);

/// The text of the result column.
std::string result_label(const Transcript& t);

}  // namespace shootout
