#include "shootout/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "shootout/rng.hpp"

namespace shootout {

void SimConfig::validate() const {
  params.validate();
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (sd_round_cap < 1) throw InvalidArgument("sd_round_cap must be at least 1");
}

namespace {

__extension__ using Wide = unsigned __int128;

struct TrialOutcome {
  ShootoutResult result = ShootoutResult::Unresolved;
  std::uint64_t half_rounds = 0;  // rounds played, in units of half a round
};

struct NoRecord {
  void regulation(bool, bool) {}
  void sudden_death(bool, bool) {}
  void partial(bool) {}
};

struct Record {
  Transcript* t;
  void regulation(bool a, bool b) { t->rounds.push_back({a, b}); }
  void sudden_death(bool a, bool b) { t->sd_rounds.push_back({a, b}); }
  void partial(bool a) {
    t->rounds.push_back({a, false});
    t->last_round_partial = true;
  }
};

template <typename Recorder>
TrialOutcome play_round_model(const SimConfig& c, Xoshiro256& rng, Recorder& rec) {
  const RuleParams& rp = c.params;
  int a = 0;
  int b = 0;
  std::uint64_t rounds = 0;
  RoundVerdict verdict = RoundVerdict::Continue;
  while (verdict == RoundVerdict::Continue) {
    const bool a_scored = rng.bernoulli(rp.p);
    const bool b_scored = rng.bernoulli(rp.q);
    rec.regulation(a_scored, b_scored);
    a += a_scored;
    b += b_scored;
    ++rounds;
    verdict = adjudicate_round_unchecked(rp.m, rp.n, a, b);
  }
  if (verdict == RoundVerdict::AWins) return {ShootoutResult::AWins, 2 * rounds};
  if (verdict == RoundVerdict::BWins) return {ShootoutResult::BWins, 2 * rounds};

  for (int sd = 0; sd < c.sd_round_cap; ++sd) {
    const bool a_scored = rng.bernoulli(rp.p);
    const bool b_scored = rng.bernoulli(rp.q);
    rec.sudden_death(a_scored, b_scored);
    ++rounds;
    const RoundVerdict v = adjudicate_sudden_death(a_scored, b_scored);
    if (v == RoundVerdict::AWins) return {ShootoutResult::AWins, 2 * rounds};
    if (v == RoundVerdict::BWins) return {ShootoutResult::BWins, 2 * rounds};
  }
  return {ShootoutResult::Unresolved, 2 * rounds};
}

template <typename Recorder>
TrialOutcome play_sequential_model(const SimConfig& c, Xoshiro256& rng, Recorder& rec) {
  const RuleParams& rp = c.params;
  int a = 0;
  int b = 0;
  std::uint64_t kicks = 0;
  for (int round = 0; round < c.sd_round_cap; ++round) {
    const bool a_scored = rng.bernoulli(rp.p);
    ++kicks;
    a += a_scored;
    if (a == rp.m) {
      rec.partial(a_scored);
      return {ShootoutResult::AWins, kicks};
    }
    const bool b_scored = rng.bernoulli(rp.q);
    ++kicks;
    b += b_scored;
    rec.regulation(a_scored, b_scored);
    if (b == rp.n) return {ShootoutResult::BWins, kicks};
  }
  return {ShootoutResult::Unresolved, kicks};
}

template <typename Recorder>
TrialOutcome play(const SimConfig& c, std::uint64_t trial_index, Recorder& rec) {
  Xoshiro256 rng = trial_stream(c.seed, trial_index);
  return c.model == ShootoutModel::RoundBased ? play_round_model(c, rng, rec)
                                              : play_sequential_model(c, rng, rec);
}

struct Tally {
  std::uint64_t resolved = 0;
  std::uint64_t a_wins = 0;
  std::uint64_t unresolved = 0;
  std::uint64_t half_rounds = 0;
  // Squares of half-round counts; exact in integers far beyond practical runs.
  Wide half_rounds_sq = 0;

  void add(const TrialOutcome& o) {
    if (o.result == ShootoutResult::Unresolved) {
      ++unresolved;
      return;
    }
    ++resolved;
    a_wins += o.result == ShootoutResult::AWins;
    half_rounds += o.half_rounds;
    half_rounds_sq += static_cast<Wide>(o.half_rounds) * o.half_rounds;
  }

  void merge(const Tally& other) {
    resolved += other.resolved;
    a_wins += other.a_wins;
    unresolved += other.unresolved;
    half_rounds += other.half_rounds;
    half_rounds_sq += other.half_rounds_sq;
  }
};

Tally run_range(const SimConfig& c, std::uint64_t begin, std::uint64_t end) {
  Tally tally;
  NoRecord rec;
  for (std::uint64_t i = begin; i < end; ++i) tally.add(play(c, i, rec));
  return tally;
}

}  // namespace

Transcript simulate_one(const SimConfig& config, std::uint64_t trial_index) {
  config.validate();
  Transcript t;
  Record rec{&t};
  play(config, trial_index, rec);

  // Derive result and scores through the replay functions so the transcript
  // is consistent with the rule by construction.
  if (config.model == ShootoutModel::RoundBased) {
    Transcript replayed = replay_round_model(config.params, t.rounds, t.sd_rounds);
    return replayed;
  }
  std::vector<bool> kicks;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    kicks.push_back(t.rounds[i].a_scored);
    if (!(t.last_round_partial && i + 1 == t.rounds.size())) kicks.push_back(t.rounds[i].b_scored);
  }
  return replay_sequential_model(config.params, kicks);
}

BatchEstimate estimate(const SimConfig& config) {
  config.validate();
  unsigned workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, workers);
  if (config.trials < 10'000) workers = 1;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, config.trials));

  std::vector<Tally> partial(workers);
  if (workers == 1) {
    partial[0] = run_range(config, 0, config.trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = config.trials / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = w + 1 == workers ? config.trials : begin + chunk;
      pool.emplace_back([&, w, begin, end] { partial[w] = run_range(config, begin, end); });
    }
    for (auto& th : pool) th.join();
  }
  Tally total;
  for (const Tally& t : partial) total.merge(t);

  BatchEstimate out;
  out.trials = config.trials;
  out.resolved = total.resolved;
  out.a_wins = total.a_wins;
  out.unresolved_count = total.unresolved;
  if (total.resolved > 0) {
    const double n = static_cast<double>(total.resolved);
    out.a_win_freq = static_cast<double>(total.a_wins) / n;
    out.ci95_halfwidth_winfreq = 1.96 * std::sqrt(out.a_win_freq * (1.0 - out.a_win_freq) / n);
    const double mean_half = static_cast<double>(total.half_rounds) / n;
    out.mean_rounds = mean_half / 2.0;
    if (total.resolved > 1) {
      const double sq = static_cast<double>(total.half_rounds_sq);
      const double var_half = std::max(0.0, (sq - n * mean_half * mean_half) / (n - 1.0));
      out.stddev_rounds = std::sqrt(var_half) / 2.0;
    }
  }
  return out;
}

std::string result_label(const Transcript& t) {
  std::ostringstream os;
  auto score = [&os](std::pair<int, int> s) { os << s.first << '-' << s.second; };
  auto outcome = [&]() {
    switch (t.result) {
      case ShootoutResult::AWins: os << "A wins "; break;
      case ShootoutResult::BWins: os << "B wins "; break;
      case ShootoutResult::Unresolved: os << "Unresolved "; break;
    }
    score(t.final_score);
  };

  if (!t.reached_sudden_death) {
    outcome();
    return os.str();
  }
  os << "Sudden Death ";
  score(t.regulation_score);
  if (!t.sd_rounds.empty()) {
    os << ", then ";
    outcome();
    if (t.result == ShootoutResult::Unresolved)
      os << " after " << t.sd_rounds.size() << " sudden-death rounds";
  }
  return os.str();
}

std::string render_transcript(const Transcript& t) {
  constexpr const char* kGoal = "✓";
  constexpr const char* kMiss = "✗";
  constexpr int kCell = 5;

  std::vector<std::string> headers;
  std::vector<std::string> a_cells;
  std::vector<std::string> b_cells;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    headers.push_back("R" + std::to_string(i + 1));
    a_cells.push_back(t.rounds[i].a_scored ? kGoal : kMiss);
    const bool skipped = t.last_round_partial && i + 1 == t.rounds.size();
    b_cells.push_back(skipped ? "-" : (t.rounds[i].b_scored ? kGoal : kMiss));
  }
  for (std::size_t i = 0; i < t.sd_rounds.size(); ++i) {
    headers.push_back("SD" + std::to_string(i + 1));
    a_cells.push_back(t.sd_rounds[i].a_scored ? kGoal : kMiss);
    b_cells.push_back(t.sd_rounds[i].b_scored ? kGoal : kMiss);
  }

  // Marks are one column wide but several bytes long, so pad by hand.
  auto pad = [](const std::string& cell, bool is_mark) {
    const int width = is_mark ? 1 : static_cast<int>(cell.size());
    return cell + std::string(static_cast<std::size_t>(std::max(1, kCell - width)), ' ');
  };

  std::ostringstream os;
  os << "        ";
  for (const auto& h : headers) os << pad(h, false);
  os << "| Result\n";
  os << "Team A  ";
  for (const auto& c : a_cells) os << pad(c, true);
  os << "| " << result_label(t) << '\n';
  os << "Team B  ";
  for (const auto& c : b_cells) os << pad(c, true);
  os << "|\n";
  return os.str();
}

}  // namespace shootout
