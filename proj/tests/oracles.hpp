#pragma once

// Independent reference computations used only by the tests. None of these
// call into the solvers they are used to check.

#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shootout/core_model.hpp"

namespace oracle {

using shootout::RuleParams;

/// Sudden death by summing rounds: A wins on round k+1 after k undecided
/// rounds. `tail` is the undecided mass left after `rounds` rounds.
struct SuddenDeathSums {
  double a_win = 0.0;
  double b_win = 0.0;
  double expected_rounds = 0.0;
  double tail = 1.0;
};

inline SuddenDeathSums sudden_death_by_rounds(double p, double q, int rounds = 5000) {
  SuddenDeathSums out;
  const double a_only = p * (1 - q);
  const double b_only = (1 - p) * q;
  const double stay = p * q + (1 - p) * (1 - q);
  double alive = 1.0;
  for (int k = 1; k <= rounds; ++k) {
    out.a_win += alive * a_only;
    out.b_win += alive * b_only;
    out.expected_rounds += k * alive * (a_only + b_only);
    alive *= stay;
  }
  out.tail = alive;
  return out;
}

/// Exhaustive enumeration of every kick sequence of the round model up to
/// `max_rounds` regulation rounds, depth first, one branch per outcome pair.
/// A sequence that enters sudden death is credited with the sudden-death
/// sums above. Everything still running at the horizon goes to `running`.
struct Enumeration {
  double a_win = 0.0;
  double b_win = 0.0;
  double running = 0.0;
  double rounds_decided = 0.0;  // sum of probability x length over decided mass
  long sequences = 0;
};

inline Enumeration enumerate_round_model(const RuleParams& rp, int max_rounds) {
  const SuddenDeathSums sd = sudden_death_by_rounds(rp.p, rp.q);
  Enumeration e;
  std::function<void(int, int, int, double)> walk = [&](int round, int a, int b, double w) {
    if (round == max_rounds) {
      e.running += w;
      ++e.sequences;
      return;
    }
    for (int ka = 0; ka < 2; ++ka) {
      for (int kb = 0; kb < 2; ++kb) {
        const double ww = w * (ka ? rp.p : 1 - rp.p) * (kb ? rp.q : 1 - rp.q);
        const int na = a + ka;
        const int nb = b + kb;
        const int r = round + 1;
        if (na == rp.m && nb == rp.n) {
          e.a_win += ww * sd.a_win;
          e.b_win += ww * sd.b_win;
          e.running += ww * sd.tail;
          e.rounds_decided += ww * (r * (sd.a_win + sd.b_win) + sd.expected_rounds);
          ++e.sequences;
        } else if (na == rp.m) {
          e.a_win += ww;
          e.rounds_decided += ww * r;
          ++e.sequences;
        } else if (nb == rp.n) {
          e.b_win += ww;
          e.rounds_decided += ww * r;
          ++e.sequences;
        } else {
          walk(r, na, nb, ww);
        }
      }
    }
  };
  walk(0, 0, 0, 1.0);
  return e;
}

/// Absorbing-chain solution via the fundamental matrix: transient states are
/// end-of-round scores (a, b) with a < m, b < n; solves (I - Q) x = r with a
/// dense LU factorisation.
struct FundamentalMatrixSolution {
  double a_win = 0.0;
  double b_win = 0.0;
  double expected_rounds = 0.0;
};

inline FundamentalMatrixSolution solve_by_fundamental_matrix(const RuleParams& rp) {
  const int m = rp.m;
  const int n = rp.n;
  const int size = m * n;
  auto index = [n](int a, int b) { return a * n + b; };
  const double p = rp.p;
  const double q = rp.q;
  const double sd_decide = p + q - 2 * p * q;
  const double sd_a = p * (1 - q) / sd_decide;
  const double sd_rounds = 1.0 / sd_decide;

  Eigen::MatrixXd transient = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd to_a = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd to_b = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd extra_rounds = Eigen::VectorXd::Ones(size);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < n; ++b) {
      const int i = index(a, b);
      const std::pair<std::pair<int, int>, double> moves[] = {
          {{a + 1, b}, p * (1 - q)}, {{a + 1, b + 1}, p * q},
          {{a, b + 1}, (1 - p) * q}, {{a, b}, (1 - p) * (1 - q)}};
      for (const auto& [to, w] : moves) {
        const auto [na, nb] = to;
        if (na == m && nb == n) {
          to_a[i] += w * sd_a;
          to_b[i] += w * (1 - sd_a);
          extra_rounds[i] += w * sd_rounds;
        } else if (na == m) {
          to_a[i] += w;
        } else if (nb == n) {
          to_b[i] += w;
        } else {
          transient(i, index(na, nb)) += w;
        }
      }
    }
  }
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(size, size) - transient;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  FundamentalMatrixSolution out;
  out.a_win = lu.solve(to_a)[0];
  out.b_win = lu.solve(to_b)[0];
  out.expected_rounds = lu.solve(extra_rounds)[0];
  return out;
}

/// Enumerates alternating kicks A, B, A, ... up to `max_kicks`, first team to
/// its target wins.
struct SequentialEnumeration {
  double a_win = 0.0;
  double b_win = 0.0;
  double running = 0.0;
  double kicks_decided = 0.0;
};

inline SequentialEnumeration enumerate_sequential(const RuleParams& rp, int max_kicks) {
  SequentialEnumeration e;
  std::function<void(int, int, int, double)> walk = [&](int kick, int a, int b, double w) {
    if (kick == max_kicks) {
      e.running += w;
      return;
    }
    const bool a_turn = kick % 2 == 0;
    const double s = a_turn ? rp.p : rp.q;
    // goal
    if (a_turn && a + 1 == rp.m) {
      e.a_win += w * s;
      e.kicks_decided += w * s * (kick + 1);
    } else if (!a_turn && b + 1 == rp.n) {
      e.b_win += w * s;
      e.kicks_decided += w * s * (kick + 1);
    } else {
      walk(kick + 1, a + (a_turn ? 1 : 0), b + (a_turn ? 0 : 1), w * s);
    }
    // miss
    walk(kick + 1, a, b, w * (1 - s));
  };
  walk(0, 0, 0, 1.0);
  return e;
}

/// P[Binomial(trials, s) <= k] by direct summation with lgamma.
inline double binomial_cdf(int trials, double s, int k) {
  double acc = 0.0;
  for (int i = 0; i <= std::min(k, trials); ++i) {
    const double log_c = std::lgamma(trials + 1.0) - std::lgamma(i + 1.0) - std::lgamma(trials - i + 1.0);
    acc += std::exp(log_c + i * std::log(s) + (trials - i) * std::log1p(-s));
  }
  return acc;
}

/// {0.1, 0.2, ..., 0.9}
inline std::vector<double> fine_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  return g;
}

/// {0.1, 0.3, 0.5, 0.7, 0.9}
inline std::vector<double> coarse_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; i += 2) g.push_back(i / 10.0);
  return g;
}

}  // namespace oracle
