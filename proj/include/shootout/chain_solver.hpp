#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shootout/core_model.hpp"

namespace shootout {

namespace detail {

template <typename Scalar>
void require_open_unit(Scalar x, const char* name) {
  if (!(x > Scalar(0) && x < Scalar(1)))
    throw InvalidArgument(std::string(name) + " must lie in the open interval (0,1)");
}

// Probability that a round (or a pair of kicks) produces a decision in
// sudden death: exactly one of the two teams scores.
template <typename Scalar>
Scalar sd_decision_prob(Scalar p, Scalar q) {
  return p + q - Scalar(2) * p * q;
}

}  // namespace detail

/// A's probability of winning a sudden death in which A kicks first.
template <typename Scalar>
Scalar sudden_death_win_prob(Scalar p, Scalar q) {
  detail::require_open_unit(p, "p");
  detail::require_open_unit(q, "q");
  return p * (Scalar(1) - q) / detail::sd_decision_prob(p, q);
}

/// Expected number of sudden-death rounds until one team scores and the
/// other does not.
template <typename Scalar>
Scalar sudden_death_expected_rounds(Scalar p, Scalar q) {
  detail::require_open_unit(p, "p");
  detail::require_open_unit(q, "q");
  return Scalar(1) / detail::sd_decision_prob(p, q);
}

/// Closed forms of the (2, 1) chain, with the two intermediate values
/// A's win probability from A:(1,0) and from B:(1,0).
template <typename Scalar>
struct TwoOneClosedForm {
  Scalar win_from_a10;
  Scalar win_from_b10;
  Scalar win;
  Scalar expected_rounds;
};

template <typename Scalar>
TwoOneClosedForm<Scalar> closed_form_21(Scalar p, Scalar q) {
  detail::require_open_unit(p, "p");
  detail::require_open_unit(q, "q");
  const Scalar one(1);
  const Scalar sd = detail::sd_decision_prob(p, q);
  const Scalar any_goal = p + q - p * q;
  TwoOneClosedForm<Scalar> out;
  out.win_from_a10 = p * (one - q) / sd;
  out.win_from_b10 = p * (one - q) * (one - q) / sd;
  out.win = p * p * (one - q) * (one - q) / (sd * any_goal);
  out.expected_rounds = (Scalar(2) * p + q - Scalar(3) * p * q) / (sd * any_goal);
  return out;
}

template <typename Scalar>
Scalar closed_form_21_win(Scalar p, Scalar q) {
  return closed_form_21(p, q).win;
}

template <typename Scalar>
Scalar closed_form_21_er(Scalar p, Scalar q) {
  return closed_form_21(p, q).expected_rounds;
}

/// Exact solution of the round-based model.
///
/// `a_win` and `remaining_rounds` are (m+1) x (n+1); entry (a, b) is the
/// value conditional on a round having just ended at score (a, b). The
/// boundary row/column hold the absorbing values: 1 or 0 for a decided
/// regulation, and the sudden-death values at (m, n).
template <typename Scalar>
struct ExactSolution {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Scalar p_a_win{};
  Scalar p_b_win{};
  Scalar expected_rounds{};
  Matrix a_win;
  Matrix remaining_rounds;
};

/// Backward induction over end-of-round scores. The (a,b) -> (a,b) self
/// loop (both miss) is folded in by dividing through by 1 - (1-p)(1-q).
/// B's win probability runs through its own recursion rather than 1 - P_A.
template <typename Scalar>
ExactSolution<Scalar> solve_round_model(const BasicRuleParams<Scalar>& params) {
  params.validate();
  using Matrix = typename ExactSolution<Scalar>::Matrix;
  const int m = params.m;
  const int n = params.n;
  const Scalar one(1);
  const Scalar p = params.p;
  const Scalar q = params.q;

  const Scalar a_only = p * (one - q);
  const Scalar both = p * q;
  const Scalar b_only = (one - p) * q;
  const Scalar leave = one - (one - p) * (one - q);

  Matrix a_win = Matrix::Zero(m + 1, n + 1);
  Matrix b_win = Matrix::Zero(m + 1, n + 1);
  Matrix rounds = Matrix::Zero(m + 1, n + 1);
  for (int b = 0; b < n; ++b) a_win(m, b) = one;
  for (int a = 0; a < m; ++a) b_win(a, n) = one;
  a_win(m, n) = sudden_death_win_prob(p, q);
  b_win(m, n) = q * (one - p) / detail::sd_decision_prob(p, q);
  rounds(m, n) = sudden_death_expected_rounds(p, q);

  for (int a = m - 1; a >= 0; --a) {
    for (int b = n - 1; b >= 0; --b) {
      a_win(a, b) =
          (a_only * a_win(a + 1, b) + both * a_win(a + 1, b + 1) + b_only * a_win(a, b + 1)) /
          leave;
      b_win(a, b) =
          (a_only * b_win(a + 1, b) + both * b_win(a + 1, b + 1) + b_only * b_win(a, b + 1)) /
          leave;
      rounds(a, b) = (one + a_only * rounds(a + 1, b) + both * rounds(a + 1, b + 1) +
                      b_only * rounds(a, b + 1)) /
                     leave;
    }
  }

  ExactSolution<Scalar> out;
  out.p_a_win = a_win(0, 0);
  out.p_b_win = b_win(0, 0);
  out.expected_rounds = rounds(0, 0);
  out.a_win = std::move(a_win);
  out.remaining_rounds = std::move(rounds);
  return out;
}

/// Exact solution of the sequential (alternating-kick) model.
///
/// `expected_rounds` is expected_kicks / 2, so a shootout that ends on A's
/// kick contributes a half round. `expected_rounds_started` counts a round
/// as soon as A kicks in it, i.e. E[ceil(kicks / 2)].
template <typename Scalar>
struct SequentialSolution {
  Scalar q_a_win{};
  Scalar q_b_win{};
  Scalar expected_kicks{};
  Scalar expected_rounds{};
  Scalar expected_rounds_started{};
};

template <typename Scalar>
SequentialSolution<Scalar> solve_sequential_model(const BasicRuleParams<Scalar>& params) {
  params.validate();
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int m = params.m;
  const int n = params.n;
  const Scalar one(1);
  const Scalar p = params.p;
  const Scalar q = params.q;
  const Scalar leave = one - (one - p) * (one - q);

  // Values with A to kick (suffix a) and with B to kick (suffix b) at score
  // (a, b). Both-miss returns to the same A-to-kick state, which is folded
  // in analytically as in the round model.
  Matrix win_a = Matrix::Zero(m, n), win_b = Matrix::Zero(m, n);
  Matrix bwin_a = Matrix::Zero(m, n), bwin_b = Matrix::Zero(m, n);
  Matrix kicks_a = Matrix::Zero(m, n), kicks_b = Matrix::Zero(m, n);
  Matrix started_a = Matrix::Zero(m, n), started_b = Matrix::Zero(m, n);

  for (int a = m - 1; a >= 0; --a) {
    for (int b = n - 1; b >= 0; --b) {
      // After A scores: win, or B to kick at (a+1, b).
      const bool a_clinches = a + 1 == m;
      const Scalar win_x = a_clinches ? one : win_b(a + 1, b);
      const Scalar bwin_x = a_clinches ? Scalar(0) : bwin_b(a + 1, b);
      const Scalar kicks_x = a_clinches ? Scalar(0) : kicks_b(a + 1, b);
      const Scalar started_x = a_clinches ? Scalar(0) : started_b(a + 1, b);
      // After A misses and B scores: B wins, or A to kick at (a, b+1).
      const bool b_clinches = b + 1 == n;
      const Scalar win_y = b_clinches ? Scalar(0) : win_a(a, b + 1);
      const Scalar bwin_y = b_clinches ? one : bwin_a(a, b + 1);
      const Scalar kicks_y = b_clinches ? Scalar(0) : kicks_a(a, b + 1);
      const Scalar started_y = b_clinches ? Scalar(0) : started_a(a, b + 1);

      win_a(a, b) = (p * win_x + (one - p) * q * win_y) / leave;
      bwin_a(a, b) = (p * bwin_x + (one - p) * q * bwin_y) / leave;
      kicks_a(a, b) = (one + (one - p) + p * kicks_x + (one - p) * q * kicks_y) / leave;
      started_a(a, b) = (one + p * started_x + (one - p) * q * started_y) / leave;

      // B to kick at (a, b): B's success leads to (a, b+1) with A to kick.
      win_b(a, b) = q * win_y + (one - q) * win_a(a, b);
      bwin_b(a, b) = q * bwin_y + (one - q) * bwin_a(a, b);
      kicks_b(a, b) = one + q * kicks_y + (one - q) * kicks_a(a, b);
      started_b(a, b) = q * started_y + (one - q) * started_a(a, b);
    }
  }

  SequentialSolution<Scalar> out;
  out.q_a_win = win_a(0, 0);
  out.q_b_win = bwin_a(0, 0);
  out.expected_kicks = kicks_a(0, 0);
  out.expected_rounds = out.expected_kicks / Scalar(2);
  out.expected_rounds_started = started_a(0, 0);
  return out;
}

/// A kick at which the kicking team could deliberately miss.
struct KickState {
  ShootoutModel model = ShootoutModel::RoundBased;
  Phase phase = Phase::Regulation;
  Team kicker = Team::A;
  int a_goals = 0;  // includes A's kick of the current round when B is kicking
  int b_goals = 0;
  bool a_scored_this_round = false;  // sudden death only, meaningful when B kicks

  std::string label() const;
};

struct Deviation {
  KickState state;
  Team team = Team::A;
  double honest_value = 0.0;     // kicker's win probability when kicking honestly
  double deviation_value = 0.0;  // kicker's win probability after a deliberate miss
};

struct DeviationReport {
  std::vector<Deviation> profitable_deviations;
  double game_value = 0.0;    // A's win probability under optimal play
  double honest_value = 0.0;  // A's win probability under honest play
  long iterations = 0;
  std::size_t kick_states = 0;

  bool empty() const noexcept { return profitable_deviations.empty(); }
};

struct AuditOptions {
  double tolerance = 1e-12;
  long max_iterations = 1'000'000;
  double report_threshold = 1e-9;
};

/// Solves the zero-sum game in which, at every kick, the kicker may either
/// kick honestly or miss on purpose, and reports each kick where missing
/// strictly raises the kicker's own win probability. Throws SolverFailure
/// if value iteration does not converge within the cap.
DeviationReport strategyproofness_audit(const RuleParams& params,
                                        ShootoutModel model = ShootoutModel::RoundBased,
                                        const AuditOptions& options = {});

}  // namespace shootout
