#include "shootout/balance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shootout/chain_solver.hpp"

namespace shootout {

namespace {

double fairness_residual(int m, int n, double p, double q) {
  const auto sol = solve_round_model(RuleParams{m, n, p, q});
  return sol.p_a_win - sol.p_b_win;
}

}  // namespace

BalanceResult balancing_probability(int m, int n, double p, const BalanceOptions& options) {
  RuleParams{m, n, p, 0.5}.validate();

  double lo = options.bracket_lo;
  double hi = options.bracket_hi;
  const double f_lo = fairness_residual(m, n, p, lo);
  const double f_hi = fairness_residual(m, n, p, hi);
  if (!(f_lo > 0.0) || !(f_hi < 0.0))
    throw SolverFailure("balancing_probability: P_A - P_B does not change sign on [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "] for p=" +
                        std::to_string(p));

  BalanceResult best{lo, f_lo, 0};
  for (int it = 1; it <= options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    // Bracket collapsed to adjacent doubles.
    if (!(lo < mid && mid < hi)) break;
    const double f_mid = fairness_residual(m, n, p, mid);
    if (std::abs(f_mid) <= std::abs(best.residual)) best = {mid, f_mid, it};
    best.iterations = it;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(best.residual) <= options.residual_tolerance && hi - lo <= options.q_tolerance)
      return best;
  }
  if (std::abs(best.residual) <= options.residual_tolerance) return best;
  throw SolverFailure("balancing_probability: residual " + std::to_string(best.residual) +
                      " above tolerance after bisection");
}

std::vector<double> default_q_grid(int size) {
  if (size < 2) throw InvalidArgument("grid size must be at least 2");
  std::vector<double> grid(static_cast<std::size_t>(size));
  const double lo = 0.005;
  const double hi = 0.995;
  for (int i = 0; i < size; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (size - 1);
  return grid;
}

std::vector<SweepRow> sweep_q(int m, int n, double p, std::span<const double> q_grid) {
  std::vector<SweepRow> rows;
  rows.reserve(q_grid.size());
  for (const double q : q_grid) {
    const RuleParams params{m, n, p, q};
    params.validate();
    const auto round = solve_round_model(params);
    const auto seq = solve_sequential_model(params);
    rows.push_back({q, round.p_a_win, round.p_b_win, round.expected_rounds, seq.q_a_win,
                    seq.expected_rounds});
  }
  return rows;
}

double HandicapCandidate::fairness_gap() const { return std::abs(p_a - 0.5); }

std::vector<HandicapCandidate> handicap_search(double p, double q, int m_max) {
  if (m_max < 2) throw InvalidArgument("m_max must be at least 2");
  std::vector<HandicapCandidate> out;
  for (int m = 2; m <= m_max; ++m)
    for (int n = 1; n < m; ++n)
      out.push_back({m, n, solve_round_model(RuleParams{m, n, p, q}).p_a_win});
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.fairness_gap() < y.fairness_gap();
  });
  return out;
}

}  // namespace shootout
