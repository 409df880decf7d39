#pragma once

#include <span>
#include <utility>
#include <vector>

#include "shootout/core_model.hpp"

namespace shootout {

/// One point of a q-sweep: round-model and sequential-model quantities.
struct SweepRow {
  double q = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double er = 0.0;
  double q_a_sequential = 0.0;
  double er_sequential = 0.0;
};

struct BalanceResult {
  double q_star = 0.0;
  double residual = 0.0;  // P_A - P_B at q_star
  int iterations = 0;
};

struct BalanceOptions {
  double residual_tolerance = 1e-10;
  double q_tolerance = 1e-10;
  double bracket_lo = 1e-9;
  double bracket_hi = 1.0 - 1e-9;
  int max_iterations = 200;
};

/// B's balancing probability: the q at which P_A = P_B, found by bisection
/// on P_A - P_B (strictly decreasing in q) using the exact round model.
/// Throws SolverFailure when the bracket does not contain a sign change.
BalanceResult balancing_probability(int m, int n, double p, const BalanceOptions& options = {});

/// `size` evenly spaced q values on [0.005, 0.995]; the default is 101 points.
std::vector<double> default_q_grid(int size = 101);

/// One SweepRow per grid point, in grid order.
std::vector<SweepRow> sweep_q(int m, int n, double p, std::span<const double> q_grid);

struct HandicapCandidate {
  int m = 0;
  int n = 0;
  double p_a = 0.0;

  double fairness_gap() const;
};

/// Every (m, n) with 1 <= n < m <= m_max, ranked by |P_A - 0.5| (ties keep
/// (m, n) lexicographic order).
std::vector<HandicapCandidate> handicap_search(double p, double q, int m_max);

}  // namespace shootout
