#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shootout/chain_solver.hpp"

using namespace shootout;
using doctest::Approx;

TEST_CASE("round model on the (2, 1) and (5, 4) anchors") {
  const auto s21 = solve_round_model(RuleParams{2, 1, 0.75, 0.75});
  CHECK(s21.p_a_win == Approx(0.1).epsilon(1e-13));
  CHECK(s21.expected_rounds == Approx(1.60).epsilon(1e-13));

  const auto s54 = solve_round_model(RuleParams{5, 4, 0.75, 0.60});
  CHECK(std::abs(s54.p_a_win - 0.5) <= 0.01);
  CHECK(std::abs(s54.expected_rounds - 6.06) <= 0.01);
}

TEST_CASE("round model brackets exhaustive kick enumeration") {
  for (const RuleParams& rp : {RuleParams{2, 1, 0.75, 0.75}, RuleParams{3, 2, 0.75, 0.60},
                               RuleParams{3, 2, 0.5, 0.9}, RuleParams{2, 1, 0.6, 0.3}}) {
    const auto exact = solve_round_model(rp);
    const oracle::Enumeration e = oracle::enumerate_round_model(rp, 28);
    CAPTURE(rp.m);
    CAPTURE(rp.p);
    CAPTURE(rp.q);
    CHECK(e.a_win <= exact.p_a_win + 1e-12);
    CHECK(exact.p_a_win <= e.a_win + e.running + 1e-12);
    CHECK(e.b_win <= exact.p_b_win + 1e-12);
    CHECK(exact.p_b_win <= e.b_win + e.running + 1e-12);
    CHECK(e.running < 1e-6);
  }
  // The (2, 1), p = q = 0.75 instance also pins the closed form to the
  // enumeration over 40 rounds.
  const RuleParams rp{2, 1, 0.75, 0.75};
  const oracle::Enumeration e = oracle::enumerate_round_model(rp, 40);
  CHECK(std::abs(e.a_win - 0.1) <= e.running + 1e-12);
}

TEST_CASE("round model agrees with the fundamental-matrix solve") {
  for (const auto& [m, n] : {std::pair{2, 1}, {3, 2}, {5, 4}, {6, 3}, {7, 1}}) {
    for (double p : oracle::coarse_grid()) {
      for (double q : oracle::coarse_grid()) {
        const RuleParams rp{m, n, p, q};
        const auto dp = solve_round_model(rp);
        const auto fm = oracle::solve_by_fundamental_matrix(rp);
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(dp.p_a_win == Approx(fm.a_win).epsilon(1e-11));
        CHECK(dp.p_b_win == Approx(fm.b_win).epsilon(1e-11));
        CHECK(dp.expected_rounds == Approx(fm.expected_rounds).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("sudden death closed forms against summed rounds") {
  for (double p : oracle::fine_grid()) CHECK(sudden_death_win_prob(p, p) == Approx(0.5));
  CHECK(sudden_death_win_prob(0.75, 0.60) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(sudden_death_expected_rounds(0.75, 0.75) == Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(sudden_death_expected_rounds(0.75, 0.60) == Approx(1.0 / 0.45).epsilon(1e-15));
  CHECK(sudden_death_expected_rounds(0.5, 0.5) == 2.0);

  for (double p : oracle::fine_grid()) {
    for (double q : oracle::fine_grid()) {
      const auto sums = oracle::sudden_death_by_rounds(p, q);
      CHECK(sums.tail < 1e-30);
      CHECK(sudden_death_win_prob(p, q) == Approx(sums.a_win).epsilon(1e-12));
      CHECK(sudden_death_expected_rounds(p, q) == Approx(sums.expected_rounds).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(sudden_death_win_prob(0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(sudden_death_expected_rounds(0.5, 1.0), InvalidArgument);
}

TEST_CASE("(2, 1) closed forms") {
  CHECK(closed_form_21_win(0.75, 0.75) == Approx(0.1).epsilon(1e-14));
  CHECK(closed_form_21_er(0.75, 0.75) == Approx(1.60).epsilon(1e-14));
  CHECK(std::abs(closed_form_21_win(0.75, 0.34) - 0.506) <= 0.001);
  CHECK(std::abs(closed_form_21_er(0.75, 0.60) - 1.85) <= 0.005);

  for (double p : oracle::fine_grid()) {
    for (double q : oracle::fine_grid()) {
      const auto cf = closed_form_21(p, q);
      const auto dp = solve_round_model(RuleParams{2, 1, p, q});
      CHECK(std::abs(cf.win - dp.p_a_win) <= 1e-12);
      CHECK(std::abs(cf.expected_rounds - dp.expected_rounds) <= 1e-12);
      // A:(1,0) is the end-of-round state (1, 0); B:(1,0) is one kick later,
      // where B either scores (A loses) or the chain moves to A:(1,0).
      CHECK(std::abs(cf.win_from_a10 - dp.a_win(1, 0)) <= 1e-12);
      CHECK(std::abs(cf.win_from_b10 - (1 - q) * dp.a_win(1, 0)) <= 1e-12);
    }
  }
}

TEST_CASE("round model invariants on the grid") {
  const auto grid = oracle::fine_grid();
  for (const auto& [m, n] : {std::pair{2, 1}, {3, 2}, {4, 3}, {5, 4}, {5, 3}}) {
    for (double p : grid) {
      for (double q : grid) {
        const RuleParams rp{m, n, p, q};
        const auto s = solve_round_model(rp);
        CHECK(std::abs(s.p_a_win + s.p_b_win - 1.0) <= 1e-12);
        CHECK(s.p_a_win >= 0.0);
        CHECK(s.p_a_win <= 1.0);
        CHECK(s.expected_rounds >= n);
        CHECK(s.a_win(m, n) == sudden_death_win_prob(p, q));
        CHECK(s.remaining_rounds(m, n) == sudden_death_expected_rounds(p, q));
      }
    }
    // Monotone in p (increasing) and q (decreasing).
    for (double fixed : grid) {
      for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(solve_round_model(RuleParams{m, n, grid[i], fixed}).p_a_win >
              solve_round_model(RuleParams{m, n, grid[i - 1], fixed}).p_a_win);
        CHECK(solve_round_model(RuleParams{m, n, fixed, grid[i]}).p_a_win <
              solve_round_model(RuleParams{m, n, fixed, grid[i - 1]}).p_a_win);
      }
    }
  }
}

TEST_CASE("harder targets hurt the team that has to reach them") {
  for (double p : oracle::coarse_grid()) {
    for (double q : oracle::coarse_grid()) {
      for (int m = 2; m <= 6; ++m) {
        for (int n = 1; n < m; ++n) {
          const double base = solve_round_model(RuleParams{m, n, p, q}).p_a_win;
          CHECK(solve_round_model(RuleParams{m + 1, n, p, q}).p_a_win <= base + 1e-15);
          if (n + 1 < m) CHECK(solve_round_model(RuleParams{m, n + 1, p, q}).p_a_win >= base - 1e-15);
        }
      }
    }
  }
}

TEST_CASE("long double instantiation matches double") {
  const auto d = solve_round_model(RuleParams{5, 4, 0.75, 0.60});
  const auto ld = solve_round_model(BasicRuleParams<long double>{5, 4, 0.75L, 0.60L});
  CHECK(static_cast<double>(ld.p_a_win) == Approx(d.p_a_win).epsilon(1e-14));
  CHECK(static_cast<double>(ld.expected_rounds) == Approx(d.expected_rounds).epsilon(1e-14));
}

TEST_CASE("sequential model against kick enumeration") {
  for (const RuleParams& rp : {RuleParams{2, 1, 0.75, 0.75}, RuleParams{3, 2, 0.75, 0.60},
                               RuleParams{3, 1, 0.4, 0.7}, RuleParams{2, 1, 0.75, 0.999}}) {
    const auto s = solve_sequential_model(rp);
    const auto e = oracle::enumerate_sequential(rp, 60);
    CAPTURE(rp.m);
    CAPTURE(rp.q);
    CHECK(e.running < 1e-9);
    CHECK(std::abs(s.q_a_win - e.a_win) <= e.running + 1e-12);
    CHECK(std::abs(s.q_b_win - e.b_win) <= e.running + 1e-12);
    CHECK(s.expected_kicks == Approx(e.kicks_decided).epsilon(1e-7));
    CHECK(std::abs(s.q_a_win + s.q_b_win - 1.0) <= 1e-12);
    CHECK(s.expected_kicks >= 2 * rp.n - 1);
    CHECK(s.expected_rounds == s.expected_kicks / 2);
    CHECK(s.expected_rounds_started >= s.expected_rounds);
    CHECK(s.expected_rounds_started <= s.expected_rounds + 0.5);
  }
}

TEST_CASE("sequential model: B scoring almost surely") {
  // A needs two goals but B kicks between A's first and second kick, so A's
  // chances vanish as q -> 1 (they are not p^2).
  const auto s = solve_sequential_model(RuleParams{2, 1, 0.75, 0.999});
  const auto e = oracle::enumerate_sequential(RuleParams{2, 1, 0.75, 0.999}, 60);
  CHECK(s.q_a_win == Approx(e.a_win).epsilon(1e-12));
  CHECK(s.q_a_win < 1e-3);
}

TEST_CASE("sequential and round models at the (5, 4) balance point") {
  // Gap derived by running both solvers (and an independent 30-digit
  // enumeration): Q(A) = 0.557223, P(A) = 0.500819 at q = 0.60.
  const RuleParams rp{5, 4, 0.75, 0.60};
  const double gap = solve_sequential_model(rp).q_a_win - solve_round_model(rp).p_a_win;
  CHECK(gap == Approx(0.0564034).epsilon(1e-5));
  for (double q : {0.55, 0.60, 0.65})
    CHECK(std::abs(solve_sequential_model(RuleParams{5, 4, 0.75, q}).q_a_win -
                   solve_round_model(RuleParams{5, 4, 0.75, q}).p_a_win) < 0.07);
}

TEST_CASE("strategyproofness audit finds no profitable deliberate miss") {
  for (const RuleParams& rp : {RuleParams{5, 4, 0.75, 0.60}, RuleParams{2, 1, 0.75, 0.75},
                               RuleParams{3, 2, 0.9, 0.1}, RuleParams{2, 1, 0.9, 0.9},
                               RuleParams{3, 2, 0.75, 0.34}, RuleParams{6, 2, 0.3, 0.8}}) {
    const DeviationReport r = strategyproofness_audit(rp);
    CHECK(r.empty());
    CHECK(r.honest_value == Approx(solve_round_model(rp).p_a_win).epsilon(1e-10));
    CHECK(r.game_value == Approx(r.honest_value).epsilon(1e-10));

    const DeviationReport seq = strategyproofness_audit(rp, ShootoutModel::Sequential);
    CHECK(seq.empty());
    CHECK(seq.honest_value == Approx(solve_sequential_model(rp).q_a_win).epsilon(1e-10));
  }
}

TEST_CASE("audit reports in the kicker's own terms") {
  // With a negative threshold every kick is listed, which exercises the
  // report path: honest kicking is never worse for the kicker.
  AuditOptions opt;
  opt.report_threshold = -1.0;
  const DeviationReport r = strategyproofness_audit(RuleParams{2, 1, 0.75, 0.75},
                                                    ShootoutModel::RoundBased, opt);
  // (2,1): A nodes (0,0),(1,0); B nodes (0..2, 0); three sudden-death nodes.
  CHECK(r.kick_states == 8);
  CHECK(r.profitable_deviations.size() == 8);
  for (const Deviation& d : r.profitable_deviations) {
    CHECK(d.honest_value >= d.deviation_value - 1e-12);
    CHECK(d.honest_value >= 0.0);
    CHECK(d.honest_value <= 1.0);
    CHECK_FALSE(d.state.label().empty());
  }
}

TEST_CASE("audit surfaces non-convergence") {
  AuditOptions opt;
  opt.max_iterations = 1;
  CHECK_THROWS_AS(strategyproofness_audit(RuleParams{5, 4, 0.75, 0.6}, ShootoutModel::RoundBased, opt),
                  SolverFailure);
}

TEST_CASE("solvers reject invalid parameters") {
  CHECK_THROWS_AS(solve_round_model(RuleParams{4, 4, 0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(solve_sequential_model(RuleParams{5, 4, 1.0, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(strategyproofness_audit(RuleParams{5, 4, 0.5, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(closed_form_21_er(0.5, -0.1), InvalidArgument);
}
