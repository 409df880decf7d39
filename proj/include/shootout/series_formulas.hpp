#pragma once

#include <algorithm>
#include <cassert>
#include <limits>
#include <string>
#include <vector>

#include "shootout/chain_solver.hpp"
#include "shootout/core_model.hpp"

namespace shootout {

/// A truncated series: `value` sums rounds 1..truncation_round and the
/// omitted remainder is at most `tail_bound`.
template <typename Scalar>
struct SeriesResult {
  Scalar value{};
  int truncation_round = 0;
  Scalar tail_bound{};
};

/// Hard cap on the number of rounds summed before giving up.
inline constexpr int kSeriesRoundCap = 10'000;

/// Upper index of the inner binomial sum in the B-wins term of the
/// expected-rounds series. The printed form uses max(r, m-1), which
/// double-counts rounds where A has already reached m; min(r, m-1) is the
/// correct one and the default. The printed form is kept for comparison.
enum class InnerIndex { Min, PrintedMax };

namespace detail {

/// pmf of Binomial(r, s) restricted to 0..k, advanced one trial at a time
/// with the Pascal recurrence (no factorials, nothing to overflow).
template <typename Scalar>
class BinomialHead {
 public:
  BinomialHead(Scalar s, int k) : s_(s), pmf_(static_cast<std::size_t>(k) + 1, Scalar(0)) {
    pmf_[0] = Scalar(1);
  }

  void advance() {
    const Scalar fail = Scalar(1) - s_;
    for (std::size_t i = pmf_.size() - 1; i > 0; --i) pmf_[i] = s_ * pmf_[i - 1] + fail * pmf_[i];
    pmf_[0] *= fail;
    ++trials_;
  }

  int trials() const { return trials_; }
  Scalar pmf(int i) const {
    assert(i >= 0 && static_cast<std::size_t>(i) < pmf_.size());
    return i > trials_ ? Scalar(0) : pmf_[static_cast<std::size_t>(i)];
  }

  /// P[X <= i]; exactly 1 once i >= trials.
  Scalar cdf(int i) const {
    if (i >= trials_) return Scalar(1);
    assert(static_cast<std::size_t>(i) < pmf_.size());
    Scalar acc(0);
    for (int j = 0; j <= i; ++j) acc += pmf_[static_cast<std::size_t>(j)];
    return acc;
  }

  /// Probability that the k-th success lands exactly on the next trial:
  /// C(r, k-1) s^k (1-s)^(r-k+1) with r = trials().
  Scalar next_hits(int k) const { return s_ * pmf(k - 1); }

 private:
  Scalar s_;
  std::vector<Scalar> pmf_;
  int trials_ = 0;
};

/// Bound on E[(T + extra) 1{T > r}] where T is the round on which a team
/// with success probability s reaches k goals and `head` holds Bin(r, s).
/// Uses P[T > j] <= P[Bin(j, s) <= k-1] =: G(j) and the ratio bound
/// G(j+1) <= (1-s)(j+1)/(j+2-k) G(j), which decreases in j.
template <typename Scalar>
Scalar length_tail_envelope(const BinomialHead<Scalar>& head, Scalar s, int k, Scalar extra) {
  const int r = head.trials();
  const Scalar g = head.cdf(k - 1);
  if (r + 2 - k <= 0) return std::numeric_limits<Scalar>::infinity();
  const Scalar ratio = (Scalar(1) - s) * Scalar(r + 1) / Scalar(r + 2 - k);
  if (!(ratio < Scalar(1))) return std::numeric_limits<Scalar>::infinity();
  return (Scalar(r + 1) + extra) * g + g * ratio / (Scalar(1) - ratio);
}

template <typename Scalar>
void require_epsilon(Scalar epsilon) {
  if (!(epsilon > Scalar(0))) throw InvalidArgument("epsilon must be positive");
}

[[noreturn]] inline void series_cap_reached(const char* which, double epsilon) {
  throw SolverFailure(std::string(which) + ": tail bound did not fall below epsilon=" +
                      std::to_string(epsilon) + " within " + std::to_string(kSeriesRoundCap) +
                      " rounds");
}

}  // namespace detail

/// Upper bound on the probability that regulation is still running after
/// round r: P[Binomial(r, p) <= m-1]. Valid because A reaching m always
/// ends regulation.
template <typename Scalar>
Scalar running_tail_bound(const BasicRuleParams<Scalar>& params, int r) {
  params.validate();
  if (r < 1) throw InvalidArgument("round index must be positive");
  detail::BinomialHead<Scalar> a_goals(params.p, params.m);
  for (int i = 0; i < r; ++i) a_goals.advance();
  return a_goals.cdf(params.m - 1);
}

/// A's win probability as a sum over the round r on which A scores its
/// m-th goal: B is below n, or exactly at n and A then wins sudden death.
template <typename Scalar>
SeriesResult<Scalar> pa_series(const BasicRuleParams<Scalar>& params, Scalar epsilon) {
  params.validate();
  detail::require_epsilon(epsilon);
  const int m = params.m;
  const int n = params.n;
  const Scalar sd_win = sudden_death_win_prob(params.p, params.q);

  detail::BinomialHead<Scalar> a_goals(params.p, m);
  detail::BinomialHead<Scalar> b_goals(params.q, n);
  Scalar sum(0);
  for (int r = 1; r <= kSeriesRoundCap; ++r) {
    const Scalar a_reaches = a_goals.next_hits(m);
    const Scalar b_reaches = b_goals.next_hits(n);
    a_goals.advance();
    b_goals.advance();
    if (r >= m) sum += a_reaches * (b_goals.cdf(n - 1) + b_reaches * sd_win);

    const Scalar tail = a_goals.cdf(m - 1);
    if (r >= m && tail < epsilon) return {sum, r, tail};
  }
  detail::series_cap_reached("pa_series", static_cast<double>(epsilon));
}

/// B's win probability: rounds n..m-1 where B reaching n wins outright,
/// plus rounds r >= m where A is below m or A also reaches m on round r and
/// B then wins sudden death.
template <typename Scalar>
SeriesResult<Scalar> pb_series(const BasicRuleParams<Scalar>& params, Scalar epsilon) {
  params.validate();
  detail::require_epsilon(epsilon);
  const int m = params.m;
  const int n = params.n;
  const Scalar sd_b_win = params.q * (Scalar(1) - params.p) /
                          detail::sd_decision_prob(params.p, params.q);

  detail::BinomialHead<Scalar> a_goals(params.p, m);
  detail::BinomialHead<Scalar> b_goals(params.q, n);
  Scalar sum(0);
  for (int r = 1; r <= kSeriesRoundCap; ++r) {
    const Scalar a_reaches = a_goals.next_hits(m);
    const Scalar b_reaches = b_goals.next_hits(n);
    a_goals.advance();
    b_goals.advance();
    if (r >= n && r < m) {
      sum += b_reaches;
    } else if (r >= m) {
      sum += b_reaches * (a_goals.cdf(m - 1) + a_reaches * sd_b_win);
    }

    const Scalar tail = a_goals.cdf(m - 1);
    if (r >= m && tail < epsilon) return {sum, r, tail};
  }
  detail::series_cap_reached("pb_series", static_cast<double>(epsilon));
}

/// Expected number of rounds, sudden death included: the A-wins term, the
/// B-wins term and the sudden-death term weighted by r + ER(SD).
template <typename Scalar>
SeriesResult<Scalar> er_series(const BasicRuleParams<Scalar>& params, Scalar epsilon,
                               InnerIndex inner = InnerIndex::Min) {
  params.validate();
  detail::require_epsilon(epsilon);
  const int m = params.m;
  const int n = params.n;
  const Scalar sd_rounds = sudden_death_expected_rounds(params.p, params.q);

  detail::BinomialHead<Scalar> a_goals(params.p, m);
  detail::BinomialHead<Scalar> b_goals(params.q, n);
  Scalar sum(0);
  for (int r = 1; r <= kSeriesRoundCap; ++r) {
    const Scalar a_reaches = a_goals.next_hits(m);
    const Scalar b_reaches = b_goals.next_hits(n);
    a_goals.advance();
    b_goals.advance();
    const Scalar rr(r);
    if (r >= m) {
      sum += rr * a_reaches * b_goals.cdf(n - 1);
      sum += (rr + sd_rounds) * a_reaches * b_reaches;
    }
    if (r >= n) {
      const int upper = inner == InnerIndex::Min ? std::min(r, m - 1) : std::max(r, m - 1);
      sum += rr * b_reaches * a_goals.cdf(upper);
    }

    if (r < m) continue;
    Scalar tail = detail::length_tail_envelope(a_goals, params.p, m, sd_rounds);
    if (inner == InnerIndex::PrintedMax)
      tail += detail::length_tail_envelope(b_goals, params.q, n, Scalar(0));
    if (tail < epsilon) return {sum, r, tail};
  }
  detail::series_cap_reached("er_series", static_cast<double>(epsilon));
}

}  // namespace shootout
