#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shootout/chain_solver.hpp"

namespace shootout {

std::string KickState::label() const {
  std::ostringstream os;
  const char kicker_name = kicker == Team::A ? 'A' : 'B';
  if (phase == Phase::SuddenDeath) {
    os << "SD " << kicker_name;
    if (kicker == Team::B) os << (a_scored_this_round ? " (A scored)" : " (A missed)");
  } else {
    os << kicker_name << ":(" << a_goals << ", " << b_goals << ")";
  }
  return os.str();
}

namespace {

// Either another decision node or an absorbing value (A's win probability).
struct Successor {
  int node = -1;
  double terminal = 0.0;
};

struct KickNode {
  KickState state;
  double success = 0.0;
  Successor on_goal;
  Successor on_miss;
};

class GameGraph {
 public:
  int add(const KickState& s, double success) {
    nodes_.push_back({s, success, {}, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }
  KickNode& operator[](int i) { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<KickNode>& nodes() const { return nodes_; }

 private:
  std::vector<KickNode> nodes_;
};

Successor terminal(double v) { return {-1, v}; }
Successor to(int node) { return {node, 0.0}; }

// Nodes are appended in an order that lets Gauss-Seidel sweeps see mostly
// up-to-date successors (the first node is the opening kick).
GameGraph build_round_graph(const RuleParams& params) {
  const int m = params.m;
  const int n = params.n;
  GameGraph g;

  KickState sd_a{ShootoutModel::RoundBased, Phase::SuddenDeath, Team::A, m, n, false};
  KickState sd_b1 = sd_a, sd_b0 = sd_a;
  sd_b1.kicker = sd_b0.kicker = Team::B;
  sd_b1.a_scored_this_round = true;

  std::map<std::pair<int, int>, int> a_node;  // A to kick, end-of-round score
  std::map<std::pair<int, int>, int> b_node;  // B to kick, A's kick counted
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b)
      a_node[{a, b}] = g.add({ShootoutModel::RoundBased, Phase::Regulation, Team::A, a, b, false},
                             params.p);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b < n; ++b)
      b_node[{a, b}] = g.add({ShootoutModel::RoundBased, Phase::Regulation, Team::B, a, b, false},
                             params.q);
  const int sd_a_id = g.add(sd_a, params.p);
  const int sd_b1_id = g.add(sd_b1, params.q);
  const int sd_b0_id = g.add(sd_b0, params.q);

  // Outcome of a completed regulation round ending at (a, b).
  auto end_of_round = [&](int a, int b) -> Successor {
    const RoundVerdict v = adjudicate_round(params, ScoreState{a, b, m + n, Phase::Regulation});
    switch (v) {
      case RoundVerdict::AWins: return terminal(1.0);
      case RoundVerdict::BWins: return terminal(0.0);
      case RoundVerdict::GoToSuddenDeath: return to(sd_a_id);
      case RoundVerdict::Continue: break;
    }
    return to(a_node.at({a, b}));
  };

  for (const auto& [score, id] : a_node) {
    g[id].on_goal = to(b_node.at({score.first + 1, score.second}));
    g[id].on_miss = to(b_node.at(score));
  }
  for (const auto& [score, id] : b_node) {
    g[id].on_goal = end_of_round(score.first, score.second + 1);
    g[id].on_miss = end_of_round(score.first, score.second);
  }
  g[sd_a_id].on_goal = to(sd_b1_id);
  g[sd_a_id].on_miss = to(sd_b0_id);
  g[sd_b1_id].on_goal = to(sd_a_id);
  g[sd_b1_id].on_miss = terminal(1.0);
  g[sd_b0_id].on_goal = terminal(0.0);
  g[sd_b0_id].on_miss = to(sd_a_id);
  return g;
}

GameGraph build_sequential_graph(const RuleParams& params) {
  const int m = params.m;
  const int n = params.n;
  GameGraph g;
  std::map<std::pair<int, int>, int> a_node, b_node;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b) {
      a_node[{a, b}] = g.add({ShootoutModel::Sequential, Phase::Regulation, Team::A, a, b, false},
                             params.p);
      b_node[{a, b}] = g.add({ShootoutModel::Sequential, Phase::Regulation, Team::B, a, b, false},
                             params.q);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < n; ++b) {
      KickNode& ka = g[a_node.at({a, b})];
      ka.on_goal = a + 1 == m ? terminal(1.0) : to(b_node.at({a + 1, b}));
      ka.on_miss = to(b_node.at({a, b}));
      KickNode& kb = g[b_node.at({a, b})];
      kb.on_goal = b + 1 == n ? terminal(0.0) : to(a_node.at({a, b + 1}));
      kb.on_miss = to(a_node.at({a, b}));
    }
  return g;
}

double value_of(const Successor& s, const std::vector<double>& v) {
  return s.node >= 0 ? v[static_cast<std::size_t>(s.node)] : s.terminal;
}

double kick_value(const KickNode& k, double success, const std::vector<double>& v) {
  return success * value_of(k.on_goal, v) + (1.0 - success) * value_of(k.on_miss, v);
}

// Gauss-Seidel iteration to the fixed point. With `game` false every kick is
// honest; otherwise A maximises and B minimises over {honest, miss}.
long iterate(const GameGraph& g, std::vector<double>& v, bool game, const AuditOptions& opt) {
  for (long it = 1; it <= opt.max_iterations; ++it) {
    double delta = 0.0;
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
      const KickNode& k = g.nodes()[i];
      double next = kick_value(k, k.success, v);
      if (game) {
        const double missed = kick_value(k, 0.0, v);
        next = k.state.kicker == Team::A ? std::max(next, missed) : std::min(next, missed);
      }
      delta = std::max(delta, std::abs(next - v[i]));
      v[i] = next;
    }
    if (delta < opt.tolerance) return it;
  }
  throw SolverFailure("strategyproofness audit: value iteration did not converge within " +
                      std::to_string(opt.max_iterations) + " sweeps");
}

}  // namespace

DeviationReport strategyproofness_audit(const RuleParams& params, ShootoutModel model,
                                        const AuditOptions& options) {
  params.validate();
  const GameGraph g = model == ShootoutModel::RoundBased ? build_round_graph(params)
                                                         : build_sequential_graph(params);

  std::vector<double> honest(g.nodes().size(), 0.5);
  DeviationReport report;
  report.iterations = iterate(g, honest, false, options);
  report.honest_value = honest.front();

  std::vector<double> game = honest;
  report.iterations += iterate(g, game, true, options);
  report.game_value = game.front();
  report.kick_states = g.nodes().size();

  for (const KickNode& k : g.nodes()) {
    double honest_v = kick_value(k, k.success, game);
    double miss_v = kick_value(k, 0.0, game);
    if (k.state.kicker == Team::B) {
      honest_v = 1.0 - honest_v;
      miss_v = 1.0 - miss_v;
    }
    if (miss_v > honest_v + options.report_threshold)
      report.profitable_deviations.push_back({k.state, k.state.kicker, honest_v, miss_v});
  }
  return report;
}

}  // namespace shootout
