#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shootout/balance.hpp"
#include "shootout/chain_solver.hpp"
#include "shootout/mc_sim.hpp"
#include "shootout/series_formulas.hpp"

namespace shootout::cli {

using Json = nlohmann::ordered_json;

std::string repr(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Human, Csv, Json };

struct Record {
  std::string method;
  std::vector<std::pair<std::string, double>> values;
  Json metadata = Json::object();
};

// Everything one invocation prints: the input echo, one record per method,
// and command-level summary values.
struct Payload {
  std::string command;
  Json inputs = Json::object();
  std::vector<Record> records;
  Json summary = Json::object();
  std::string trailer;  // free text appended to human output (transcripts)
};

struct GlobalOptions {
  Format format = Format::Human;
  bool full_precision = false;
};

std::string number(double x, bool full) {
  if (full) return repr(x);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string json_scalar_text(const Json& v, bool full) {
  if (v.is_number_float()) return number(v.get<double>(), full);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void emit_human(const Payload& pl, bool full, std::ostream& out) {
  out << pl.command;
  for (const auto& [k, v] : pl.inputs.items()) out << "  " << k << '=' << json_scalar_text(v, full);
  out << '\n';
  if (!pl.records.empty()) {
    std::vector<std::string> header{"method"};
    for (const auto& [name, _] : pl.records.front().values) header.push_back(name);
    std::vector<std::vector<std::string>> rows;
    for (const Record& r : pl.records) {
      std::vector<std::string> row{r.method};
      for (const auto& [_, v] : r.values) row.push_back(number(v, full));
      rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
      width[c] = header[c].size();
      for (const auto& row : rows) width[c] = std::max(width[c], c < row.size() ? row[c].size() : 0);
    }
    auto print_row = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
      out << '\n';
    };
    print_row(header);
    for (const auto& row : rows) print_row(row);
    for (const Record& r : pl.records)
      if (!r.metadata.empty()) {
        out << "  [" << r.method << "]";
        for (const auto& [k, v] : r.metadata.items()) out << ' ' << k << '=' << json_scalar_text(v, full);
        out << '\n';
      }
  }
  for (const auto& [k, v] : pl.summary.items()) out << k << ": " << json_scalar_text(v, full) << '\n';
  out << pl.trailer;
}

void emit_csv(const Payload& pl, std::ostream& out) {
  std::vector<std::string> input_keys;
  for (const auto& [k, _] : pl.inputs.items()) input_keys.push_back(k);
  std::vector<std::string> value_keys;
  std::vector<std::string> meta_keys;
  for (const Record& r : pl.records) {
    for (const auto& [k, _] : r.values)
      if (std::find(value_keys.begin(), value_keys.end(), k) == value_keys.end()) value_keys.push_back(k);
    for (const auto& [k, _] : r.metadata.items())
      if (std::find(meta_keys.begin(), meta_keys.end(), k) == meta_keys.end()) meta_keys.push_back(k);
  }
  std::vector<std::string> header = input_keys;
  header.push_back("method");
  header.insert(header.end(), value_keys.begin(), value_keys.end());
  header.insert(header.end(), meta_keys.begin(), meta_keys.end());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const Record& r : pl.records) {
    std::vector<std::string> row;
    for (const auto& k : input_keys) row.push_back(json_scalar_text(pl.inputs[k], true));
    row.push_back(r.method);
    for (const auto& k : value_keys) {
      auto it = std::find_if(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.first == k; });
      row.push_back(it == r.values.end() ? "" : repr(it->second));
    }
    for (const auto& k : meta_keys) row.push_back(r.metadata.contains(k) ? json_scalar_text(r.metadata[k], true) : "");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

Json to_json(const Payload& pl) {
  Json j;
  j["command"] = pl.command;
  j["inputs"] = pl.inputs;
  j["results"] = Json::array();
  for (const Record& r : pl.records) {
    Json rec;
    rec["method"] = r.method;
    rec["values"] = Json::object();
    for (const auto& [k, v] : r.values) rec["values"][k] = v;
    rec["metadata"] = r.metadata;
    j["results"].push_back(std::move(rec));
  }
  j["summary"] = pl.summary;
  return j;
}

void emit(const Payload& pl, const GlobalOptions& g, std::ostream& out) {
  switch (g.format) {
    case Format::Human: emit_human(pl, g.full_precision, out); break;
    case Format::Csv: emit_csv(pl, out); break;
    case Format::Json: out << to_json(pl).dump(2) << '\n'; break;
  }
}

// ---------------------------------------------------------------------------
// Commands

struct InstanceArgs {
  int m = 5;
  int n = 4;
  double p = 0.75;
  double q = 0.60;

  RuleParams params() const { return {m, n, p, q}; }
};

struct MethodArgs {
  std::string method = "dp";
  double epsilon = 1e-12;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
};

Json echo(const InstanceArgs& a) {
  return Json{{"m", a.m}, {"n", a.n}, {"p", a.p}, {"q", a.q}};
}

std::vector<std::string> expand_methods(const std::string& method, const RuleParams& rp) {
  if (method != "all") return {method};
  std::vector<std::string> out{"dp", "series", "mc"};
  if (rp.m == 2 && rp.n == 1) out.push_back("closed-form");
  return out;
}

Json series_meta(const SeriesResult<double>& s, double eps) {
  return Json{{"epsilon", eps}, {"truncation_round", s.truncation_round}, {"tail_bound", s.tail_bound}};
}

Json mc_meta(const BatchEstimate& e, std::uint64_t seed) {
  return Json{{"trials", e.trials},
              {"seed", seed},
              {"unresolved", e.unresolved_count},
              {"ci95_halfwidth", e.ci95_halfwidth_winfreq}};
}

Payload cmd_winprob(const InstanceArgs& a, const MethodArgs& ma) {
  const RuleParams rp = a.params();
  rp.validate();
  Payload pl;
  pl.command = "winprob";
  pl.inputs = echo(a);
  pl.inputs["methods"] = ma.method;

  std::vector<double> deterministic_pa;
  std::optional<double> exact_pa;
  for (const std::string& method : expand_methods(ma.method, rp)) {
    Record r;
    r.method = method;
    if (method == "dp") {
      const auto s = solve_round_model(rp);
      r.values = {{"p_a", s.p_a_win}, {"p_b", s.p_b_win}};
      deterministic_pa.push_back(s.p_a_win);
      exact_pa = s.p_a_win;
    } else if (method == "series") {
      const auto pa = pa_series(rp, ma.epsilon);
      const auto pb = pb_series(rp, ma.epsilon);
      r.values = {{"p_a", pa.value}, {"p_b", pb.value}};
      r.metadata = series_meta(pa, ma.epsilon);
      r.metadata["tail_bound"] = std::max(pa.tail_bound, pb.tail_bound);
      deterministic_pa.push_back(pa.value);
    } else if (method == "closed-form") {
      const double w = closed_form_21_win(rp.p, rp.q);
      r.values = {{"p_a", w}, {"p_b", 1.0 - w}};
      deterministic_pa.push_back(w);
    } else {  // mc
      SimConfig cfg{rp, ShootoutModel::RoundBased, ma.trials, ma.seed};
      const auto e = estimate(cfg);
      r.values = {{"p_a", e.a_win_freq}, {"p_b", 1.0 - e.a_win_freq}};
      r.metadata = mc_meta(e, ma.seed);
      if (exact_pa) {
        const double sigma = std::sqrt(*exact_pa * (1.0 - *exact_pa) / static_cast<double>(e.resolved));
        r.metadata["z_vs_dp"] = (e.a_win_freq - *exact_pa) / sigma;
      }
    }
    pl.records.push_back(std::move(r));
  }
  if (deterministic_pa.size() > 1) {
    const auto [lo, hi] = std::minmax_element(deterministic_pa.begin(), deterministic_pa.end());
    pl.summary["max_discrepancy"] = *hi - *lo;
  }
  return pl;
}

Payload cmd_rounds(const InstanceArgs& a, const MethodArgs& ma) {
  const RuleParams rp = a.params();
  rp.validate();
  Payload pl;
  pl.command = "rounds";
  pl.inputs = echo(a);
  pl.inputs["methods"] = ma.method;

  std::vector<double> deterministic;
  for (const std::string& method : expand_methods(ma.method, rp)) {
    Record r;
    r.method = method;
    if (method == "dp") {
      const double er = solve_round_model(rp).expected_rounds;
      r.values = {{"er", er}};
      deterministic.push_back(er);
    } else if (method == "series") {
      const auto s = er_series(rp, ma.epsilon);
      r.values = {{"er", s.value}};
      r.metadata = series_meta(s, ma.epsilon);
      deterministic.push_back(s.value);
    } else if (method == "closed-form") {
      const double er = closed_form_21_er(rp.p, rp.q);
      r.values = {{"er", er}};
      deterministic.push_back(er);
    } else {
      SimConfig cfg{rp, ShootoutModel::RoundBased, ma.trials, ma.seed};
      const auto e = estimate(cfg);
      r.values = {{"er", e.mean_rounds}};
      r.metadata = mc_meta(e, ma.seed);
      r.metadata["stddev_rounds"] = e.stddev_rounds;
    }
    pl.records.push_back(std::move(r));
  }
  if (deterministic.size() > 1) {
    const auto [lo, hi] = std::minmax_element(deterministic.begin(), deterministic.end());
    pl.summary["max_discrepancy"] = *hi - *lo;
  }
  return pl;
}

Payload cmd_balance(int m, int n, double p, double tol) {
  BalanceOptions opt;
  opt.residual_tolerance = tol;
  const BalanceResult b = balancing_probability(m, n, p, opt);
  Payload pl;
  pl.command = "balance";
  pl.inputs = Json{{"m", m}, {"n", n}, {"p", p}, {"tol", tol}};
  Record r;
  r.method = "dp";
  r.values = {{"q_star", b.q_star}, {"residual", b.residual}};
  r.metadata = Json{{"solver", "bisection"}, {"iterations", b.iterations}};
  pl.records.push_back(std::move(r));
  return pl;
}

Payload cmd_tables(double p, double q_er) {
  RuleParams{2, 1, p, q_er}.validate();
  Payload pl;
  pl.command = "tables";
  pl.inputs = Json{{"p", p}, {"q_for_er", q_er}};
  const std::pair<int, int> rules[] = {{5, 4}, {4, 3}, {3, 2}, {2, 1}};
  std::ostringstream text;
  text << "\n m  n   q*(p)  ER(m,n,p," << number(q_er, false) << ")\n";
  for (const auto& [m, n] : rules) {
    const BalanceResult b = balancing_probability(m, n, p);
    const RuleParams rp{m, n, p, q_er};
    const double er = solve_round_model(rp).expected_rounds;
    const double er_s = er_series(rp, 1e-12).value;
    Record r;
    r.method = "dp";
    r.values = {{"m", double(m)}, {"n", double(n)}, {"q_star", b.q_star}, {"er", er}, {"er_series", er_s}};
    r.metadata = Json{{"q_star_2dp", std::round(b.q_star * 100.0) / 100.0},
                      {"er_2dp", std::round(er * 100.0) / 100.0}};
    pl.records.push_back(std::move(r));
    char line[96];
    std::snprintf(line, sizeof line, " %d  %d   %.2f   %.2f\n", m, n, b.q_star, er);
    text << line;
  }
  pl.trailer = text.str();
  return pl;
}

Payload cmd_sweep(int m, int n, double p, int grid_size, const std::string& out_path,
                  std::ostream& out) {
  RuleParams{m, n, p, 0.5}.validate();
  const std::vector<double> grid = default_q_grid(grid_size);
  const std::vector<SweepRow> rows = sweep_q(m, n, p, grid);

  std::ostringstream csv;
  csv << "q,p_a,p_b,er,q_a_seq,er_seq\n";
  for (const SweepRow& r : rows)
    csv << repr(r.q) << ',' << repr(r.p_a) << ',' << repr(r.p_b) << ',' << repr(r.er) << ','
        << repr(r.q_a_sequential) << ',' << repr(r.er_sequential) << '\n';

  Payload pl;
  pl.command = "sweep";
  pl.inputs = Json{{"m", m}, {"n", n}, {"p", p}, {"grid_size", grid_size}, {"out", out_path}};
  double win_gap = 0.0;
  double er_gap = 0.0;
  for (const SweepRow& r : rows) {
    win_gap = std::max(win_gap, std::abs(r.q_a_sequential - r.p_a));
    er_gap = std::max(er_gap, std::abs(r.er_sequential - r.er));
  }
  pl.summary["rows"] = static_cast<int>(rows.size());
  pl.summary["max_abs_qa_minus_pa"] = win_gap;
  pl.summary["max_abs_erq_minus_er"] = er_gap;

  if (out_path.empty() || out_path == "-") {
    out << csv.str();
    pl.summary = Json::object();  // stdout carries the CSV itself
    return pl;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + out_path + "' for writing");
  file << csv.str();
  file.close();
  if (!file) throw IoError("failed writing '" + out_path + "'");
  return pl;
}

struct SimulateArgs {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0;
  std::string model = "round";
  int show_transcripts = 0;
  int sd_cap = 10'000;
};

Payload cmd_simulate(const InstanceArgs& a, const SimulateArgs& sa) {
  SimConfig cfg;
  cfg.params = a.params();
  cfg.model = sa.model == "sequential" ? ShootoutModel::Sequential : ShootoutModel::RoundBased;
  cfg.trials = sa.trials;
  cfg.seed = sa.seed;
  cfg.sd_round_cap = sa.sd_cap;
  cfg.validate();
  if (sa.show_transcripts < 0) throw InvalidArgument("--show-transcripts must be non-negative");

  const BatchEstimate e = estimate(cfg);
  Payload pl;
  pl.command = "simulate";
  pl.inputs = echo(a);
  pl.inputs["model"] = sa.model;
  pl.inputs["trials"] = sa.trials;
  pl.inputs["seed"] = sa.seed;
  pl.inputs["sd_cap"] = sa.sd_cap;

  Record r;
  r.method = "mc";
  r.values = {{"a_win_freq", e.a_win_freq}, {"mean_rounds", e.mean_rounds}};
  r.metadata = Json{{"ci95_halfwidth", e.ci95_halfwidth_winfreq},
                    {"stddev_rounds", e.stddev_rounds},
                    {"resolved", e.resolved},
                    {"unresolved", e.unresolved_count}};
  pl.records.push_back(std::move(r));

  Record exact;
  exact.method = "dp";
  if (cfg.model == ShootoutModel::RoundBased) {
    const auto s = solve_round_model(cfg.params);
    exact.values = {{"a_win_freq", s.p_a_win}, {"mean_rounds", s.expected_rounds}};
  } else {
    const auto s = solve_sequential_model(cfg.params);
    exact.values = {{"a_win_freq", s.q_a_win}, {"mean_rounds", s.expected_rounds}};
  }
  const double pa = exact.values[0].second;
  pl.summary["z_winfreq_vs_dp"] =
      (e.a_win_freq - pa) / std::sqrt(pa * (1.0 - pa) / static_cast<double>(e.resolved));
  pl.records.push_back(std::move(exact));

  std::ostringstream text;
  const auto shown = std::min<std::uint64_t>(static_cast<std::uint64_t>(sa.show_transcripts), cfg.trials);
  for (std::uint64_t i = 0; i < shown; ++i)
    text << "\ntrial " << i << '\n' << render_transcript(simulate_one(cfg, i));
  pl.trailer = text.str();
  return pl;
}

Payload cmd_audit(const InstanceArgs& a, const std::string& model, bool& found) {
  const RuleParams rp = a.params();
  const ShootoutModel sm = model == "sequential" ? ShootoutModel::Sequential : ShootoutModel::RoundBased;
  const DeviationReport rep = strategyproofness_audit(rp, sm);
  Payload pl;
  pl.command = "audit";
  pl.inputs = echo(a);
  pl.inputs["model"] = model;
  for (const Deviation& d : rep.profitable_deviations) {
    Record r;
    r.method = "value-iteration";
    r.values = {{"honest_value", d.honest_value}, {"deviation_value", d.deviation_value}};
    r.metadata = Json{{"state", d.state.label()}, {"team", d.team == Team::A ? "A" : "B"}};
    pl.records.push_back(std::move(r));
  }
  pl.summary["kick_states"] = rep.kick_states;
  pl.summary["iterations"] = rep.iterations;
  pl.summary["honest_value"] = rep.honest_value;
  pl.summary["game_value"] = rep.game_value;
  pl.summary["profitable_deviations"] = rep.profitable_deviations.size();
  found = !rep.empty();
  if (!found) pl.trailer = "no profitable deviations\n";
  return pl;
}

void add_instance(CLI::App* sub, InstanceArgs& a, bool with_q = true) {
  sub->add_option("-m", a.m, "goals A needs")->required();
  sub->add_option("-n", a.n, "goals B needs")->required();
  sub->add_option("-p", a.p, "A's per-kick success probability")->required();
  if (with_q) sub->add_option("-q", a.q, "B's per-kick success probability")->required();
}

void add_method(CLI::App* sub, MethodArgs& ma) {
  sub->add_option("--method", ma.method, "dp | series | mc | closed-form | all")
      ->check(CLI::IsMember({"dp", "series", "mc", "closed-form", "all"}))
      ->capture_default_str();
  sub->add_option("--epsilon", ma.epsilon, "series truncation tolerance")->capture_default_str();
  sub->add_option("--trials", ma.trials, "Monte Carlo trials")->capture_default_str();
  sub->add_option("--seed", ma.seed, "Monte Carlo seed")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Win probabilities, expected length and balance of (m, n) penalty shootouts"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string format = "human";
  app.add_option("--format", format, "human | csv | json")
      ->check(CLI::IsMember({"human", "csv", "json"}))
      ->capture_default_str();
  app.add_flag("--full-precision", g.full_precision, "print shortest round-trip decimals");

  InstanceArgs inst;
  MethodArgs method;
  auto* winprob = app.add_subcommand("winprob", "win probabilities P_A and P_B");
  add_instance(winprob, inst);
  add_method(winprob, method);

  auto* rounds = app.add_subcommand("rounds", "expected number of rounds ER");
  add_instance(rounds, inst);
  add_method(rounds, method);

  double tol = 1e-10;
  auto* balance = app.add_subcommand("balance", "balancing probability q*(p)");
  add_instance(balance, inst, false);
  balance->add_option("--tol", tol, "residual tolerance")->capture_default_str();

  int grid_size = 101;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "CSV sweep over q (P_A, P_B, ER and sequential Q(A), ER(Q))");
  add_instance(sweep, inst, false);
  sweep->add_option("--grid-size", grid_size, "number of q values on [0.005, 0.995]")->capture_default_str();
  sweep->add_option("-o,--out", out_path, "output CSV path ('-' or empty for stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate with optional transcripts");
  add_instance(simulate, inst);
  simulate->add_option("--trials", sim.trials)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--model", sim.model)->check(CLI::IsMember({"round", "sequential"}))->capture_default_str();
  simulate->add_option("--show-transcripts", sim.show_transcripts, "render the first k trials")->capture_default_str();
  simulate->add_option("--sd-cap", sim.sd_cap, "sudden-death rounds before a trial is unresolved")->capture_default_str();

  double table_p = 0.75;
  double table_q = 0.60;
  auto* tables = app.add_subcommand("tables", "balancing probabilities and ER for (5,4),(4,3),(3,2),(2,1)");
  tables->add_option("-p", table_p, "A's per-kick success probability")->capture_default_str();
  tables->add_option("--q-er", table_q, "B's probability used for the ER column")->capture_default_str();

  std::string audit_model = "round";
  auto* audit = app.add_subcommand("audit", "check that no deliberate miss pays off");
  add_instance(audit, inst);
  audit->add_option("--model", audit_model)->check(CLI::IsMember({"round", "sequential"}))->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  g.format = format == "csv" ? Format::Csv : format == "json" ? Format::Json : Format::Human;

  try {
    Payload pl;
    int code = kOk;
    if (*winprob) {
      pl = cmd_winprob(inst, method);
    } else if (*rounds) {
      pl = cmd_rounds(inst, method);
    } else if (*balance) {
      pl = cmd_balance(inst.m, inst.n, inst.p, tol);
    } else if (*sweep) {
      pl = cmd_sweep(inst.m, inst.n, inst.p, grid_size, out_path, out);
      if (out_path.empty() || out_path == "-") return kOk;
    } else if (*simulate) {
      pl = cmd_simulate(inst, sim);
    } else if (*tables) {
      pl = cmd_tables(table_p, table_q);
    } else if (*audit) {
      bool found = false;
      pl = cmd_audit(inst, audit_model, found);
      code = found ? kDeviationsFound : kOk;
    }
    emit(pl, g, out);
    return code;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace shootout::cli
