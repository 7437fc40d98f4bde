#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fermient/analysis.hpp"
#include "fermient/concurrence.hpp"
#include "fermient/random.hpp"
#include "fermient/state_io.hpp"
#include "fermient/two_copy.hpp"

namespace fermient::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Raised for invalid argument combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command_line;
  double separability_tol = Tolerances{}.separability;
  bool renormalize = false;
  std::string format = "report";

  // gen
  std::string kind;
  std::optional<int> d;
  std::optional<int> n;
  std::vector<int> modes;
  std::uint64_t seed = 0;
  bool seed_given = false;

  // file-driven commands
  std::string state_path = "-";

  // twocopy
  std::string observable = "af";
  int m = 1;
  std::string sign = "+";

  // verify
  std::string campaign;
  std::size_t trials = 1000;
  unsigned threads = 1;

  // sensitivity
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  int points = 9;
};

Tolerances tolerances(const Options& o) {
  Tolerances tol;
  tol.separability = o.separability_tol;
  return tol;
}

Json header(const Options& o, const SystemShape& shape, std::optional<std::uint64_t> seed) {
  const Tolerances tol = tolerances(o);
  Json j;
  j["format"] = "fermient-report-v1";
  j["version"] = kVersion;
  j["command"] = o.command_line;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["tolerances"] = {{"invariant", tol.invariant},
                     {"exact", tol.exact},
                     {"separability", tol.separability},
                     {"clamp", tol.clamp},
                     {"slater_rank", tol.slater_rank}};
  j["shape"] = {{"d", shape.modes}, {"n", shape.particles}};
  return j;
}

Json campaign_json(const CampaignReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  return {{"kind", r.kind}, {"trials", r.trials}, {"pass", r.pass}, {"checks", checks}};
}

FermionState<double> load_state(const Options& o, std::istream& in) {
  const StateReadOptions read{o.renormalize};
  if (o.state_path == "-") return read_state(in, read);
  std::ifstream file(o.state_path);
  if (!file) throw ParseError("cannot open state file '" + o.state_path + "'");
  return read_state(file, read);
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.kind == "fghz") {
    write_state(out, fghz_state());
    return kSuccess;
  }
  if (o.kind == "slater") {
    if (!o.d || o.modes.empty()) throw UsageError("gen slater needs --d and --modes");
    if (o.n && *o.n != static_cast<int>(o.modes.size())) {
      throw UsageError("--n disagrees with the number of --modes");
    }
    const SystemShape shape = make_shape(*o.d, static_cast<int>(o.modes.size()));
    write_state(out, slater_state<double>(shape, o.modes));
    return kSuccess;
  }
  if (!o.d || !o.n) throw UsageError("gen " + o.kind + " needs --d and --n");
  const SystemShape shape = make_shape(*o.d, *o.n);
  write_state(out, o.kind == "random" ? random_state(shape, o.seed)
                                      : random_slater_state(shape, o.seed));
  return kSuccess;
}

int cmd_concurrence(const Options& o, std::istream& in, std::ostream& out) {
  const auto state = load_state(o, in);
  const Tolerances tol = tolerances(o);
  const auto report = multipartite_concurrence(state, tol);

  Json bip = Json::array();
  for (const auto& b : report.bipartitions) {
    bip.push_back({{"m", b.subsystem},
                   {"purity", b.purity},
                   {"lower_bound", b.lower_bound},
                   {"upper_bound", b.upper_bound},
                   {"verdict", to_string(b.verdict)}});
  }
  Json result;
  result["concurrence"] = report.value;
  result["alpha"] = report.alpha ? Json(*report.alpha) : Json(nullptr);
  result["bracket"] = report.bracket;
  result["degenerate"] = report.degenerate;
  result["all_separable"] = report.all_separable();
  result["bipartitions"] = bip;
  if (state.shape().particles == 2) {
    const auto cff = c_ff_purity(state, tol);
    result["c_ff_purity"] = cff.value;
    result["c_ff_degenerate"] = cff.degenerate;
    result["c_ff_wedge"] = state.shape().modes == 4 ? Json(c_ff_wedge(state)) : Json(nullptr);
    result["slater_rank"] = slater_rank_two_fermions(state, tol).rank;
  }

  Json j = header(o, state.shape(), std::nullopt);
  j["result"] = result;
  out << j.dump(2) << '\n';
  return kSuccess;
}

int cmd_twocopy(const Options& o, std::istream& in, std::ostream& out) {
  const auto state = load_state(o, in);
  const Tolerances tol = tolerances(o);
  const SystemShape& shape = state.shape();
  const int n = shape.particles;
  const ProjectorSign sign = o.sign == "+" ? ProjectorSign::Plus : ProjectorSign::Minus;

  // Purities feed the predicted value for every observable.
  double weighted_purity = 0.0;
  for (int m = 1; m <= n - 1; ++m) {
    weighted_purity += static_cast<double>(binomial(n, m)) * purity_direct(state, m);
  }

  std::optional<DoubledOperator<double>> op;
  double predicted = 0.0;
  bool compare_sqrt = false;
  if (o.observable == "af") {
    op = observable_Af<double>(shape, sign, tol);
    compare_sqrt = true;
  } else if (o.observable == "afprime") {
    op = observable_Af_prime<double>(shape, tol);
    compare_sqrt = true;
  } else if (o.observable == "a" || o.observable == "atilde") {
    op = o.observable == "a" ? observable_A<double>(shape) : observable_A_tilde<double>(shape);
    predicted = std::ldexp(1.0, 2 - n) * ((std::ldexp(1.0, n) - 2.0) - weighted_purity);
  } else {
    op = observable_O_NM<double>(shape, o.m, sign);
    predicted = purity_direct(state, o.m);
  }

  const auto e = expectation(*op, state);
  const auto conc = multipartite_concurrence(state, tol);
  if (compare_sqrt) predicted = conc.value * conc.value;
  const double root = std::sqrt(std::max(0.0, e.value));

  Json result;
  result["observable"] = o.observable;
  result["label"] = op->label();
  if (o.observable == "o") result["m"] = o.m;
  if (o.observable == "o" || o.observable == "af") result["sign"] = o.sign;
  result["expectation"] = e.value;
  result["imaginary_part"] = e.imaginary;
  result["sqrt_expectation"] = e.value >= -tol.clamp ? Json(root) : Json(nullptr);
  result["concurrence"] = conc.value;
  result["predicted_expectation"] = predicted;
  result["difference"] = compare_sqrt ? std::abs(root - conc.value) : std::abs(e.value - predicted);

  Json j = header(o, shape, std::nullopt);
  j["result"] = result;
  out << j.dump(2) << '\n';
  return kSuccess;
}

SystemShape parse_campaign_shape(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--campaign expects N,d");
  try {
    std::size_t used_n = 0;
    std::size_t used_d = 0;
    const std::string n_text = text.substr(0, comma);
    const std::string d_text = text.substr(comma + 1);
    const int n = std::stoi(n_text, &used_n);
    const int d = std::stoi(d_text, &used_d);
    if (used_n != n_text.size() || used_d != d_text.size()) throw UsageError("--campaign expects N,d");
    return make_shape(d, n);
  } catch (const std::logic_error&) {
    throw UsageError("--campaign expects N,d");
  }
}

int cmd_verify(const Options& o, std::istream& in, std::ostream& out) {
  const Tolerances tol = tolerances(o);
  CampaignReport report;
  std::optional<std::uint64_t> seed;
  if (!o.campaign.empty()) {
    const SystemShape shape = parse_campaign_shape(o.campaign);
    if (o.trials < 1) throw UsageError("--trials must be at least 1");
    report = inequality_campaign(shape, o.trials, o.seed, o.threads, tol);
    seed = o.seed;
  } else {
    report = appendix_verify(load_state(o, in), tol);
  }
  Json j = header(o, report.shape, seed);
  j["result"] = campaign_json(report);
  out << j.dump(2) << '\n';
  return report.pass ? kSuccess : kVerificationFailed;
}

int cmd_sensitivity(const Options& o, std::istream& in, std::ostream& out) {
  if (!(o.eps_min > 0.0 && o.eps_min < o.eps_max && o.eps_max <= 0.5)) {
    throw UsageError("need 0 < --eps-min < --eps-max <= 0.5");
  }
  if (o.points < 2) throw UsageError("--points must be at least 2");
  const auto state = load_state(o, in);
  const Tolerances tol = tolerances(o);
  const auto eps = log_spaced(o.eps_min, o.eps_max, o.points);
  const auto sweep = sensitivity_sweep(state, o.seed, eps, tol);
  const auto slope = fit_loglog_slope(sweep.records);

  if (o.format == "csv") {
    out << "# command: " << o.command_line << '\n';
    out << "# version: " << kVersion << '\n';
    out << "# seed: " << o.seed << '\n';
    out << "# direction_seed: " << sweep.direction_seed << '\n';
    out << "# separability_tol: " << format_real(tol.separability) << '\n';
    out << "# base_concurrence: " << format_real(sweep.base_concurrence) << '\n';
    out << "# slope: " << (slope ? format_real(*slope) : std::string("nan")) << '\n';
    out << "epsilon,c_exp,c_mean,gap\n";
    for (const auto& r : sweep.records) {
      out << format_real(r.epsilon) << ',' << format_real(r.c_exp) << ',' << format_real(r.c_mean)
          << ',' << format_real(r.gap) << '\n';
    }
    return kSuccess;
  }

  Json records = Json::array();
  for (const auto& r : sweep.records) {
    records.push_back(
        {{"epsilon", r.epsilon}, {"c_exp", r.c_exp}, {"c_mean", r.c_mean}, {"gap", r.gap}});
  }
  Json result;
  result["direction_seed"] = sweep.direction_seed;
  result["base_concurrence"] = sweep.base_concurrence;
  result["slope"] = slope ? Json(*slope) : Json(nullptr);
  result["records"] = records;
  Json j = header(o, state.shape(), o.seed);
  j["result"] = result;
  out << j.dump(2) << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  o.command_line = "fermient";
  for (const auto& a : args) o.command_line += " " + a;

  CLI::App app{"Entanglement measures for pure states of identical fermions"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--tol", o.separability_tol, "Separability band around binomial(N,M)^-1")
      ->check(CLI::PositiveNumber);
  app.add_flag("--renormalize", o.renormalize, "Rescale state files whose norm is off by up to 1e-2");

  auto* gen = app.add_subcommand("gen", "Write a state file to standard output");
  gen->add_option("kind", o.kind, "slater | fghz | random | random-slater")
      ->required()
      ->check(CLI::IsMember({"slater", "fghz", "random", "random-slater"}));
  gen->add_option("--d", o.d, "Number of modes");
  gen->add_option("--n", o.n, "Number of particles");
  gen->add_option("--modes", o.modes, "Comma-separated 1-based modes")->delimiter(',');
  gen->add_option("--seed", o.seed, "Random seed");

  auto* conc = app.add_subcommand("concurrence", "Purities, verdicts and multipartite concurrence");
  conc->add_option("state", o.state_path, "State file, '-' for standard input");

  auto* two = app.add_subcommand("twocopy", "Two-copy observable expectation");
  two->add_option("state", o.state_path, "State file, '-' for standard input");
  two->add_option("--observable", o.observable, "af | afprime | atilde | a | o")
      ->check(CLI::IsMember({"af", "afprime", "atilde", "a", "o"}));
  two->add_option("--m", o.m, "Subsystem size M for --observable o");
  two->add_option("--sign", o.sign, "Projector form of O^(N-M): + or -")
      ->check(CLI::IsMember({"+", "-"}));

  auto* verify = app.add_subcommand("verify", "Diagonal identities of one state, or a purity-bound campaign");
  verify->add_option("state", o.state_path, "State file, '-' for standard input");
  verify->add_option("--campaign", o.campaign, "Run a random campaign at shape N,d");
  verify->add_option("--trials", o.trials, "Campaign trials");
  verify->add_option("--seed", o.seed, "Campaign seed");
  verify->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  auto* sens = app.add_subcommand("sensitivity", "Copy-mismatch sweep of C_exp against C_mean");
  sens->add_option("state", o.state_path, "State file, '-' for standard input");
  sens->add_option("--eps-min", o.eps_min, "Smallest mismatch");
  sens->add_option("--eps-max", o.eps_max, "Largest mismatch (at most 0.5)");
  sens->add_option("--points", o.points, "Number of log-spaced mismatches");
  sens->add_option("--seed", o.seed, "Direction seed");
  sens->add_option("--format", o.format, "report | csv")->check(CLI::IsMember({"report", "csv"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*conc) return cmd_concurrence(o, in, out);
    if (*two) return cmd_twocopy(o, in, out);
    if (*verify) return cmd_verify(o, in, out);
    if (*sens) return cmd_sensitivity(o, in, out);
  } catch (const DegenerateShapeError& e) {
    err << "degenerate shape: " << e.what() << '\n';
    return kDegenerateShape;
  } catch (const BoundViolation& e) {
    err << "bound violation: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fermient::cli
