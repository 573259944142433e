// Command-line front end: simulate, sweep, verify, classify, potential,
// enumerate, powerlaw-sample.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cforge/dynamics.hpp"
#include "cforge/equilibrium.hpp"
#include "cforge/errors.hpp"
#include "cforge/experiment.hpp"
#include "cforge/io.hpp"

using namespace cforge;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvalidInput = 1, kVerificationFailed = 2, kBudgetExceeded = 3 };

struct GlobalOptions {
  std::string beta = "0.5";
  std::string eta = "uniform";
  std::string spec_file;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

template <Scalar T>
std::vector<T> read_eta(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<T> eta;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    for (const auto& v : json::parse(text)) eta.push_back(scalar_from_json<T>(v));
  } else {
    std::istringstream in(text);
    std::string token;
    while (in >> token) eta.push_back(scalar_from_string<T>(token));
  }
  return eta;
}

// Spec for a known degree profile: --spec file wins, then --beta/--eta.
template <Scalar T>
GameSpec<T> build_spec(const GlobalOptions& g, const OutDegreeProfile& degrees) {
  if (!g.spec_file.empty()) {
    json j = json::parse(read_text_file(g.spec_file));
    if (!j.contains("degrees")) j["degrees"] = degrees.degrees();
    GameSpec<T> spec = game_spec_from_json<T>(j);
    if (!(spec.degrees == degrees))
      throw Error(ErrorCode::DimensionMismatch, "spec degrees differ from the graph");
    return spec;
  }
  GameSpec<T> spec = GameSpec<T>::uniform(degrees, scalar_from_string<T>(g.beta));
  if (g.eta != "uniform") spec.eta = read_eta<T>(g.eta);
  spec.validate();
  return spec;
}

json report_json(const EquilibriumReport& r) {
  json j{{"nash", r.is_nash}, {"strict", r.is_strict}, {"recursive", verdict_name(r.recursive)}};
  if (r.witness) j["witness"] = {{"player", r.witness->player}, {"action", r.witness->action}};
  if (r.reachable_count) j["reachable_count"] = r.reachable_count;
  if (r.non_nash_reached) j["non_nash_reached"] = configuration_to_json(*r.non_nash_reached);
  return j;
}

json audit_json(const std::vector<ConditionCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    if (c.applicable) arr.push_back({{"condition", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string mode;
  std::string graph;
  bool assert_mode = false;
  std::size_t budget = kDefaultRecursiveBudget;
};

template <Scalar T>
int run_verify(const GlobalOptions& g, const VerifyOptions& v) {
  const Configuration cfg = read_configuration(v.graph);
  const GameSpec<T> spec = build_spec<T>(g, cfg.degrees());
  EquilibriumReport report =
      v.mode == "recursive" ? is_recursive(spec, cfg, v.budget) : is_nash(spec, cfg);
  json out = report_json(report);
  out["mode"] = v.mode;
  out["family"] = classify_family(cfg).to_string();
  out["audit"] = audit_json(audit_conditions(spec, cfg, report));
  Output o(g.out);
  o.stream() << out.dump(2) << '\n';
  if (v.mode == "recursive" && report.recursive == RecursiveVerdict::Inconclusive) return kBudgetExceeded;
  bool ok = v.mode == "nash" ? report.is_nash
            : v.mode == "strict" ? report.is_strict
                                 : report.recursive == RecursiveVerdict::Yes;
  return v.assert_mode && !ok ? kVerificationFailed : kOk;
}

template <Scalar T>
int run_potential(const GlobalOptions& g, const std::string& graph) {
  const Configuration cfg = read_configuration(graph);
  const GameSpec<T> spec = build_spec<T>(g, cfg.degrees());
  const PotentialReport<T> p = potential(spec, cfg);
  json sums = json::array();
  for (const auto& s : p.tree_sums) sums.push_back(scalar_to_json(s));
  json out{{"tree_sums", sums},
           {"log_tree_sums", p.log_tree_sums},
           {"Z", scalar_to_json(p.z)},
           {"log_Z", p.log_z},
           {"psi", p.psi},
           {"m", p.m},
           {"mode", ScalarTraits<T>::name}};
  Output o(g.out);
  o.stream() << out.dump(2) << '\n';
  return kOk;
}

struct EnumerateOptions {
  int n = 0;
  int degree = 0;
  std::vector<int> degrees;
  int workers = 0;
};

template <Scalar T>
int run_enumerate(const GlobalOptions& g, const EnumerateOptions& e) {
  OutDegreeProfile profile =
      e.degrees.empty() ? OutDegreeProfile::homogeneous(e.n, e.degree) : OutDegreeProfile(e.degrees);
  const GameSpec<T> spec = build_spec<T>(g, profile);
  EnumerationOptions opts;
  opts.workers = resolve_worker_count(e.workers);
  const Catalog catalog = enumerate_equilibria(spec, opts);
  Output o(g.out);
  for (const auto& entry : catalog.entries) {
    json line = report_json(entry.report);
    line["graph"] = configuration_to_json(entry.cfg);
    line["family"] = entry.family.to_string();
    o.stream() << line.dump() << '\n';
  }
  std::cerr << json{{"total", catalog.summary.total},
                    {"nash", catalog.summary.nash},
                    {"strict", catalog.summary.strict},
                    {"recursive", catalog.summary.recursive}}
                   .dump()
            << '\n';
  return kOk;
}

struct SimulateOptions {
  std::string graph;
  int n = 0;
  int degree = 0;
  double alpha = 0.0;
  std::string degrees_file;
  std::uint64_t steps = 100000;
  bool no_early_stop = false;
  std::uint64_t potential_every = 0;
};

template <Scalar T>
int run_simulate(const GlobalOptions& g, const SimulateOptions& s) {
  Configuration init;
  if (!s.graph.empty()) {
    init = read_configuration(s.graph);
  } else {
    Rng rng(splitmix64(g.seed ^ 0x5eedULL));
    OutDegreeProfile profile;
    if (!s.degrees_file.empty())
      profile = DegreeSpec::from_file(s.degrees_file).file_profile;
    else if (s.alpha > 0.0)
      profile = sample_powerlaw_profile(s.n, s.alpha, rng);
    else if (s.n >= 2 && s.degree >= 1)
      profile = OutDegreeProfile::homogeneous(s.n, s.degree);
    else
      throw Error(ErrorCode::InvalidArgument, "give --graph, or --n with --degree/--alpha, or --degrees");
    init = random_configuration(profile, rng);
  }
  const GameSpec<T> spec = build_spec<T>(g, init.degrees());
  RunOptions opts;
  opts.early_stop = !s.no_early_stop;
  opts.potential_every = s.potential_every;
  const Trace trace = run_br(spec, init, s.steps, g.seed, opts);
  Output o(g.out);
  o.stream() << trace_to_json(trace, game_spec_to_json(spec)).dump() << '\n';
  return kOk;
}

struct SweepOptions {
  std::vector<int> n_values;
  int degree = 0;
  double alpha = 0.0;
  std::string degrees_file;
  std::vector<double> betas;
  int replicas = 7;
  std::uint64_t steps = 100000;
  bool no_early_stop = false;
  int workers = 0;
  std::string plot_data;
};

int run_sweep(const GlobalOptions& g, const SweepOptions& s) {
  SweepSpec spec;
  spec.n_values = s.n_values;
  if (!s.degrees_file.empty())
    spec.degrees = DegreeSpec::from_file(s.degrees_file);
  else if (s.alpha > 0.0)
    spec.degrees = DegreeSpec::powerlaw(s.alpha);
  else if (s.degree >= 1)
    spec.degrees = DegreeSpec::homogeneous(s.degree);
  else
    throw Error(ErrorCode::InvalidArgument, "give --degree, --alpha or --degrees");
  spec.betas = s.betas;
  spec.replicas = s.replicas;
  spec.steps = s.steps;
  spec.master_seed = g.seed;
  spec.early_stop = !s.no_early_stop;
  spec.workers = resolve_worker_count(s.workers);
  spec.validate();

  Output o(g.out);
  o.stream() << sweep_csv_header() << '\n';
  std::size_t failures = 0;
  const SweepResult result = sweep(spec, [&](const SweepRow& row) {
    if (!row.error.empty()) {
      ++failures;
      std::cerr << "row n=" << row.n << " beta=" << row.beta << " replica=" << row.replica
                << " failed: " << row.error << '\n';
    }
  });
  for (const auto& row : result.rows)
    if (row.error.empty()) o.stream() << sweep_csv_row(row) << '\n';
  json summary = json::array();
  for (const auto& c : result.cells)
    summary.push_back({{"n", c.n}, {"beta", c.beta}, {"count", c.count}, {"mean", c.mean}, {"variance", c.variance}});
  std::cerr << json{{"cells", summary}, {"failed_rows", failures}}.dump() << '\n';
  if (!s.plot_data.empty()) {
    std::ofstream plot(s.plot_data);
    if (!plot) throw Error(ErrorCode::ParseError, "cannot write " + s.plot_data);
    plot << plot_data_csv(result, spec.degrees.label());
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::SpaceTooLarge:
    case ErrorCode::TooLargeForEnumeration:
      return kBudgetExceeded;
    default:
      return kInvalidInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank-centrality network formation game toolkit"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--beta", g.beta, "discount factor, decimal or p/q")->capture_default_str();
  app.add_option("--eta", g.eta, "'uniform' or a file with the intrinsic centrality vector")->capture_default_str();
  app.add_option("--spec", g.spec_file, "game spec JSON (overrides --beta/--eta)");
  app.add_option("--seed", g.seed, "random seed / sweep master seed")->capture_default_str();
  app.add_flag("--exact", g.exact, "exact rational arithmetic");
  app.add_option("--out", g.out, "output file (default stdout)");
  for (auto* opt : app.get_options()) opt->configurable(true);
  app.fallthrough();

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "check nash | strict | recursive on a graph file");
  verify_cmd->add_option("mode", verify.mode)->required()->check(CLI::IsMember({"nash", "strict", "recursive"}));
  verify_cmd->add_option("graph", verify.graph)->required();
  verify_cmd->add_flag("--assert", verify.assert_mode, "exit 2 when the check fails");
  verify_cmd->add_option("--budget", verify.budget, "max configurations explored for recursive")->capture_default_str();

  std::string classify_graph;
  auto* classify_cmd = app.add_subcommand("classify", "structural family label of a graph");
  classify_cmd->add_option("graph", classify_graph)->required();

  std::string potential_graph;
  auto* potential_cmd = app.add_subcommand("potential", "tree sums, Z, psi and m of a graph");
  potential_cmd->add_option("graph", potential_graph)->required();

  EnumerateOptions enumerate;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "catalog every configuration of a small game");
  enumerate_cmd->add_option("--n", enumerate.n);
  enumerate_cmd->add_option("--degree", enumerate.degree, "homogeneous out-degree");
  enumerate_cmd->add_option("--degrees", enumerate.degrees, "explicit out-degree profile")->delimiter(',');
  enumerate_cmd->add_option("--workers", enumerate.workers);

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "run best-response dynamics and write a trace");
  simulate_cmd->add_option("--graph", simulate.graph, "initial configuration");
  simulate_cmd->add_option("--n", simulate.n, "random initial configuration size");
  simulate_cmd->add_option("--degree", simulate.degree);
  simulate_cmd->add_option("--alpha", simulate.alpha, "power-law exponent for random degrees");
  simulate_cmd->add_option("--degrees", simulate.degrees_file, "degree profile file");
  simulate_cmd->add_option("--steps", simulate.steps)->capture_default_str();
  simulate_cmd->add_flag("--no-early-stop", simulate.no_early_stop);
  simulate_cmd->add_option("--potential-series", simulate.potential_every, "sample psi every k steps");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "fragmentation experiment over n, beta and replicas");
  sweep_cmd->add_option("--n", sweep_opts.n_values)->delimiter(',');
  sweep_cmd->add_option("--degree", sweep_opts.degree);
  sweep_cmd->add_option("--alpha", sweep_opts.alpha);
  sweep_cmd->add_option("--degrees", sweep_opts.degrees_file);
  sweep_cmd->add_option("--betas", sweep_opts.betas)->delimiter(',')->required();
  sweep_cmd->add_option("--replicas", sweep_opts.replicas)->capture_default_str();
  sweep_cmd->add_option("--steps", sweep_opts.steps)->capture_default_str();
  sweep_cmd->add_flag("--no-early-stop", sweep_opts.no_early_stop);
  sweep_cmd->add_option("--workers", sweep_opts.workers);
  sweep_cmd->add_option("--plot-data", sweep_opts.plot_data, "write per-cell mean/variance CSV");

  int n_sample = 0;
  double alpha_sample = 0.0;
  auto* powerlaw_cmd = app.add_subcommand("powerlaw-sample", "sample a truncated power-law degree profile");
  powerlaw_cmd->add_option("--n", n_sample)->required();
  powerlaw_cmd->add_option("--alpha", alpha_sample)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*verify_cmd) return g.exact ? run_verify<Rational>(g, verify) : run_verify<double>(g, verify);
    if (*potential_cmd)
      return g.exact ? run_potential<Rational>(g, potential_graph) : run_potential<double>(g, potential_graph);
    if (*enumerate_cmd) {
      // Enumeration decides ties exactly unless told otherwise.
      return run_enumerate<Rational>(g, enumerate);
    }
    if (*simulate_cmd) return g.exact ? run_simulate<Rational>(g, simulate) : run_simulate<double>(g, simulate);
    if (*sweep_cmd) return run_sweep(g, sweep_opts);
    if (*classify_cmd) {
      const Configuration cfg = read_configuration(classify_graph);
      const StructuralMetrics m = structural_metrics(cfg);
      Output o(g.out);
      o.stream() << json{{"family", classify_family(cfg).to_string()},
                         {"components", m.components},
                         {"undirected_links", m.undirected_links},
                         {"three_cycles", m.three_cycles},
                         {"m", m.max_in_reach},
                         {"source_sizes", m.source_sizes}}
                        .dump(2)
                 << '\n';
      return kOk;
    }
    if (*powerlaw_cmd) {
      const OutDegreeProfile p = sample_powerlaw_profile(n_sample, alpha_sample, g.seed);
      Output o(g.out);
      o.stream() << json{{"n", n_sample}, {"alpha", alpha_sample}, {"seed", g.seed}, {"degrees", p.degrees()}}.dump()
                 << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}
