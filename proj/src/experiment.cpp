#include "cforge/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "cforge/dynamics.hpp"
#include "cforge/equilibrium.hpp"
#include "cforge/errors.hpp"
#include "cforge/io.hpp"

namespace cforge {

namespace {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

Configuration random_configuration(const OutDegreeProfile& profile, Rng& rng) {
  const int n = profile.size();
  std::vector<NodeSet> out(static_cast<std::size_t>(n));
  for (Node i = 0; i < n; ++i) {
    // Floyd's algorithm over the n-1 other nodes, then skip i.
    const std::uint64_t m = static_cast<std::uint64_t>(n - 1);
    const std::uint64_t k = static_cast<std::uint64_t>(profile[i]);
    NodeSet picked;
    for (std::uint64_t j = m - k; j < m; ++j) {
      Node t = static_cast<Node>(rng.uniform_index(j + 1));
      if (std::find(picked.begin(), picked.end(), t) != picked.end()) t = static_cast<Node>(j);
      picked.push_back(t);
    }
    for (Node& v : picked)
      if (v >= i) ++v;
    out[i] = std::move(picked);
  }
  return make_configuration(n, std::move(out));
}

Configuration random_configuration(int n, const OutDegreeProfile& profile, std::uint64_t seed) {
  if (profile.size() != n) throw Error(ErrorCode::DimensionMismatch, "profile size differs from n");
  Rng rng(seed);
  return random_configuration(profile, rng);
}

std::vector<double> powerlaw_probabilities(int n, double alpha) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two nodes");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  std::vector<double> p(static_cast<std::size_t>(n - 1));
  // Work relative to k=1 so large alpha does not underflow the normalizer.
  double total = 0.0;
  for (int k = 1; k < n; ++k) total += p[k - 1] = std::exp(-alpha * std::log(static_cast<double>(k)));
  for (double& v : p) v /= total;
  return p;
}

OutDegreeProfile sample_powerlaw_profile(int n, double alpha, Rng& rng) {
  const std::vector<double> p = powerlaw_probabilities(n, alpha);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) cdf[k] = acc += p[k];
  std::vector<int> degrees(static_cast<std::size_t>(n));
  for (int& d : degrees) {
    const double u = rng.uniform01();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    d = 1 + static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }
  return OutDegreeProfile(std::move(degrees));
}

OutDegreeProfile sample_powerlaw_profile(int n, double alpha, std::uint64_t seed) {
  Rng rng(seed);
  return sample_powerlaw_profile(n, alpha, rng);
}

DegreeSpec DegreeSpec::homogeneous(int d) {
  DegreeSpec s;
  s.kind = Kind::Homogeneous;
  s.d = d;
  return s;
}

DegreeSpec DegreeSpec::powerlaw(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  DegreeSpec s;
  s.kind = Kind::PowerLaw;
  s.alpha = alpha;
  return s;
}

DegreeSpec DegreeSpec::from_file(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<int> degrees;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      degrees = nlohmann::json::parse(text).get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  } else {
    std::istringstream in(text);
    int d;
    while (in >> d) degrees.push_back(d);
    if (!in.eof()) throw Error(ErrorCode::ParseError, "degree file must contain integers");
  }
  DegreeSpec s;
  s.kind = Kind::File;
  s.path = path;
  s.file_profile = OutDegreeProfile(std::move(degrees));
  return s;
}

std::string DegreeSpec::label() const {
  switch (kind) {
    case Kind::Homogeneous: return "hom:" + std::to_string(d);
    case Kind::PowerLaw: return "powerlaw:" + format_double(alpha);
    case Kind::File: return "file:" + path;
  }
  return "?";
}

void SweepSpec::validate() const {
  if (replicas < 1) throw Error(ErrorCode::InvalidArgument, "replicas must be >= 1");
  if (betas.empty()) throw Error(ErrorCode::InvalidArgument, "empty beta grid");
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidArgument, "beta grid must lie in (0,1)");
  if (degrees.kind != DegreeSpec::Kind::File && n_values.empty())
    throw Error(ErrorCode::InvalidArgument, "no n values");
  for (int n : n_values)
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  if (degrees.kind == DegreeSpec::Kind::Homogeneous)
    for (int n : n_values)
      if (degrees.d < 1 || degrees.d > n - 1)
        throw Error(ErrorCode::OutOfRange, "degree " + std::to_string(degrees.d) + " needs 1 <= d <= n-1");
  if (degrees.kind == DegreeSpec::Kind::PowerLaw && !(degrees.alpha > 0.0))
    throw Error(ErrorCode::InvalidArgument, "power-law exponent must be positive");
}

std::uint64_t row_seed(std::uint64_t master_seed, int n, const std::string& degree_spec, double beta,
                       int replica) {
  std::string key = std::to_string(master_seed) + '|' + std::to_string(n) + '|' + degree_spec + '|' +
                    format_double(beta) + '|' + std::to_string(replica);
  return stable_hash(key);
}

SweepRow run_sweep_row(const SweepSpec& spec, int n, double beta, int replica) {
  SweepRow row;
  row.n = n;
  row.degree_spec = spec.degrees.label();
  row.beta = beta;
  row.replica = replica;
  if (spec.degrees.kind == DegreeSpec::Kind::PowerLaw) row.alpha = spec.degrees.alpha;
  row.seed = row_seed(spec.master_seed, n, row.degree_spec, beta, replica);
  try {
    Rng rng(row.seed);
    OutDegreeProfile profile;
    switch (spec.degrees.kind) {
      case DegreeSpec::Kind::Homogeneous: profile = OutDegreeProfile::homogeneous(n, spec.degrees.d); break;
      case DegreeSpec::Kind::PowerLaw: profile = sample_powerlaw_profile(n, spec.degrees.alpha, rng); break;
      case DegreeSpec::Kind::File: profile = spec.degrees.file_profile; break;
    }
    if (profile.size() != n) throw Error(ErrorCode::DimensionMismatch, "degree file size differs from n");
    const Configuration init = random_configuration(profile, rng);
    const GameSpec<double> game = GameSpec<double>::uniform(profile, beta);
    RunOptions opts;
    opts.early_stop = spec.early_stop;
    const Trace trace = run_br(game, init, spec.steps, splitmix64(row.seed), opts);
    const StructuralMetrics metrics = structural_metrics(trace.final);
    row.steps_run = trace.steps_run;
    row.components = metrics.components;
    row.m = metrics.max_in_reach;
    row.c_index = spec.degrees.kind == DegreeSpec::Kind::Homogeneous
                      ? static_cast<double>(metrics.components) * (spec.degrees.d + 1) / n
                      : static_cast<double>(metrics.components) / n;
    const EquilibriumReport report = is_nash(game, trace.final);
    row.certified_nash = report.is_nash;
    row.strict_absorbed = report.is_strict;
    row.audit_passed = audit_passed(audit_conditions(game, trace.final, report));
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

SweepResult sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row) {
  spec.validate();
  struct Job {
    int n;
    double beta;
    int replica;
  };
  std::vector<Job> jobs;
  std::vector<int> ns = spec.n_values;
  if (spec.degrees.kind == DegreeSpec::Kind::File && ns.empty()) ns.push_back(spec.degrees.file_profile.size());
  for (int n : ns)
    for (double b : spec.betas)
      for (int r = 0; r < spec.replicas; ++r) jobs.push_back({n, b, r});

  SweepResult result;
  result.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex writer;
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      SweepRow row = run_sweep_row(spec, jobs[k].n, jobs[k].beta, jobs[k].replica);
      if (on_row) {
        std::lock_guard<std::mutex> lock(writer);
        on_row(row);
      }
      result.rows[k] = std::move(row);
    }
  };
  const int workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.beta, a.replica) < std::tie(b.n, b.beta, b.replica);
  });

  std::map<std::pair<int, double>, std::vector<double>> cells;
  for (const auto& row : result.rows)
    if (row.error.empty()) cells[{row.n, row.beta}].push_back(row.c_index);
  for (const auto& [key, values] : cells) {
    CellSummary c;
    c.n = key.first;
    c.beta = key.second;
    c.count = static_cast<int>(values.size());
    for (double v : values) c.mean += v;
    c.mean /= c.count;
    if (c.count > 1) {
      for (double v : values) c.variance += (v - c.mean) * (v - c.mean);
      c.variance /= c.count - 1;
    }
    result.cells.push_back(c);
  }
  return result;
}

std::string sweep_csv_header() {
  return "n,degree_spec,alpha,beta,replica,seed,steps_run,components,C_index,m_x,strict_absorbed";
}

std::string sweep_csv_row(const SweepRow& row) {
  std::ostringstream os;
  os << row.n << ',' << row.degree_spec << ',' << (row.alpha ? format_double(*row.alpha) : "") << ','
     << format_double(row.beta) << ',' << row.replica << ',' << row.seed << ',' << row.steps_run << ','
     << row.components << ',' << format_double(row.c_index) << ',' << row.m << ','
     << (row.strict_absorbed ? "true" : "false");
  return os.str();
}

std::string plot_data_csv(const SweepResult& result, const std::string& degree_spec) {
  std::ostringstream os;
  os << "n,degree_spec,beta,count,mean,variance\n";
  for (const auto& c : result.cells)
    os << c.n << ',' << degree_spec << ',' << format_double(c.beta) << ',' << c.count << ','
       << format_double(c.mean) << ',' << format_double(c.variance) << '\n';
  return os.str();
}

int resolve_worker_count(int requested) {
  if (const char* env = std::getenv("CENTRALITY_FORGE_WORKERS")) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
    if (ec == std::errc() && v > 0) return v;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace cforge
