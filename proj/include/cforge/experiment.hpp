#pragma once

// Random instances and fragmentation sweeps over (n, degrees, beta, replica).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cforge/graph.hpp"
#include "cforge/rng.hpp"

namespace cforge {

// Each node independently links to a uniform d_i-subset of the other nodes.
Configuration random_configuration(const OutDegreeProfile& profile, Rng& rng);
Configuration random_configuration(int n, const OutDegreeProfile& profile, std::uint64_t seed);

// P(d) = d^-alpha / sum_{k=1}^{n-1} k^-alpha for d = 1..n-1.
std::vector<double> powerlaw_probabilities(int n, double alpha);
OutDegreeProfile sample_powerlaw_profile(int n, double alpha, Rng& rng);
OutDegreeProfile sample_powerlaw_profile(int n, double alpha, std::uint64_t seed);

struct DegreeSpec {
  enum class Kind { Homogeneous, PowerLaw, File };
  Kind kind = Kind::Homogeneous;
  int d = 1;
  double alpha = 0.0;
  std::string path;
  OutDegreeProfile file_profile;

  static DegreeSpec homogeneous(int d);
  static DegreeSpec powerlaw(double alpha);
  // Reads a JSON array or whitespace-separated list of degrees.
  static DegreeSpec from_file(const std::string& path);

  // "hom:4", "powerlaw:3", "file:<path>"
  std::string label() const;
};

struct SweepSpec {
  std::vector<int> n_values;
  DegreeSpec degrees;
  std::vector<double> betas;
  int replicas = 7;
  std::uint64_t steps = 100000;
  std::uint64_t master_seed = 0;
  bool early_stop = true;
  int workers = 1;

  void validate() const;
};

struct SweepRow {
  int n = 0;
  std::string degree_spec;
  std::optional<double> alpha;
  double beta = 0.0;
  int replica = 0;
  std::uint64_t seed = 0;
  std::uint64_t steps_run = 0;
  int components = 0;
  double c_index = 0.0;  // c(d+1)/n homogeneous, c/n otherwise
  int m = 0;
  bool strict_absorbed = false;  // final configuration is a strict equilibrium
  bool certified_nash = false;
  bool audit_passed = true;
  std::string error;  // non-empty when the row failed
};

struct CellSummary {
  int n = 0;
  double beta = 0.0;
  int count = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance, 0 for a single replica
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (n, beta, replica)
  std::vector<CellSummary> cells;
};

std::uint64_t row_seed(std::uint64_t master_seed, int n, const std::string& degree_spec, double beta,
                       int replica);

SweepRow run_sweep_row(const SweepSpec& spec, int n, double beta, int replica);

// Rows are handed to on_row (serialized) as they finish.
SweepResult sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row = {});

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);
std::string plot_data_csv(const SweepResult& result, const std::string& degree_spec);

// CENTRALITY_FORGE_WORKERS overrides `requested`; non-positive means hardware concurrency.
int resolve_worker_count(int requested);

}  // namespace cforge
