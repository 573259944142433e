#pragma once

// PageRank centrality and expected hitting times for the chain
// P = beta * R + (1 - beta) * 1 eta^T, where R_jk = 1/d_j for k in out(j).

#include <vector>

#include "cforge/graph.hpp"
#include "cforge/linalg.hpp"
#include "cforge/scalar.hpp"

namespace cforge {

struct SolverOptions {
  // Systems with more unknowns than this use Gauss-Seidel iteration (float only).
  int dense_limit = 512;
  double iterative_tolerance = 1e-12;
  int max_iterations = 100000;
};

template <Scalar T>
struct GameSpec {
  T beta;
  std::vector<T> eta;
  OutDegreeProfile degrees;
  double tie_tolerance = kDefaultTieTolerance;
  SolverOptions solver;

  int size() const { return degrees.size(); }

  // Throws InvalidArgument / DimensionMismatch on a malformed spec.
  void validate() const;

  static GameSpec uniform(OutDegreeProfile degrees, T beta);
};

GameSpec<double> to_float(const GameSpec<Rational>& spec);

// Spec for the degrees of `cfg` with uniform eta.
template <Scalar T>
GameSpec<T> uniform_spec_for(const Configuration& cfg, T beta) {
  return GameSpec<T>::uniform(cfg.degrees(), beta);
}

template <Scalar T>
struct HittingTimeTable {
  Node target = 0;
  std::vector<T> values;
  bool normalized = false;
};

// Throws DimensionMismatch unless cfg has the spec's size and degrees.
template <Scalar T>
void check_compatible(const GameSpec<T>& spec, const Configuration& cfg);

template <Scalar T>
Matrix<T> transition_matrix(const GameSpec<T>& spec, const Configuration& cfg);

template <Scalar T>
std::vector<T> pagerank(const GameSpec<T>& spec, const Configuration& cfg);

// normalized = true replaces eta by the unit vector at the target; only the
// nodes that can reach the target are solved for, the rest get 1/(1-beta).
template <Scalar T>
HittingTimeTable<T> hitting_times(const GameSpec<T>& spec, const Configuration& cfg, Node target,
                                  bool normalized);

// pi_i recovered from the full hitting-time table toward i.
template <Scalar T>
T kac_utility(const GameSpec<T>& spec, const Configuration& cfg, Node i);

// Same formula evaluated for an arbitrary action of player i, given the full
// (non-normalized) table toward i. The table does not depend on i's links.
template <Scalar T>
T kac_utility_for_action(const GameSpec<T>& spec, const HittingTimeTable<T>& table,
                         const NodeSet& action);

}  // namespace cforge
