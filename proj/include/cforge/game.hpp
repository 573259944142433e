#pragma once

// Utilities, best-response sets and the tree-sum potential of the centrality game.

#include <cstdint>
#include <functional>
#include <vector>

#include "cforge/centrality.hpp"
#include "cforge/graph.hpp"
#include "cforge/scalar.hpp"

namespace cforge {

template <Scalar T>
T utility(const GameSpec<T>& spec, const Configuration& cfg, Node i);

// All optimal actions of one player, stored implicitly: every member is
// `required` plus any `choose`-subset of `ties`.
template <Scalar T>
struct BestResponseSet {
  Node player = 0;
  int degree = 0;
  NodeSet required;  // strictly below the threshold
  NodeSet ties;      // at the threshold
  int choose = 0;
  T threshold{};     // d-th smallest normalized hitting time among candidates

  bool contains(const NodeSet& action) const;
  bool is_singleton() const { return choose == 0 || choose == static_cast<int>(ties.size()); }
  // Saturates at UINT64_MAX.
  std::uint64_t count() const;
  // required + the first `choose` ties.
  NodeSet first_member() const;
  // All members in lexicographic order of the chosen ties; throws
  // BudgetExceeded when there are more than `cap`.
  std::vector<NodeSet> members(std::uint64_t cap = 1'000'000) const;
  // Uniform member; uniform_index(k) must return a uniform integer in [0, k).
  NodeSet sample(const std::function<std::uint64_t(std::uint64_t)>& uniform_index) const;
};

struct BestResponseOptions {
  // Restrict candidates to nodes within d_i reverse hops when the reach set
  // is larger than d_i. Turning it off gives the same answer, more slowly.
  bool locality_pruning = true;
};

template <Scalar T>
BestResponseSet<T> best_response_set(const GameSpec<T>& spec, const Configuration& cfg, Node i,
                                     const BestResponseOptions& opts = {});

enum class TreeSumMethod { Enumerate, Minor };

inline constexpr int kMaxEnumerationNodes = 8;

// Sum over spanning in-trees rooted at i of the product of transition
// probabilities on tree links. Enumerate throws TooLargeForEnumeration for n > 8.
template <Scalar T>
T tree_sum(const GameSpec<T>& spec, const Configuration& cfg, Node i, TreeSumMethod method);

template <Scalar T>
struct PotentialReport {
  std::vector<T> tree_sums;          // exact in rational mode; may underflow in float
  T z{};
  std::vector<double> log_tree_sums;
  double log_z = 0.0;
  double psi = 0.0;                  // -log Z
  int m = 0;
};

template <Scalar T>
PotentialReport<T> potential(const GameSpec<T>& spec, const Configuration& cfg);

// log Z only, without the exact tree sums (cheaper in float mode).
template <Scalar T>
double log_potential_z(const GameSpec<T>& spec, const Configuration& cfg);

}  // namespace cforge
