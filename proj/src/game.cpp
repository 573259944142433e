#include "cforge/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

NodeSet merged(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

double log_sum_exp(const std::vector<double>& xs) {
  double top = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - top);
  return top + std::log(acc);
}

template <Scalar T>
Matrix<T> laplacian(const GameSpec<T>& spec, const Configuration& cfg) {
  Matrix<T> p = transition_matrix(spec, cfg);
  const int n = p.rows();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) p(r, c) = (r == c ? T(1) : T(0)) - p(r, c);
  return p;
}

template <Scalar T>
T enumerate_trees(const Matrix<T>& p, Node root) {
  const int n = p.rows();
  std::vector<Node> others;
  for (Node j = 0; j < n; ++j)
    if (j != root) others.push_back(j);
  const int k = static_cast<int>(others.size());
  // parent choice index per non-root node; parent must differ from the node.
  std::vector<int> choice(static_cast<std::size_t>(k), 0);
  auto parent_of = [&](int slot) {
    int c = choice[slot];
    return c >= others[slot] ? c + 1 : c;
  };
  std::vector<Node> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> state(static_cast<std::size_t>(n));
  T total(0);
  while (true) {
    for (int s = 0; s < k; ++s) parent[others[s]] = parent_of(s);
    // Every node must reach the root by following parents.
    std::fill(state.begin(), state.end(), 0);  // 0 unknown, 1 on path, 2 reaches root
    state[root] = 2;
    bool ok = true;
    for (int s = 0; s < k && ok; ++s) {
      Node v = others[s];
      std::vector<Node> path;
      while (state[v] == 0) {
        state[v] = 1;
        path.push_back(v);
        v = parent[v];
      }
      if (state[v] == 1) ok = false;
      for (Node u : path) state[u] = 2;
    }
    if (ok) {
      T w(1);
      for (Node v : others) w *= p(v, parent[v]);
      total += w;
    }
    int s = 0;
    while (s < k && ++choice[s] == n - 1) choice[s++] = 0;
    if (s == k) break;
  }
  return total;
}

}  // namespace

template <Scalar T>
T utility(const GameSpec<T>& spec, const Configuration& cfg, Node i) {
  if (i < 0 || i >= cfg.size()) throw Error(ErrorCode::OutOfRange, "player " + std::to_string(i));
  return pagerank(spec, cfg)[i];
}

template <Scalar T>
bool BestResponseSet<T>::contains(const NodeSet& action) const {
  if (static_cast<int>(action.size()) != degree) return false;
  if (!std::includes(action.begin(), action.end(), required.begin(), required.end())) return false;
  for (Node j : action)
    if (!std::binary_search(required.begin(), required.end(), j) &&
        !std::binary_search(ties.begin(), ties.end(), j))
      return false;
  return true;
}

template <Scalar T>
std::uint64_t BestResponseSet<T>::count() const {
  return binomial(ties.size(), static_cast<std::uint64_t>(choose));
}

template <Scalar T>
NodeSet BestResponseSet<T>::first_member() const {
  return merged(required, NodeSet(ties.begin(), ties.begin() + choose));
}

template <Scalar T>
std::vector<NodeSet> BestResponseSet<T>::members(std::uint64_t cap) const {
  const std::uint64_t total = count();
  if (total > cap)
    throw Error(ErrorCode::BudgetExceeded, "best-response set of player " + std::to_string(player) +
                                               " has more than " + std::to_string(cap) + " members");
  std::vector<NodeSet> out;
  out.reserve(static_cast<std::size_t>(total));
  const int m = static_cast<int>(ties.size());
  std::vector<int> pick(static_cast<std::size_t>(choose));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    NodeSet chosen;
    for (int p : pick) chosen.push_back(ties[p]);
    out.push_back(merged(required, chosen));
    int k = choose - 1;
    while (k >= 0 && pick[k] == m - choose + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < choose; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

template <Scalar T>
NodeSet BestResponseSet<T>::sample(
    const std::function<std::uint64_t(std::uint64_t)>& uniform_index) const {
  const std::uint64_t m = ties.size();
  const std::uint64_t k = static_cast<std::uint64_t>(choose);
  if (k == 0 || k == m) return merged(required, ties);
  // Floyd's algorithm for a uniform k-subset of {0..m-1}.
  std::vector<std::uint64_t> picked;
  for (std::uint64_t j = m - k; j < m; ++j) {
    std::uint64_t t = uniform_index(j + 1);
    if (std::find(picked.begin(), picked.end(), t) != picked.end())
      picked.push_back(j);
    else
      picked.push_back(t);
  }
  NodeSet chosen;
  for (auto p : picked) chosen.push_back(ties[p]);
  std::sort(chosen.begin(), chosen.end());
  return merged(required, chosen);
}

template <Scalar T>
BestResponseSet<T> best_response_set(const GameSpec<T>& spec, const Configuration& cfg, Node i,
                                     const BestResponseOptions& opts) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  if (i < 0 || i >= n) throw Error(ErrorCode::OutOfRange, "player " + std::to_string(i));
  const int d = spec.degrees[i];
  const HittingTimeTable<T> table = hitting_times(spec, cfg, i, true);
  const NodeSet reach = in_reach(cfg, i);

  BestResponseSet<T> br;
  br.player = i;
  br.degree = d;

  if (static_cast<int>(reach.size()) <= d) {
    // Everything that can reach i is taken; the rest all sit on the plateau.
    for (Node j : reach)
      if (j != i) br.required.push_back(j);
    for (Node j = 0; j < n; ++j)
      if (!std::binary_search(reach.begin(), reach.end(), j)) br.ties.push_back(j);
    br.choose = d - static_cast<int>(br.required.size());
    br.threshold = T(1) / (T(1) - spec.beta);
    return br;
  }

  NodeSet candidates;
  for (Node j : opts.locality_pruning ? in_reach(cfg, i, d) : reach)
    if (j != i) candidates.push_back(j);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Node a, Node b) { return table.values[a] < table.values[b]; });
  br.threshold = table.values[candidates[static_cast<std::size_t>(d - 1)]];
  for (Node j : candidates) {
    const T& v = table.values[j];
    if (tie_equal(v, br.threshold, spec.tie_tolerance))
      br.ties.push_back(j);
    else if (v < br.threshold)
      br.required.push_back(j);
  }
  std::sort(br.required.begin(), br.required.end());
  std::sort(br.ties.begin(), br.ties.end());
  br.choose = d - static_cast<int>(br.required.size());
  return br;
}

template <Scalar T>
T tree_sum(const GameSpec<T>& spec, const Configuration& cfg, Node i, TreeSumMethod method) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  if (i < 0 || i >= n) throw Error(ErrorCode::OutOfRange, "node " + std::to_string(i));
  if (method == TreeSumMethod::Enumerate) {
    if (n > kMaxEnumerationNodes)
      throw Error(ErrorCode::TooLargeForEnumeration,
                  "tree enumeration limited to " + std::to_string(kMaxEnumerationNodes) + " nodes");
    return enumerate_trees(transition_matrix(spec, cfg), i);
  }
  return determinant(laplacian(spec, cfg).without(i));
}

template <Scalar T>
PotentialReport<T> potential(const GameSpec<T>& spec, const Configuration& cfg) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  const Matrix<T> lap = laplacian(spec, cfg);
  PotentialReport<T> report;
  report.tree_sums.resize(static_cast<std::size_t>(n));
  report.log_tree_sums.resize(static_cast<std::size_t>(n));
  if constexpr (ScalarTraits<T>::exact) {
    report.z = T(0);
    for (int k = 0; k < n; ++k) {
      report.tree_sums[k] = determinant(lap.without(k));
      if (sgn(report.tree_sums[k]) <= 0)
        throw Error(ErrorCode::SolveFailure, "tree sum is not positive");
      report.log_tree_sums[k] = log_of(report.tree_sums[k]);
      report.z += report.tree_sums[k];
    }
    report.log_z = log_of(report.z);
  } else {
    for (int k = 0; k < n; ++k) {
      report.log_tree_sums[k] = log_determinant(lap.without(k));
      report.tree_sums[k] = std::exp(report.log_tree_sums[k]);
    }
    report.log_z = log_sum_exp(report.log_tree_sums);
    report.z = std::exp(report.log_z);
  }
  report.psi = -report.log_z;
  report.m = max_in_reach(cfg);
  return report;
}

template <Scalar T>
double log_potential_z(const GameSpec<T>& spec, const Configuration& cfg) {
  if constexpr (ScalarTraits<T>::exact) {
    return potential(spec, cfg).log_z;
  } else {
    // Z = N_k / pi_k for any k; use the most central node for accuracy.
    const std::vector<double> pi = pagerank(spec, cfg);
    const int k = static_cast<int>(std::max_element(pi.begin(), pi.end()) - pi.begin());
    return log_determinant(laplacian(spec, cfg).without(k)) - std::log(pi[k]);
  }
}

#define CFORGE_INSTANTIATE(T)                                                                     \
  template T utility(const GameSpec<T>&, const Configuration&, Node);                             \
  template struct BestResponseSet<T>;                                                             \
  template BestResponseSet<T> best_response_set(const GameSpec<T>&, const Configuration&, Node,   \
                                                const BestResponseOptions&);                      \
  template T tree_sum(const GameSpec<T>&, const Configuration&, Node, TreeSumMethod);             \
  template PotentialReport<T> potential(const GameSpec<T>&, const Configuration&);                \
  template double log_potential_z(const GameSpec<T>&, const Configuration&);

CFORGE_INSTANTIATE(double)
CFORGE_INSTANTIATE(Rational)

#undef CFORGE_INSTANTIATE

}  // namespace cforge
