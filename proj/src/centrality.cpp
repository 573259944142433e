#include "cforge/centrality.hpp"

#include <cmath>
#include <string>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

// Gauss-Seidel for x = c + M x where M has nonnegative entries and spectral
// radius below one. `row` returns (column, weight) pairs for one row of M.
template <class RowFn>
std::vector<double> gauss_seidel(int size, const std::vector<double>& c, RowFn row,
                                 const SolverOptions& opts) {
  std::vector<double> x(c);
  for (int it = 0; it < opts.max_iterations; ++it) {
    double change = 0.0, scale = 1.0;
    for (int r = 0; r < size; ++r) {
      double v = c[r];
      row(r, [&](int col, double w) { v += w * x[col]; });
      change = std::fmax(change, std::fabs(v - x[r]));
      scale = std::fmax(scale, std::fabs(v));
      x[r] = v;
    }
    if (change <= opts.iterative_tolerance * scale) return x;
  }
  throw Error(ErrorCode::SolveFailure, "iterative solve did not converge");
}

}  // namespace

namespace {

bool is_canonical(const double&) { return true; }
bool is_canonical(const Rational& q) {
  Rational copy(q);
  copy.canonicalize();
  return cmp(copy.get_num(), q.get_num()) == 0 && cmp(copy.get_den(), q.get_den()) == 0;
}

}  // namespace

template <Scalar T>
void GameSpec<T>::validate() const {
  const int n = size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two players");
  if (!is_canonical(beta)) throw Error(ErrorCode::InvalidArgument, "beta is not a canonical fraction");
  for (const T& e : eta)
    if (!is_canonical(e)) throw Error(ErrorCode::InvalidArgument, "eta has a non-canonical fraction");
  if (!(beta > T(0) && beta < T(1))) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0,1)");
  if (static_cast<int>(eta.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "eta has " + std::to_string(eta.size()) +
                                                  " entries for " + std::to_string(n) + " players");
  T total(0);
  for (const T& e : eta) {
    if (e < T(0)) throw Error(ErrorCode::InvalidArgument, "eta has a negative entry");
    total += e;
  }
  if constexpr (ScalarTraits<T>::exact) {
    if (total != T(1)) throw Error(ErrorCode::InvalidArgument, "eta does not sum to 1");
  } else {
    if (std::fabs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "eta does not sum to 1");
  }
  if (!(tie_tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tie tolerance must be >= 0");
}

template <Scalar T>
GameSpec<T> GameSpec<T>::uniform(OutDegreeProfile degrees, T beta) {
  GameSpec<T> spec;
  const int n = degrees.size();
  if constexpr (ScalarTraits<T>::exact) beta.canonicalize();
  spec.beta = beta;
  spec.eta.assign(static_cast<std::size_t>(n), T(1) / T(n));
  spec.degrees = std::move(degrees);
  return spec;
}

GameSpec<double> to_float(const GameSpec<Rational>& spec) {
  GameSpec<double> out;
  out.beta = spec.beta.get_d();
  for (const auto& e : spec.eta) out.eta.push_back(e.get_d());
  out.degrees = spec.degrees;
  out.tie_tolerance = spec.tie_tolerance;
  out.solver = spec.solver;
  return out;
}

template <Scalar T>
void check_compatible(const GameSpec<T>& spec, const Configuration& cfg) {
  if constexpr (ScalarTraits<T>::exact) {
    // GMP comparisons are only meaningful on canonical fractions.
    bool ok = is_canonical(spec.beta);
    for (const T& e : spec.eta) ok = ok && is_canonical(e);
    if (!ok) throw Error(ErrorCode::InvalidArgument, "rational spec entries must be canonical");
  }
  if (cfg.size() != spec.size())
    throw Error(ErrorCode::DimensionMismatch, "configuration has " + std::to_string(cfg.size()) +
                                                  " nodes, spec has " + std::to_string(spec.size()));
  for (Node j = 0; j < cfg.size(); ++j)
    if (cfg.degree(j) != spec.degrees[j])
      throw Error(ErrorCode::DimensionMismatch,
                  "node " + std::to_string(j) + " has out-degree " + std::to_string(cfg.degree(j)) +
                      ", spec says " + std::to_string(spec.degrees[j]));
}

template <Scalar T>
Matrix<T> transition_matrix(const GameSpec<T>& spec, const Configuration& cfg) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  Matrix<T> p(n, n);
  const T teleport = T(1) - spec.beta;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) p(j, k) = teleport * spec.eta[k];
    const T link = spec.beta / T(cfg.degree(j));
    for (Node k : cfg.out(j)) p(j, k) += link;
  }
  return p;
}

template <Scalar T>
std::vector<T> pagerank(const GameSpec<T>& spec, const Configuration& cfg) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  const T teleport = T(1) - spec.beta;
  std::vector<T> rhs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rhs[k] = teleport * spec.eta[k];

  if constexpr (!ScalarTraits<T>::exact) {
    if (n > spec.solver.dense_limit) {
      const auto in = cfg.in_neighbors();
      return gauss_seidel(
          n, rhs,
          [&](int k, auto&& add) {
            for (Node j : in[k]) add(j, spec.beta / cfg.degree(j));
          },
          spec.solver);
    }
  }
  // (I - beta R^T) pi = (1 - beta) eta
  Matrix<T> a(n, n);
  for (int k = 0; k < n; ++k) a(k, k) = T(1);
  for (int j = 0; j < n; ++j) {
    const T w = spec.beta / T(cfg.degree(j));
    for (Node k : cfg.out(j)) a(k, j) -= w;
  }
  return solve_linear(std::move(a), std::move(rhs));
}

template <Scalar T>
HittingTimeTable<T> hitting_times(const GameSpec<T>& spec, const Configuration& cfg, Node target,
                                  bool normalized) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  if (target < 0 || target >= n) throw Error(ErrorCode::OutOfRange, "target " + std::to_string(target));

  HittingTimeTable<T> table;
  table.target = target;
  table.normalized = normalized;

  if (normalized) {
    const T plateau = T(1) / (T(1) - spec.beta);
    table.values.assign(static_cast<std::size_t>(n), plateau);
    table.values[target] = T(0);
    std::vector<int> idx(static_cast<std::size_t>(n), -1);
    std::vector<Node> unknowns;
    for (Node j : in_reach(cfg, target))
      if (j != target) {
        idx[j] = static_cast<int>(unknowns.size());
        unknowns.push_back(j);
      }
    const int m = static_cast<int>(unknowns.size());
    if (m == 0) return table;
    std::vector<T> rhs(static_cast<std::size_t>(m), T(1));
    for (int r = 0; r < m; ++r) {
      Node j = unknowns[r];
      const T w = spec.beta / T(cfg.degree(j));
      for (Node k : cfg.out(j))
        if (k != target && idx[k] < 0) rhs[r] += w * plateau;
    }
    std::vector<T> sol;
    bool done = false;
    if constexpr (!ScalarTraits<T>::exact) {
      if (m > spec.solver.dense_limit) {
        sol = gauss_seidel(
            m, rhs,
            [&](int r, auto&& add) {
              Node j = unknowns[r];
              const double w = spec.beta / cfg.degree(j);
              for (Node k : cfg.out(j))
                if (k != target && idx[k] >= 0) add(idx[k], w);
            },
            spec.solver);
        done = true;
      }
    }
    if (!done) {
      Matrix<T> a(m, m);
      for (int r = 0; r < m; ++r) {
        a(r, r) = T(1);
        Node j = unknowns[r];
        const T w = spec.beta / T(cfg.degree(j));
        for (Node k : cfg.out(j))
          if (k != target && idx[k] >= 0) a(r, idx[k]) -= w;
      }
      sol = solve_linear(std::move(a), std::move(rhs));
    }
    for (int r = 0; r < m; ++r) table.values[unknowns[r]] = sol[r];
    return table;
  }

  // Full table: unknowns are all nodes except the target.
  const T teleport = T(1) - spec.beta;
  std::vector<Node> unknowns;
  std::vector<int> idx(static_cast<std::size_t>(n), -1);
  for (Node j = 0; j < n; ++j)
    if (j != target) {
      idx[j] = static_cast<int>(unknowns.size());
      unknowns.push_back(j);
    }
  const int m = n - 1;
  std::vector<T> rhs(static_cast<std::size_t>(m), T(1));
  std::vector<T> sol;
  bool done = false;
  if constexpr (!ScalarTraits<T>::exact) {
    if (m > spec.solver.dense_limit) {
      // tau_j = 1 + (1-beta) sum_k eta_k tau_k + beta/d_j sum_{k in out(j)} tau_k
      std::vector<double> x(static_cast<std::size_t>(m), 1.0);
      const SolverOptions& opts = spec.solver;
      bool converged = false;
      for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        double restart = 0.0;
        for (int r = 0; r < m; ++r) restart += spec.eta[unknowns[r]] * x[r];
        restart *= teleport;
        double change = 0.0, scale = 1.0;
        for (int r = 0; r < m; ++r) {
          Node j = unknowns[r];
          double v = 1.0 + restart;
          const double w = spec.beta / cfg.degree(j);
          for (Node k : cfg.out(j))
            if (k != target) v += w * x[idx[k]];
          change = std::fmax(change, std::fabs(v - x[r]));
          scale = std::fmax(scale, std::fabs(v));
          x[r] = v;
        }
        converged = change <= opts.iterative_tolerance * scale;
      }
      if (!converged) throw Error(ErrorCode::SolveFailure, "iterative solve did not converge");
      sol = std::move(x);
      done = true;
    }
  }
  if (!done) {
    Matrix<T> a(m, m);
    for (int r = 0; r < m; ++r) {
      Node j = unknowns[r];
      for (int c = 0; c < m; ++c) a(r, c) = -(teleport * spec.eta[unknowns[c]]);
      a(r, r) += T(1);
      const T w = spec.beta / T(cfg.degree(j));
      for (Node k : cfg.out(j))
        if (k != target) a(r, idx[k]) -= w;
    }
    sol = solve_linear(std::move(a), std::move(rhs));
  }
  table.values.assign(static_cast<std::size_t>(n), T(0));
  for (int r = 0; r < m; ++r) {
    if constexpr (!ScalarTraits<T>::exact) {
      if (!(sol[r] >= 0.0) || !std::isfinite(sol[r]))
        throw Error(ErrorCode::SolveFailure, "hitting time is not finite and nonnegative");
    }
    table.values[unknowns[r]] = sol[r];
  }
  return table;
}

template <Scalar T>
T kac_utility_for_action(const GameSpec<T>& spec, const HittingTimeTable<T>& table,
                         const NodeSet& action) {
  if (table.normalized)
    throw Error(ErrorCode::InvalidArgument, "Kac formula needs the full hitting-time table");
  const T teleport = T(1) - spec.beta;
  T restart(0);
  for (std::size_t j = 0; j < table.values.size(); ++j) restart += spec.eta[j] * table.values[j];
  T linked(0);
  for (Node j : action) linked += table.values[j];
  T denom = T(1) + teleport * restart + spec.beta * linked / T(static_cast<int>(action.size()));
  return T(1) / denom;
}

template <Scalar T>
T kac_utility(const GameSpec<T>& spec, const Configuration& cfg, Node i) {
  auto table = hitting_times(spec, cfg, i, false);
  return kac_utility_for_action(spec, table, cfg.out(i));
}

#define CFORGE_INSTANTIATE(T)                                                                   \
  template struct GameSpec<T>;                                                                  \
  template void check_compatible(const GameSpec<T>&, const Configuration&);                     \
  template Matrix<T> transition_matrix(const GameSpec<T>&, const Configuration&);               \
  template std::vector<T> pagerank(const GameSpec<T>&, const Configuration&);                   \
  template HittingTimeTable<T> hitting_times(const GameSpec<T>&, const Configuration&, Node, bool); \
  template T kac_utility(const GameSpec<T>&, const Configuration&, Node);                       \
  template T kac_utility_for_action(const GameSpec<T>&, const HittingTimeTable<T>&, const NodeSet&);

CFORGE_INSTANTIATE(double)
CFORGE_INSTANTIATE(Rational)

#undef CFORGE_INSTANTIATE

}  // namespace cforge
