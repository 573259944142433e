#include <doctest.h>

#include <cmath>
#include <random>

#include "cforge/centrality.hpp"
#include "cforge/equilibrium.hpp"
#include "cforge/errors.hpp"
#include "cforge/experiment.hpp"
#include "oracles.hpp"

using namespace cforge;

namespace {

Configuration random_cfg(int n, std::vector<int> degrees, std::uint64_t seed) {
  Rng rng(seed);
  return random_configuration(OutDegreeProfile(std::move(degrees)), rng);
}

std::vector<int> random_degrees(int n, std::mt19937_64& gen) {
  std::vector<int> d(n);
  for (auto& v : d) v = 1 + static_cast<int>(gen() % static_cast<unsigned>(n - 1));
  return d;
}

// tau_j = 1 + sum_k P_jk tau_k for j != i, tau_i = 0.
std::vector<Rational> hitting_oracle(const Configuration& x, const Rational& beta, const std::vector<Rational>& eta,
                                     int i) {
  const int n = x.size();
  auto p = oracle::transition(x, beta, eta);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, 0));
  std::vector<Rational> b(n, 1);
  for (int j = 0; j < n; ++j) {
    a[j][j] = 1;
    if (j == i) {
      b[j] = 0;
      continue;
    }
    for (int k = 0; k < n; ++k)
      if (k != i) a[j][k] -= p[j][k];
  }
  return oracle::solve_exact(a, b);
}

}  // namespace

TEST_SUITE("centrality") {
  TEST_CASE("fixed three-node instance") {
    auto x = make_configuration(3, {{1, 2}, {0}, {0}});
    auto spec = GameSpec<Rational>::uniform(x.degrees(), Rational(1, 2));
    auto pi = pagerank(spec, x);
    CHECK(pi[0] == Rational(4, 9));
    CHECK(pi[1] == Rational(5, 18));
    CHECK(pi[2] == Rational(5, 18));
  }

  TEST_CASE("exact pagerank agrees with the stationary-law oracle") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + static_cast<int>(gen() % 5);
      auto x = random_cfg(n, random_degrees(n, gen), gen());
      Rational beta(1 + static_cast<long>(gen() % 9), 10);
      beta.canonicalize();
      auto spec = GameSpec<Rational>::uniform(x.degrees(), beta);
      CHECK(pagerank(spec, x) == oracle::stationary_exact(x, beta, spec.eta));
    }
  }

  TEST_CASE("non-uniform eta") {
    auto x = make_configuration(4, {{1}, {2}, {0}, {0}});
    auto spec = GameSpec<Rational>::uniform(x.degrees(), Rational(2, 3));
    spec.eta = {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8)};
    spec.validate();
    CHECK(pagerank(spec, x) == oracle::stationary_exact(x, spec.beta, spec.eta));
  }

  TEST_CASE("float pagerank agrees with power iteration and the power series") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 20 + static_cast<int>(gen() % 20);
      auto x = random_cfg(n, random_degrees(n, gen), gen());
      const double beta = 0.85;
      auto spec = GameSpec<double>::uniform(x.degrees(), beta);
      auto pi = pagerank(spec, x);
      auto ref = oracle::stationary_power(x, beta, spec.eta);
      // (1 - beta) sum_k beta^k (R^T)^k eta, truncated
      std::vector<double> term = spec.eta, series(n, 0.0);
      for (int k = 0; k < 400; ++k) {
        for (int v = 0; v < n; ++v) series[v] += (1 - beta) * term[v];
        std::vector<double> next(n, 0.0);
        for (int j = 0; j < n; ++j)
          for (int t : x.out(j)) next[t] += beta * term[j] / x.degree(j);
        term.swap(next);
      }
      double sum = 0;
      for (int v = 0; v < n; ++v) {
        CHECK(pi[v] == doctest::Approx(ref[v]).epsilon(1e-10));
        CHECK(pi[v] == doctest::Approx(series[v]).epsilon(1e-10));
        sum += pi[v];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("iterative path matches the dense solve") {
    auto x = random_cfg(60, std::vector<int>(60, 3), 5);
    auto dense = GameSpec<double>::uniform(x.degrees(), 0.7);
    auto iter = dense;
    iter.solver.dense_limit = 10;
    auto a = pagerank(dense, x);
    auto b = pagerank(iter, x);
    for (int v = 0; v < 60; ++v) CHECK(b[v] == doctest::Approx(a[v]).epsilon(1e-9));
    auto ha = hitting_times(dense, x, 4, true);
    auto hb = hitting_times(iter, x, 4, true);
    for (int v = 0; v < 60; ++v)
      if (v != 4) CHECK(hb.values[v] == doctest::Approx(ha.values[v]).epsilon(1e-8));
  }

  TEST_CASE("relabeling permutes pagerank") {
    auto x = make_configuration(5, {{1, 2}, {2}, {0, 3}, {4}, {0}});
    const std::vector<int> perm{3, 0, 4, 1, 2};
    std::vector<NodeSet> out(5);
    for (int v = 0; v < 5; ++v)
      for (int w : x.out(v)) out[perm[v]].push_back(perm[w]);
    auto y = make_configuration(5, out);
    auto px = pagerank(GameSpec<Rational>::uniform(x.degrees(), Rational(3, 5)), x);
    auto py = pagerank(GameSpec<Rational>::uniform(y.degrees(), Rational(3, 5)), y);
    for (int v = 0; v < 5; ++v) CHECK(py[perm[v]] == px[v]);
  }

  TEST_CASE("vertex-transitive graphs have uniform centrality") {
    auto ring = make_configuration(6, {{1, 5}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {0, 4}});
    for (const auto& p : pagerank(GameSpec<Rational>::uniform(ring.degrees(), Rational(9, 10)), ring))
      CHECK(p == Rational(1, 6));
  }

  TEST_CASE("hitting times agree with the first-passage oracle") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 3 + static_cast<int>(gen() % 4);
      auto x = random_cfg(n, random_degrees(n, gen), gen());
      auto spec = GameSpec<Rational>::uniform(x.degrees(), Rational(1, 2));
      const int i = static_cast<int>(gen() % static_cast<unsigned>(n));
      auto full = hitting_times(spec, x, i, false);
      auto ref = hitting_oracle(x, spec.beta, spec.eta, i);
      for (int j = 0; j < n; ++j)
        if (j != i) CHECK(full.values[j] == ref[j]);

      std::vector<Rational> delta(n, 0);
      delta[i] = 1;
      auto norm = hitting_times(spec, x, i, true);
      auto ref_norm = hitting_oracle(x, spec.beta, delta, i);
      for (int j = 0; j < n; ++j)
        if (j != i) CHECK(norm.values[j] == ref_norm[j]);
    }
  }

  TEST_CASE("nodes that cannot reach the target sit on the 1/(1-beta) plateau") {
    // 2 -> 0 <-> 1 and 3 -> 2; nothing reaches 3
    auto x = make_configuration(4, {{1}, {0}, {0}, {2}});
    auto spec = GameSpec<Rational>::uniform(x.degrees(), Rational(3, 4));
    auto t = hitting_times(spec, x, 3, true);
    for (int j : {0, 1, 2}) CHECK(t.values[j] == Rational(4));
    auto u = hitting_times(spec, x, 2, true);
    CHECK(u.values[0] == Rational(4));
    CHECK(u.values[3] == Rational(1));
  }

  TEST_CASE("Kac formula equals pagerank, also for foreign actions") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 3 + static_cast<int>(gen() % 4);
      auto x = random_cfg(n, random_degrees(n, gen), gen());
      auto spec = GameSpec<Rational>::uniform(x.degrees(), Rational(2, 5));
      const int i = static_cast<int>(gen() % static_cast<unsigned>(n));
      CHECK(kac_utility(spec, x, i) == pagerank(spec, x)[i]);
      auto table = hitting_times(spec, x, i, false);
      for (const auto& a : action_set(n, i, x.degree(i)))
        CHECK(kac_utility_for_action(spec, table, a) == pagerank(spec, x.with_action(i, a))[i]);
    }
  }

  TEST_CASE("spec validation") {
    auto d = OutDegreeProfile({1, 1, 1});
    CHECK_THROWS_AS(GameSpec<double>::uniform(d, 1.0).validate(), Error);
    CHECK_THROWS_AS(GameSpec<double>::uniform(d, 0.0).validate(), Error);
    auto s = GameSpec<double>::uniform(d, 0.5);
    s.eta = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(s.validate(), Error);
    auto q = GameSpec<Rational>::uniform(d, Rational(1, 2));
    q.beta = Rational(4, 8);  // not reduced
    CHECK_THROWS_AS(q.validate(), Error);
    CHECK(GameSpec<Rational>::uniform(d, Rational(4, 8)).beta.get_str() == "1/2");
    auto x = make_configuration(4, {{1}, {0}, {0}, {0}});
    CHECK_THROWS_AS(pagerank(GameSpec<double>::uniform(d, 0.5), x), Error);
  }
}
