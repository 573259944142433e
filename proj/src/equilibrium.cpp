#include "cforge/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace cforge {

const char* verdict_name(RecursiveVerdict v) {
  switch (v) {
    case RecursiveVerdict::NotChecked: return "not_checked";
    case RecursiveVerdict::Yes: return "yes";
    case RecursiveVerdict::No: return "no";
    case RecursiveVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

template <Scalar T>
Expansion<Configuration> CentralityGame<T>::expand(const Configuration& cfg) const {
  Expansion<Configuration> e;
  std::uint64_t total = 0;
  for (Node i = 0; i < cfg.size(); ++i) {
    const BestResponseSet<T> br = best_response_set(spec_, cfg, i, br_);
    const bool plays_best = br.contains(cfg.out(i));
    if (!plays_best && e.is_nash) {
      e.is_nash = false;
      e.witness = Witness{i, br.first_member()};
    }
    if (!(plays_best && br.is_singleton())) e.is_strict = false;
    const std::uint64_t moves = br.count() - (plays_best ? 1 : 0);
    if (moves > successor_cap_ || total + moves > successor_cap_)
      throw Error(ErrorCode::BudgetExceeded,
                  "more than " + std::to_string(successor_cap_) + " best-response successors");
    total += moves;
    for (NodeSet& action : br.members(successor_cap_))
      if (action != cfg.out(i)) e.successors.push_back(cfg.with_action(i, std::move(action)));
  }
  if (!e.is_nash) e.is_strict = false;
  return e;
}

template <Scalar T>
EquilibriumReport is_nash(const GameSpec<T>& spec, const Configuration& cfg) {
  EquilibriumReport report;
  report.is_nash = true;
  report.is_strict = true;
  for (Node i = 0; i < cfg.size(); ++i) {
    const BestResponseSet<T> br = best_response_set(spec, cfg, i);
    const bool plays_best = br.contains(cfg.out(i));
    if (!plays_best) {
      report.is_nash = report.is_strict = false;
      report.witness = Witness{i, br.first_member()};
      return report;
    }
    if (!br.is_singleton()) report.is_strict = false;
  }
  return report;
}

template <Scalar T>
std::vector<Configuration> br_successors(const GameSpec<T>& spec, const Configuration& cfg,
                                         std::uint64_t cap) {
  auto succ = CentralityGame<T>(spec, cap).expand(cfg).successors;
  std::sort(succ.begin(), succ.end());
  succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  return succ;
}

template <Scalar T>
EquilibriumReport is_recursive(const GameSpec<T>& spec, const Configuration& cfg, std::size_t budget) {
  check_compatible(spec, cfg);
  return explore_recursive(CentralityGame<T>(spec), cfg, budget);
}

// ---------------------------------------------------------------------------

FiniteGameView::FiniteGameView(std::vector<int> action_counts, BestResponseOracle oracle)
    : action_counts_(std::move(action_counts)), oracle_(std::move(oracle)) {
  if (action_counts_.empty()) throw Error(ErrorCode::InvalidArgument, "game needs players");
  for (int c : action_counts_)
    if (c < 1) throw Error(ErrorCode::InvalidArgument, "every player needs an action");
}

FiniteGameView FiniteGameView::from_utilities(std::vector<int> action_counts, UtilityFn utility) {
  auto counts = action_counts;
  return FiniteGameView(std::move(action_counts), [counts, utility](int player, const Profile& p) {
    Profile q = p;
    std::vector<int> best;
    double top = 0.0;
    for (int a = 0; a < counts[static_cast<std::size_t>(player)]; ++a) {
      q[static_cast<std::size_t>(player)] = a;
      double u = utility(player, q);
      if (best.empty() || u > top) {
        best.assign(1, a);
        top = u;
      } else if (u == top) {
        best.push_back(a);
      }
    }
    return best;
  });
}

std::vector<int> FiniteGameView::best_responses(int player, const Profile& profile) const {
  std::vector<int> br = oracle_(player, profile);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  if (br.empty()) throw Error(ErrorCode::InvalidArgument, "best-response oracle returned nothing");
  for (int a : br)
    if (a < 0 || a >= action_count(player))
      throw Error(ErrorCode::OutOfRange, "best-response oracle returned an unknown action");
  return br;
}

Expansion<FiniteGameView::Profile> FiniteGameView::expand(const Profile& profile) const {
  if (static_cast<int>(profile.size()) != players())
    throw Error(ErrorCode::DimensionMismatch, "profile length");
  Expansion<Profile> e;
  for (int p = 0; p < players(); ++p) {
    const int current = profile[static_cast<std::size_t>(p)];
    const auto br = best_responses(p, profile);
    const bool plays_best = std::binary_search(br.begin(), br.end(), current);
    if (!plays_best && e.is_nash) {
      e.is_nash = false;
      e.witness = Witness{p, {br.front()}};
    }
    if (!(plays_best && br.size() == 1)) e.is_strict = false;
    for (int a : br)
      if (a != current) {
        Profile q = profile;
        q[static_cast<std::size_t>(p)] = a;
        e.successors.push_back(std::move(q));
      }
  }
  if (!e.is_nash) e.is_strict = false;
  return e;
}

BasicEquilibriumReport<FiniteGameView::Profile> is_nash(const FiniteGameView& game,
                                                        const FiniteGameView::Profile& profile) {
  auto e = game.expand(profile);
  BasicEquilibriumReport<FiniteGameView::Profile> report;
  report.is_nash = e.is_nash;
  report.is_strict = e.is_strict;
  report.witness = e.witness;
  return report;
}

BasicEquilibriumReport<FiniteGameView::Profile> is_recursive(const FiniteGameView& game,
                                                             const FiniteGameView::Profile& profile,
                                                             std::size_t budget) {
  return explore_recursive(game, profile, budget);
}

// ---------------------------------------------------------------------------

std::vector<NodeSet> action_set(int n, Node i, int d) {
  NodeSet pool;
  for (Node j = 0; j < n; ++j)
    if (j != i) pool.push_back(j);
  std::vector<NodeSet> out;
  const int m = static_cast<int>(pool.size());
  if (d < 0 || d > m) return out;
  std::vector<int> pick(static_cast<std::size_t>(d));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    NodeSet a;
    for (int p : pick) a.push_back(pool[p]);
    out.push_back(std::move(a));
    int k = d - 1;
    while (k >= 0 && pick[k] == m - d + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

namespace {

struct ConfigurationSpace {
  int n = 0;
  std::vector<std::vector<NodeSet>> actions;
  std::vector<std::map<NodeSet, int>> rank;
  std::vector<std::uint64_t> stride;  // player n-1 varies fastest
  std::uint64_t size = 1;

  explicit ConfigurationSpace(const OutDegreeProfile& degrees) : n(degrees.size()) {
    actions.resize(static_cast<std::size_t>(n));
    rank.resize(static_cast<std::size_t>(n));
    stride.assign(static_cast<std::size_t>(n), 1);
    for (Node i = 0; i < n; ++i) {
      actions[i] = action_set(n, i, degrees[i]);
      for (std::size_t k = 0; k < actions[i].size(); ++k) rank[i][actions[i][k]] = static_cast<int>(k);
    }
    for (Node i = n - 1; i >= 0; --i) {
      stride[i] = size;
      size *= actions[i].size();
    }
  }

  Configuration decode(std::uint64_t index) const {
    std::vector<NodeSet> out(static_cast<std::size_t>(n));
    for (Node i = 0; i < n; ++i) out[i] = actions[i][(index / stride[i]) % actions[i].size()];
    return make_configuration(n, std::move(out));
  }
};

void require_enumerable(const OutDegreeProfile& degrees, std::uint64_t limit) {
  std::uint64_t size = degrees.action_space_size();
  if (size > limit)
    throw Error(ErrorCode::SpaceTooLarge, "configuration space has " +
                                              (size == UINT64_MAX ? std::string("too many")
                                                                  : std::to_string(size)) +
                                              " elements, limit " + std::to_string(limit));
}

// Closed SCCs of a graph given by adjacency lists (iterative Tarjan).
std::vector<std::size_t> closed_class_sizes(const std::vector<std::vector<std::uint32_t>>& adj,
                                            std::vector<int>& comp) {
  const std::size_t n = adj.size();
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  comp.assign(n, -1);
  long counter = 0;
  int ncomp = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto [v, next] = call.back();
      if (next < adj[v].size()) {
        ++call.back().second;
        std::uint32_t w = adj[v][next];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[v]);
    }
  }
  std::vector<std::size_t> size(static_cast<std::size_t>(ncomp), 0);
  std::vector<char> closed(static_cast<std::size_t>(ncomp), 1);
  for (std::size_t v = 0; v < n; ++v) {
    ++size[comp[v]];
    for (auto w : adj[v])
      if (comp[w] != comp[v]) closed[comp[v]] = 0;
  }
  for (int c = 0; c < ncomp; ++c)
    if (!closed[c]) size[c] = 0;
  return size;  // 0 for classes that can be left
}

}  // namespace

void for_each_configuration(const OutDegreeProfile& degrees,
                            const std::function<void(const Configuration&)>& visit) {
  require_enumerable(degrees, 100 * kMaxEnumeratedConfigurations);
  ConfigurationSpace space(degrees);
  for (std::uint64_t k = 0; k < space.size; ++k) visit(space.decode(k));
}

template <Scalar T>
Catalog enumerate_equilibria(const GameSpec<T>& spec, const EnumerationOptions& opts) {
  spec.validate();
  require_enumerable(spec.degrees, kMaxEnumeratedConfigurations);
  const ConfigurationSpace space(spec.degrees);
  const std::size_t total = static_cast<std::size_t>(space.size);

  Catalog catalog;
  catalog.entries.resize(total);
  std::vector<std::vector<std::uint32_t>> adj(total);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      CatalogEntry& entry = catalog.entries[k];
      entry.cfg = space.decode(k);
      entry.report.is_nash = entry.report.is_strict = true;
      for (Node i = 0; i < space.n; ++i) {
        const BestResponseSet<T> br = best_response_set(spec, entry.cfg, i);
        const NodeSet& current = entry.cfg.out(i);
        const bool plays_best = br.contains(current);
        if (!plays_best && entry.report.is_nash) {
          entry.report.is_nash = false;
          entry.report.witness = Witness{i, br.first_member()};
        }
        if (!(plays_best && br.is_singleton())) entry.report.is_strict = false;
        const long from = space.rank[i].at(current);
        for (const NodeSet& action : br.members(opts.successor_cap)) {
          long to = space.rank[i].at(action);
          if (to == from) continue;
          adj[k].push_back(static_cast<std::uint32_t>(
              static_cast<long>(k) + (to - from) * static_cast<long>(space.stride[i])));
        }
      }
      if (!entry.report.is_nash) entry.report.is_strict = false;
      entry.family = classify_family(entry.cfg);
    }
  };

  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(total)));
  if (workers == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const std::size_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(std::min(total, w * chunk), std::min(total, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<int> comp;
  const auto closed_size = closed_class_sizes(adj, comp);
  for (std::size_t k = 0; k < total; ++k) {
    auto& r = catalog.entries[k].report;
    std::size_t c = closed_size[comp[k]];
    r.recursive = c > 0 ? RecursiveVerdict::Yes : RecursiveVerdict::No;
    r.reachable_count = c;
    ++catalog.summary.total;
    catalog.summary.nash += r.is_nash;
    catalog.summary.strict += r.is_strict;
    catalog.summary.recursive += c > 0;
  }
  return catalog;
}

// ---------------------------------------------------------------------------

template <Scalar T>
std::vector<ConditionCheck> audit_conditions(const GameSpec<T>& spec, const Configuration& cfg,
                                             const EquilibriumReport& report) {
  check_compatible(spec, cfg);
  const int n = cfg.size();
  const Condensation cond = condensation(cfg);
  const StructuralMetrics metrics = structural_metrics(cfg);
  const bool recursive = report.recursive == RecursiveVerdict::Yes;
  const bool homogeneous = spec.degrees.is_homogeneous();
  const int d_min = *std::min_element(spec.degrees.degrees().begin(), spec.degrees.degrees().end());
  std::vector<ConditionCheck> checks;
  auto add = [&](std::string name, bool applicable, bool passed, std::string detail) {
    checks.push_back({std::move(name), applicable, applicable ? passed : true, std::move(detail)});
  };

  int internal = 0, sources = 0;
  for (const auto& c : cond.components) {
    internal += c.role == ComponentRole::Internal;
    sources += c.role == ComponentRole::Source;
  }
  add("nash_components_sink_or_source", report.is_nash, internal == 0,
      std::to_string(internal) + " internal components");

  bool small_cliques = true;
  std::string clique_detail = "ok";
  if (homogeneous) {
    const int d = spec.degrees[0];
    for (const auto& c : cond.components) {
      if (c.role != ComponentRole::Source) continue;
      const int k = static_cast<int>(c.nodes.size());
      bool clique = true;
      for (Node a : c.nodes)
        for (Node b : c.nodes)
          if (a != b && !cfg.has_link(a, b)) clique = false;
      if (k > d || !clique) {
        small_cliques = false;
        clique_detail = "source of order " + std::to_string(k) + (clique ? "" : " is not a clique");
      }
    }
  }
  add("homogeneous_sources_are_small_cliques", report.is_nash && homogeneous, small_cliques, clique_detail);

  add("recursive_at_most_one_source", recursive, sources <= 1, std::to_string(sources) + " sources");

  add("strict_components_isolated", report.is_strict && spec.degrees.max_degree() < n - 1,
      sources == 0, std::to_string(sources) + " sources");

  const bool strongly_connected = metrics.components == 1;
  add("strongly_connected_undirected_links", report.is_nash && strongly_connected,
      2 * metrics.undirected_links >= n,
      "2*c2=" + std::to_string(2 * metrics.undirected_links) + " n=" + std::to_string(n));
  add("strongly_connected_three_cycles", report.is_nash && strongly_connected,
      d_min * metrics.three_cycles + 2 * metrics.undirected_links >= n * d_min,
      "d*c3+2c2=" + std::to_string(d_min * metrics.three_cycles + 2 * metrics.undirected_links) +
          " n*d=" + std::to_string(n * d_min));

  if (homogeneous) {
    const int d = spec.degrees[0];
    const double bound = 1.0 + static_cast<double>(n - 1) / (d + 1);
    std::ostringstream os;
    os << "c=" << metrics.components << " bound=" << bound;
    add("recursive_component_count", recursive, metrics.components <= bound + 1e-12, os.str());
  }

  const int need = 1 + static_cast<int>(std::ceil(spec.degrees.mean_degree() - 1e-12));
  add("pigeonhole_max_in_reach", true, metrics.max_in_reach >= need,
      "m=" + std::to_string(metrics.max_in_reach) + " need " + std::to_string(need));
  return checks;
}

#define CFORGE_INSTANTIATE(T)                                                                        \
  template class CentralityGame<T>;                                                                  \
  template EquilibriumReport is_nash(const GameSpec<T>&, const Configuration&);                      \
  template std::vector<Configuration> br_successors(const GameSpec<T>&, const Configuration&,        \
                                                    std::uint64_t);                                  \
  template EquilibriumReport is_recursive(const GameSpec<T>&, const Configuration&, std::size_t);    \
  template Catalog enumerate_equilibria(const GameSpec<T>&, const EnumerationOptions&);              \
  template std::vector<ConditionCheck> audit_conditions(const GameSpec<T>&, const Configuration&,    \
                                                        const EquilibriumReport&);

CFORGE_INSTANTIATE(double)
CFORGE_INSTANTIATE(Rational)

#undef CFORGE_INSTANTIATE

}  // namespace cforge
