#pragma once

// Nash / strict / recursive certification, best-response graph exploration,
// exhaustive enumeration of small games and structural family labels.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cforge/errors.hpp"
#include "cforge/game.hpp"
#include "cforge/graph.hpp"

namespace cforge {

enum class RecursiveVerdict { NotChecked, Yes, No, Inconclusive };
const char* verdict_name(RecursiveVerdict v);

struct Witness {
  int player = 0;
  std::vector<int> action;  // an improving action (action index for table games)
};

template <class Profile>
struct BasicEquilibriumReport {
  bool is_nash = false;
  bool is_strict = false;
  RecursiveVerdict recursive = RecursiveVerdict::NotChecked;
  std::optional<Witness> witness;
  std::size_t reachable_count = 0;  // configurations explored; 0 if not explored
  std::optional<Profile> non_nash_reached;
};

using EquilibriumReport = BasicEquilibriumReport<Configuration>;

// What the explorer needs to know about one profile.
template <class Profile>
struct Expansion {
  bool is_nash = true;
  bool is_strict = true;
  std::optional<Witness> witness;
  std::vector<Profile> successors;  // unilateral best-response moves, excluding staying put
};

struct ProfileHash {
  std::size_t operator()(const Configuration& c) const noexcept { return c.hash(); }
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

template <class G>
concept BestResponseGame = requires(const G& g, const typename G::Profile& p) {
  { g.expand(p) } -> std::same_as<Expansion<typename G::Profile>>;
};

inline constexpr std::size_t kDefaultRecursiveBudget = 200000;
inline constexpr std::uint64_t kDefaultSuccessorCap = 100000;

// Explores the best-response graph forward from x. x is recursive iff every
// explored profile can return to x. The first non-Nash profile met on the way
// is kept as evidence.
template <BestResponseGame G>
BasicEquilibriumReport<typename G::Profile> explore_recursive(const G& game,
                                                              const typename G::Profile& x,
                                                              std::size_t budget) {
  using Profile = typename G::Profile;
  BasicEquilibriumReport<Profile> report;
  std::unordered_map<Profile, std::size_t, ProfileHash> index;
  std::vector<Profile> profiles;
  std::vector<std::vector<std::size_t>> reverse_edges;
  index.emplace(x, 0);
  profiles.push_back(x);
  reverse_edges.emplace_back();

  for (std::size_t id = 0; id < profiles.size(); ++id) {
    Expansion<Profile> exp;
    try {
      exp = game.expand(profiles[id]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      if (id == 0) return report;  // not even the root could be expanded
      report.recursive = RecursiveVerdict::Inconclusive;
      report.reachable_count = profiles.size();
      return report;
    }
    if (id == 0) {
      report.is_nash = exp.is_nash;
      report.is_strict = exp.is_nash && exp.is_strict;
      report.witness = exp.witness;
    }
    if (!exp.is_nash && !report.non_nash_reached) report.non_nash_reached = profiles[id];
    for (Profile& y : exp.successors) {
      auto [it, inserted] = index.emplace(y, profiles.size());
      if (inserted) {
        if (profiles.size() >= budget) {
          report.recursive = RecursiveVerdict::Inconclusive;
          report.reachable_count = profiles.size();
          return report;
        }
        profiles.push_back(std::move(y));
        reverse_edges.emplace_back();
      }
      reverse_edges[it->second].push_back(id);
    }
  }

  // Closed iff everything explored can get back to x.
  std::vector<char> back(profiles.size(), 0);
  std::vector<std::size_t> stack{0};
  back[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u : reverse_edges[v])
      if (!back[u]) {
        back[u] = 1;
        ++reached;
        stack.push_back(u);
      }
  }
  report.reachable_count = profiles.size();
  report.recursive = reached == profiles.size() ? RecursiveVerdict::Yes : RecursiveVerdict::No;
  return report;
}

// ---------------------------------------------------------------------------
// Centrality game adapter.

template <Scalar T>
class CentralityGame {
 public:
  using Profile = Configuration;

  explicit CentralityGame(const GameSpec<T>& spec, std::uint64_t successor_cap = kDefaultSuccessorCap,
                          BestResponseOptions br = {})
      : spec_(spec), successor_cap_(successor_cap), br_(br) {}

  const GameSpec<T>& spec() const { return spec_; }
  Expansion<Configuration> expand(const Configuration& cfg) const;

 private:
  const GameSpec<T>& spec_;
  std::uint64_t successor_cap_;
  BestResponseOptions br_;
};

template <Scalar T>
EquilibriumReport is_nash(const GameSpec<T>& spec, const Configuration& cfg);

// Sorted, distinct. Throws BudgetExceeded past `cap` successors.
template <Scalar T>
std::vector<Configuration> br_successors(const GameSpec<T>& spec, const Configuration& cfg,
                                         std::uint64_t cap = kDefaultSuccessorCap);

template <Scalar T>
EquilibriumReport is_recursive(const GameSpec<T>& spec, const Configuration& cfg,
                               std::size_t budget = kDefaultRecursiveBudget);

// ---------------------------------------------------------------------------
// Finite normal-form games given by a best-response oracle.

class FiniteGameView {
 public:
  using Profile = std::vector<int>;
  using BestResponseOracle = std::function<std::vector<int>(int player, const Profile& profile)>;
  using UtilityFn = std::function<double(int player, const Profile& profile)>;

  FiniteGameView(std::vector<int> action_counts, BestResponseOracle oracle);
  // Best responses are the exact argmax of the utility.
  static FiniteGameView from_utilities(std::vector<int> action_counts, UtilityFn utility);

  int players() const { return static_cast<int>(action_counts_.size()); }
  int action_count(int player) const { return action_counts_[static_cast<std::size_t>(player)]; }
  std::vector<int> best_responses(int player, const Profile& profile) const;
  Expansion<Profile> expand(const Profile& profile) const;

 private:
  std::vector<int> action_counts_;
  BestResponseOracle oracle_;
};

BasicEquilibriumReport<FiniteGameView::Profile> is_nash(const FiniteGameView& game,
                                                        const FiniteGameView::Profile& profile);
BasicEquilibriumReport<FiniteGameView::Profile> is_recursive(const FiniteGameView& game,
                                                             const FiniteGameView::Profile& profile,
                                                             std::size_t budget = kDefaultRecursiveBudget);

// ---------------------------------------------------------------------------
// Structural family labels.

enum class FamilyKind { K2_0, K2_r, RingsUnion, K32, K3B, CliqueUnion, None };

struct FamilyLabel {
  FamilyKind kind = FamilyKind::None;
  int parameter = 0;  // r for K2_r, clique order for CliqueUnion
  std::string to_string() const;
  friend bool operator==(const FamilyLabel&, const FamilyLabel&) = default;
};

FamilyLabel classify_family(const Configuration& cfg);

// Butterfly pattern 0->{1,3}, 1->{0,2}, 2->{0,1}, 3->{0,4}, 4->{0,3}.
Configuration butterfly();
// True if the induced subgraph on `nodes` (size 5) is a relabeled butterfly.
bool is_butterfly(const Configuration& cfg, const NodeSet& nodes);

// ---------------------------------------------------------------------------
// Exhaustive enumeration.

inline constexpr std::uint64_t kMaxEnumeratedConfigurations = 100000;

struct CatalogEntry {
  Configuration cfg;
  EquilibriumReport report;  // reachable_count = size of its closed class when recursive
  FamilyLabel family;
};

struct CatalogSummary {
  std::size_t total = 0, nash = 0, strict = 0, recursive = 0;
};

struct Catalog {
  std::vector<CatalogEntry> entries;  // canonical (lexicographic) order
  CatalogSummary summary;
};

struct EnumerationOptions {
  int workers = 1;
  std::uint64_t successor_cap = kDefaultSuccessorCap;
};

// Every configuration of the spec's action space. Recursive verdicts come from
// the closed strongly connected classes of the full best-response graph.
// Throws SpaceTooLarge beyond 10^5 configurations.
template <Scalar T>
Catalog enumerate_equilibria(const GameSpec<T>& spec, const EnumerationOptions& opts = {});

// All d-subsets of V\{i} in lexicographic order.
std::vector<NodeSet> action_set(int n, Node i, int d);

// Visits every configuration of a degree profile in canonical order.
void for_each_configuration(const OutDegreeProfile& degrees,
                            const std::function<void(const Configuration&)>& visit);

// ---------------------------------------------------------------------------
// Necessary structural conditions for certified equilibria.

struct ConditionCheck {
  std::string name;
  bool applicable = false;
  bool passed = true;
  std::string detail;
};

template <Scalar T>
std::vector<ConditionCheck> audit_conditions(const GameSpec<T>& spec, const Configuration& cfg,
                                             const EquilibriumReport& report);

inline bool audit_passed(const std::vector<ConditionCheck>& checks) {
  for (const auto& c : checks)
    if (c.applicable && !c.passed) return false;
  return true;
}

}  // namespace cforge

