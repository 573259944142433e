#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace cforge {

using Node = int;
using NodeSet = std::vector<Node>;  // always sorted, distinct

inline constexpr int kAllHops = std::numeric_limits<int>::max();

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

class OutDegreeProfile {
 public:
  OutDegreeProfile() = default;
  // Throws OutOfRange unless 1 <= d_i <= n-1 for every node.
  explicit OutDegreeProfile(std::vector<int> degrees);
  static OutDegreeProfile homogeneous(int n, int d);

  int size() const { return static_cast<int>(degrees_.size()); }
  int operator[](Node i) const { return degrees_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& degrees() const { return degrees_; }

  bool is_homogeneous() const;
  int max_degree() const;
  double mean_degree() const;
  // prod_i C(n-1, d_i), saturating at UINT64_MAX.
  std::uint64_t action_space_size() const;

  friend bool operator==(const OutDegreeProfile&, const OutDegreeProfile&) = default;

 private:
  std::vector<int> degrees_;
};

class Configuration {
 public:
  Configuration() = default;

  int size() const { return static_cast<int>(out_.size()); }
  const NodeSet& out(Node i) const { return out_[static_cast<std::size_t>(i)]; }
  const std::vector<NodeSet>& adjacency() const { return out_; }
  int degree(Node i) const { return static_cast<int>(out(i).size()); }
  OutDegreeProfile degrees() const;
  bool has_link(Node from, Node to) const;

  // Same graph with player i's out-set replaced; the action is validated.
  Configuration with_action(Node i, NodeSet action) const;

  std::vector<NodeSet> in_neighbors() const;
  std::size_t hash() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  friend Configuration make_configuration(int n, std::vector<NodeSet> out);
  std::vector<NodeSet> out_;
};

// Sorts each list and validates it. Errors: SelfLoop, DuplicateNeighbor,
// OutOfRange, EmptyOutSet, DimensionMismatch.
Configuration make_configuration(int n, std::vector<NodeSet> out);

// Nodes j with a walk of length <= hops from j to i (i included).
NodeSet in_reach(const Configuration& cfg, Node i, int hops = kAllHops);

enum class ComponentRole { Sink, Source, Internal };
const char* role_name(ComponentRole role);

struct Component {
  NodeSet nodes;
  ComponentRole role = ComponentRole::Sink;
  bool isolated = false;  // no link enters or leaves
};

struct Condensation {
  std::vector<Component> components;  // ordered by smallest member
  std::vector<int> component_of;      // node -> index into components
};

Condensation condensation(const Configuration& cfg);

struct StructuralMetrics {
  int components = 0;
  int undirected_links = 0;
  int three_cycles = 0;
  int max_in_reach = 0;  // m(x)
  std::vector<int> source_sizes;
};

StructuralMetrics structural_metrics(const Configuration& cfg);

// m(x) alone: max over nodes of |in_reach(i, all hops)|.
int max_in_reach(const Configuration& cfg);

}  // namespace cforge

template <>
struct std::hash<cforge::Configuration> {
  std::size_t operator()(const cforge::Configuration& c) const noexcept { return c.hash(); }
};
