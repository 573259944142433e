#include "cforge/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

void validate_action(int n, Node owner, NodeSet& action) {
  if (action.empty())
    throw Error(ErrorCode::EmptyOutSet, "node " + std::to_string(owner) + " has no out-links");
  std::sort(action.begin(), action.end());
  for (std::size_t k = 0; k < action.size(); ++k) {
    Node j = action[k];
    if (j < 0 || j >= n)
      throw Error(ErrorCode::OutOfRange,
                  "node " + std::to_string(owner) + " links to " + std::to_string(j));
    if (j == owner) throw Error(ErrorCode::SelfLoop, "node " + std::to_string(owner));
    if (k > 0 && action[k - 1] == j)
      throw Error(ErrorCode::DuplicateNeighbor,
                  "node " + std::to_string(owner) + " lists " + std::to_string(j) + " twice");
  }
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    r = r * (n - k + j) / j;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

OutDegreeProfile::OutDegreeProfile(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (degrees_[i] < 1 || degrees_[i] > n - 1)
      throw Error(ErrorCode::OutOfRange, "degree " + std::to_string(degrees_[i]) + " of node " +
                                             std::to_string(i) + " outside [1, n-1]");
  }
}

OutDegreeProfile OutDegreeProfile::homogeneous(int n, int d) {
  return OutDegreeProfile(std::vector<int>(static_cast<std::size_t>(n), d));
}

bool OutDegreeProfile::is_homogeneous() const {
  return std::adjacent_find(degrees_.begin(), degrees_.end(), std::not_equal_to<>()) ==
         degrees_.end();
}

int OutDegreeProfile::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

double OutDegreeProfile::mean_degree() const {
  if (degrees_.empty()) return 0.0;
  return static_cast<double>(std::accumulate(degrees_.begin(), degrees_.end(), 0L)) / size();
}

std::uint64_t OutDegreeProfile::action_space_size() const {
  unsigned __int128 total = 1;
  for (int d : degrees_) {
    total *= binomial(static_cast<std::uint64_t>(size() - 1), static_cast<std::uint64_t>(d));
    if (total > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(total);
}

Configuration make_configuration(int n, std::vector<NodeSet> out) {
  if (n < 2) throw Error(ErrorCode::OutOfRange, "need at least two nodes");
  if (static_cast<int>(out.size()) != n)
    throw Error(ErrorCode::DimensionMismatch,
                "n=" + std::to_string(n) + " but " + std::to_string(out.size()) + " out-lists");
  for (int i = 0; i < n; ++i) validate_action(n, i, out[static_cast<std::size_t>(i)]);
  Configuration cfg;
  cfg.out_ = std::move(out);
  return cfg;
}

OutDegreeProfile Configuration::degrees() const {
  std::vector<int> d;
  d.reserve(out_.size());
  for (const auto& o : out_) d.push_back(static_cast<int>(o.size()));
  return OutDegreeProfile(std::move(d));
}

bool Configuration::has_link(Node from, Node to) const {
  const auto& o = out(from);
  return std::binary_search(o.begin(), o.end(), to);
}

Configuration Configuration::with_action(Node i, NodeSet action) const {
  if (i < 0 || i >= size()) throw Error(ErrorCode::OutOfRange, "player " + std::to_string(i));
  validate_action(size(), i, action);
  if (action.size() != out(i).size())
    throw Error(ErrorCode::DimensionMismatch, "player " + std::to_string(i) + " must keep out-degree " +
                                                  std::to_string(out(i).size()));
  Configuration next = *this;
  next.out_[static_cast<std::size_t>(i)] = std::move(action);
  return next;
}

std::vector<NodeSet> Configuration::in_neighbors() const {
  std::vector<NodeSet> in(out_.size());
  for (int j = 0; j < size(); ++j)
    for (Node k : out(j)) in[static_cast<std::size_t>(k)].push_back(j);
  return in;  // each list is sorted because j increases
}

std::size_t Configuration::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(out_.size());
  for (const auto& o : out_) {
    mix(o.size());
    for (Node j : o) mix(static_cast<std::uint64_t>(j));
  }
  return static_cast<std::size_t>(h);
}

NodeSet in_reach(const Configuration& cfg, Node i, int hops) {
  const int n = cfg.size();
  if (i < 0 || i >= n) throw Error(ErrorCode::OutOfRange, "node " + std::to_string(i));
  if (hops < 0) throw Error(ErrorCode::InvalidArgument, "negative hop bound");
  const auto in = cfg.in_neighbors();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[i] = 1;
  NodeSet frontier{i}, result{i};
  for (int step = 0; step < hops && !frontier.empty(); ++step) {
    NodeSet next;
    for (Node v : frontier)
      for (Node u : in[v])
        if (!seen[u]) {
          seen[u] = 1;
          next.push_back(u);
          result.push_back(u);
        }
    frontier.swap(next);
  }
  std::sort(result.begin(), result.end());
  return result;
}

const char* role_name(ComponentRole role) {
  switch (role) {
    case ComponentRole::Sink: return "sink";
    case ComponentRole::Source: return "source";
    case ComponentRole::Internal: return "internal";
  }
  return "?";
}

Condensation condensation(const Configuration& cfg) {
  const int n = cfg.size();
  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<Node> stack;
  std::vector<std::pair<Node, std::size_t>> call;
  int counter = 0, ncomp = 0;
  for (Node root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto& o = cfg.out(v);
      if (next < o.size()) {
        Node w = o[next++];
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
        Node w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      Node done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  // Renumber components by smallest member.
  std::vector<int> first_member(ncomp, n);
  for (Node v = 0; v < n; ++v) first_member[comp[v]] = std::min(first_member[comp[v]], v);
  std::vector<int> order(ncomp);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return first_member[a] < first_member[b]; });
  std::vector<int> rank(ncomp);
  for (int r = 0; r < ncomp; ++r) rank[order[r]] = r;

  Condensation result;
  result.components.resize(ncomp);
  result.component_of.resize(n);
  std::vector<char> has_out(ncomp, 0), has_in(ncomp, 0);
  for (Node v = 0; v < n; ++v) {
    int c = rank[comp[v]];
    result.component_of[v] = c;
    result.components[c].nodes.push_back(v);
  }
  for (Node v = 0; v < n; ++v)
    for (Node w : cfg.out(v)) {
      int a = result.component_of[v], b = result.component_of[w];
      if (a != b) {
        has_out[a] = 1;
        has_in[b] = 1;
      }
    }
  for (int c = 0; c < ncomp; ++c) {
    auto& comp_c = result.components[c];
    comp_c.isolated = !has_out[c] && !has_in[c];
    if (!has_out[c])
      comp_c.role = ComponentRole::Sink;
    else if (!has_in[c])
      comp_c.role = ComponentRole::Source;
    else
      comp_c.role = ComponentRole::Internal;
  }
  return result;
}

int max_in_reach(const Configuration& cfg) {
  int m = 0;
  for (Node i = 0; i < cfg.size(); ++i)
    m = std::max(m, static_cast<int>(in_reach(cfg, i).size()));
  return m;
}

StructuralMetrics structural_metrics(const Configuration& cfg) {
  StructuralMetrics s;
  const int n = cfg.size();
  const Condensation cond = condensation(cfg);
  s.components = static_cast<int>(cond.components.size());
  for (const auto& c : cond.components)
    if (c.role == ComponentRole::Source) s.source_sizes.push_back(static_cast<int>(c.nodes.size()));

  for (Node a = 0; a < n; ++a)
    for (Node b : cfg.out(a))
      if (a < b && cfg.has_link(b, a)) ++s.undirected_links;

  // Each directed 3-cycle is seen once from each of its three nodes.
  long cycles = 0;
  for (Node a = 0; a < n; ++a)
    for (Node b : cfg.out(a))
      for (Node c : cfg.out(b))
        if (c != a && cfg.has_link(c, a)) ++cycles;
  s.three_cycles = static_cast<int>(cycles / 3);

  s.max_in_reach = max_in_reach(cfg);
  return s;
}

}  // namespace cforge
