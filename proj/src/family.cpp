#include <algorithm>
#include <array>
#include <numeric>

#include "cforge/equilibrium.hpp"

namespace cforge {

namespace {

bool all_degrees(const Configuration& cfg, int d) {
  for (Node i = 0; i < cfg.size(); ++i)
    if (cfg.degree(i) != d) return false;
  return true;
}

// Every member links to every other member (and, by degree, nowhere else).
bool is_isolated_clique(const Configuration& cfg, const NodeSet& nodes) {
  for (Node a : nodes) {
    if (cfg.degree(a) != static_cast<int>(nodes.size()) - 1) return false;
    for (Node b : nodes)
      if (a != b && !cfg.has_link(a, b)) return false;
  }
  return true;
}

FamilyLabel classify_degree_one(const Configuration& cfg) {
  const int n = cfg.size();
  std::vector<char> paired(static_cast<std::size_t>(n), 0);
  for (Node i = 0; i < n; ++i)
    if (cfg.has_link(cfg.out(i)[0], i)) paired[i] = 1;
  const auto in = cfg.in_neighbors();
  int sources = 0;
  for (Node i = 0; i < n; ++i) {
    if (paired[i]) continue;
    // A lone node that nobody links to, pointing into a 2-clique.
    if (!in[i].empty() || !paired[cfg.out(i)[0]]) return {};
    ++sources;
  }
  if (sources == 0) return {FamilyKind::K2_0, 0};
  return {FamilyKind::K2_r, sources};
}

bool all_links_reciprocated(const Configuration& cfg) {
  for (Node i = 0; i < cfg.size(); ++i)
    for (Node j : cfg.out(i))
      if (!cfg.has_link(j, i)) return false;
  return true;
}

FamilyLabel classify_degree_two(const Configuration& cfg) {
  // Undirected and 2-regular: a disjoint union of rings.
  if (all_links_reciprocated(cfg)) return {FamilyKind::RingsUnion, 0};

  const Condensation cond = condensation(cfg);
  const Component* odd = nullptr;
  for (const auto& c : cond.components) {
    if (c.nodes.size() == 3 && c.role == ComponentRole::Sink && is_isolated_clique(cfg, c.nodes))
      continue;
    if (odd) return {};
    odd = &c;
  }
  if (!odd) return {};
  if (odd->nodes.size() == 2 && odd->role == ComponentRole::Source) {
    Node r = odd->nodes[0], s = odd->nodes[1];
    if (cfg.has_link(r, s) && cfg.has_link(s, r)) return {FamilyKind::K32, 0};
    return {};
  }
  if (odd->nodes.size() == 5 && odd->role == ComponentRole::Sink && is_butterfly(cfg, odd->nodes))
    return {FamilyKind::K3B, 0};
  return {};
}

}  // namespace

std::string FamilyLabel::to_string() const {
  switch (kind) {
    case FamilyKind::K2_0: return "K2_0";
    case FamilyKind::K2_r: return "K2_r(" + std::to_string(parameter) + ")";
    case FamilyKind::RingsUnion: return "RingsUnion";
    case FamilyKind::K32: return "K32";
    case FamilyKind::K3B: return "K3B";
    case FamilyKind::CliqueUnion: return "CliqueUnion(" + std::to_string(parameter) + ")";
    case FamilyKind::None: return "None";
  }
  return "None";
}

Configuration butterfly() {
  return make_configuration(5, {{1, 3}, {0, 2}, {0, 1}, {0, 4}, {0, 3}});
}

bool is_butterfly(const Configuration& cfg, const NodeSet& nodes) {
  if (nodes.size() != 5) return false;
  static const Configuration pattern = butterfly();
  for (Node v : nodes) {
    if (cfg.degree(v) != 2) return false;
    for (Node w : cfg.out(v))
      if (!std::binary_search(nodes.begin(), nodes.end(), w)) return false;
  }
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  do {
    bool match = true;
    for (int a = 0; a < 5 && match; ++a)
      for (int b = 0; b < 5 && match; ++b)
        if (a != b && pattern.has_link(a, b) != cfg.has_link(nodes[perm[a]], nodes[perm[b]]))
          match = false;
    if (match) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

FamilyLabel classify_family(const Configuration& cfg) {
  if (all_degrees(cfg, 1)) return classify_degree_one(cfg);
  if (all_degrees(cfg, 2)) {
    FamilyLabel label = classify_degree_two(cfg);
    if (label.kind != FamilyKind::None) return label;
  }
  const int d = cfg.degree(0);
  if (!all_degrees(cfg, d)) return {};
  const Condensation cond = condensation(cfg);
  for (const auto& c : cond.components)
    if (static_cast<int>(c.nodes.size()) != d + 1 || !is_isolated_clique(cfg, c.nodes)) return {};
  return {FamilyKind::CliqueUnion, d + 1};
}

}  // namespace cforge
