#pragma once

// Ideal edges: subsets of E_v (directed edges ending at v) that can be pulled
// away from v along a new edge. Orbits are represented by their
// lexicographically least translate.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "auter/edgeset.hpp"
#include "auter/error.hpp"
#include "auter/ggraph.hpp"
#include "auter/marking.hpp"

namespace auter {

struct IdealEdge {
  int vertex = -1;
  EdgeSet edges;
  Subgroup stab;

  friend bool operator==(const IdealEdge& a, const IdealEdge& b) {
    return a.vertex == b.vertex && a.edges == b.edges;
  }
  friend bool operator<(const IdealEdge& a, const IdealEdge& b) {
    return a.vertex != b.vertex ? a.vertex < b.vertex : a.edges < b.edges;
  }
};

struct IdealPair {
  IdealEdge edge;
  int collapse_target = -1;
};

struct Crossing {
  int count = 0;
  std::vector<int> reps;
  std::vector<EdgeSet> components;
  std::vector<EdgeSet> dual_components;
};

namespace detail {

inline int common_terminal(const GGraph& g, const EdgeSet& s) {
  if (s.empty()) return -1;
  int v = g.terminal(s.front());
  for (int d : s) {
    if (g.terminal(d) != v) return -1;
  }
  return v;
}

/// Distinct translates of s lying at the same vertex as s.
inline std::vector<EdgeSet> local_translates(const GGraph& g, int v, const EdgeSet& s) {
  std::vector<EdgeSet> out;
  for (int x : g.vertex_stabilizer(v)) {
    auto t = g.act_set(x, s);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Lexicographically least member of the orbit of s.
inline EdgeSet canonical_translate(const GGraph& g, const EdgeSet& s) {
  auto orbit = g.set_orbit(s);
  return *std::min_element(orbit.begin(), orbit.end());
}

/// Why s fails to be an ideal edge, or nullopt if it is one.
inline std::optional<std::string> ideal_edge_problem(const GGraph& g, const EdgeSet& s) {
  const int v = detail::common_terminal(g, s);
  if (v < 0) return "edges do not end at a common vertex";
  const bool at_base = (v == g.basepoint());
  const auto ev = g.edges_at(v);
  if (!is_subset(s, ev)) return "not a subset of E_v";
  const int rest = static_cast<int>(ev.size() - s.size());
  if (s.size() < 2) return "cardinality below 2";
  if (rest < (at_base ? 1 : 2)) return "complement too small";
  for (const auto& t : detail::local_translates(g, v, s)) {
    if (t != s && intersects(t, s)) return "translate neither equal nor disjoint";
  }
  return std::nullopt;
}

inline bool is_ideal_edge(const GGraph& g, const EdgeSet& s) { return !ideal_edge_problem(g, s).has_value(); }

inline std::optional<IdealEdge> make_ideal_edge(const GGraph& g, const EdgeSet& s) {
  if (!is_ideal_edge(g, s)) return std::nullopt;
  return IdealEdge{g.terminal(s.front()), s, g.set_stabilizer(s)};
}

inline IdealEdge require_ideal_edge(const GGraph& g, const EdgeSet& s) {
  if (auto p = ideal_edge_problem(g, s)) throw ValidationError("not an ideal edge " + g.set_name(s) + ": " + *p);
  return IdealEdge{g.terminal(s.front()), s, g.set_stabilizer(s)};
}

/// Canonical representative of the orbit of an ideal edge.
inline IdealEdge canonical(const GGraph& g, const IdealEdge& a) {
  auto c = canonical_translate(g, a.edges);
  if (c == a.edges) return a;
  return IdealEdge{g.terminal(c.front()), c, g.set_stabilizer(c)};
}

/// One representative per ideal edge orbit, ordered by (vertex, edges).
inline std::vector<IdealEdge> enumerate_ideal_edges(const GGraph& g) {
  std::vector<IdealEdge> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto ev = g.edges_at(v);
    if (ev.size() > 20) throw ValidationError("vertex valence too large for ideal edge enumeration");
    const std::size_t n = ev.size();
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
      if (__builtin_popcountl(mask) < 2) continue;
      EdgeSet s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1ul << i)) s.push_back(ev[i]);
      }
      if (!is_ideal_edge(g, s)) continue;
      if (canonical_translate(g, s) != s) continue;
      out.push_back(IdealEdge{v, s, g.set_stabilizer(s)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<IdealEdge> enumerate_ideal_edges(const MarkedGGraph& m) { return enumerate_ideal_edges(m.graph()); }

/// D(a) = { e in a : stab(e) = stab(a), ~e not in the union of G a }.
inline EdgeSet d_set(const GGraph& g, const IdealEdge& a) {
  const auto all = g.orbit_union(a.edges);
  EdgeSet out;
  for (int e : a.edges) {
    if (g.stabilizer(e) == a.stab && !contains(all, reverse(e))) out.push_back(e);
  }
  return out;
}

inline int orbit_index(const GGraph& g, const IdealEdge& a) {
  return g.group().order() / static_cast<int>(a.stab.size());
}

/// E_v - a when it is an ideal edge not contained in the union of G a.
inline std::optional<IdealEdge> inverse_edge(const GGraph& g, const IdealEdge& a) {
  auto rest = set_difference(g.edges_at(a.vertex), a.edges);
  if (is_subset(rest, g.orbit_union(a.edges))) return std::nullopt;
  return make_ideal_edge(g, rest);
}

inline bool is_invertible(const GGraph& g, const IdealEdge& a) { return inverse_edge(g, a).has_value(); }

/// G a contained in G b: some translate of b contains a.
inline bool orbit_contained(const GGraph& g, const EdgeSet& a, const EdgeSet& b) {
  for (const auto& t : g.set_orbit(b)) {
    if (is_subset(a, t)) return true;
  }
  return false;
}

inline bool orbits_disjoint(const GGraph& g, const EdgeSet& a, const EdgeSet& b) {
  return !intersects(a, g.orbit_union(b));
}

/// Some translate of a equals E_v - b for the vertex v of b.
inline bool is_translate_of_complement(const GGraph& g, const IdealEdge& a, const IdealEdge& b) {
  auto rest = set_difference(g.edges_at(b.vertex), b.edges);
  for (const auto& t : g.set_orbit(a.edges)) {
    if (t == rest) return true;
  }
  return false;
}

inline bool compatible(const GGraph& g, const IdealEdge& a, const IdealEdge& b) {
  if (orbit_contained(g, a.edges, b.edges) || orbit_contained(g, b.edges, a.edges)) return true;
  if (!orbits_disjoint(g, a.edges, b.edges)) return false;
  if (a.vertex == g.basepoint() && b.vertex == g.basepoint()) return true;
  return !is_translate_of_complement(g, a, b);
}

inline bool pre_compatible(const GGraph& g, const IdealEdge& a, const IdealEdge& b) {
  if (compatible(g, a, b)) return true;
  if (auto ai = inverse_edge(g, a); ai && orbit_contained(g, ai->edges, b.edges)) return true;
  if (auto bi = inverse_edge(g, b); bi && orbit_contained(g, bi->edges, a.edges)) return true;
  return false;
}

/// Intersection components of a with b over P\G/Q, P = stab(a), Q = stab(b).
inline Crossing crossing(const GGraph& g, const IdealEdge& a, const IdealEdge& b) {
  Crossing c;
  if (a.vertex != b.vertex) return c;
  const auto& grp = g.group();
  c.reps = grp.double_coset_reps(a.stab, b.stab);
  for (int x : c.reps) {
    EdgeSet px_b;
    for (int p : a.stab) px_b = set_union(px_b, g.act_set(grp.mul(p, x), b.edges));
    EdgeSet qx_a;
    for (int q : b.stab) qx_a = set_union(qx_a, g.act_set(grp.mul(q, grp.inverse(x)), a.edges));
    c.components.push_back(set_intersection(a.edges, px_b));
    c.dual_components.push_back(set_intersection(b.edges, qx_a));
    if (!c.components.back().empty()) ++c.count;
  }
  return c;
}

inline std::string ideal_edge_name(const GGraph& g, const IdealEdge& a) {
  return g.vertex_name(a.vertex) + ":" + g.set_name(a.edges);
}

}  // namespace auter
