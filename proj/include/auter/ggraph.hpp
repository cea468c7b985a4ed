#pragma once

// Pointed graphs with an edge involution and a finite group acting by
// basepoint-preserving automorphisms.
//
// Directed edge ids: the undirected edge k has directed ids 2k (as declared,
// from -> to) and 2k+1 (reversed). reverse(d) = d ^ 1. E_v is the set of
// directed edges whose terminal vertex is v.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "auter/edgeset.hpp"
#include "auter/error.hpp"
#include "auter/group.hpp"

namespace auter {

inline int reverse(int d) { return d ^ 1; }

struct Violation {
  std::string kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
  }
  void add(std::string kind, std::string message) {
    violations.push_back({std::move(kind), std::move(message)});
  }
  std::string to_string() const {
    if (ok()) return "OK";
    std::string s;
    for (const auto& v : violations) s += v.kind + ": " + v.message + "\n";
    return s;
  }
};

struct EdgeOrbit {
  int representative;
  EdgeSet members;
};

/// G-invariant acyclic set of undirected edges (sorted undirected ids).
struct InvariantForest {
  std::vector<int> edge_pairs;
  friend bool operator==(const InvariantForest&, const InvariantForest&) = default;
};

class GGraph {
 public:
  int add_vertex(const std::string& name) {
    if (vertex_index_.count(name)) throw ValidationError("duplicate vertex '" + name + "'");
    vertex_index_[name] = static_cast<int>(vertex_names_.size());
    vertex_names_.push_back(name);
    return static_cast<int>(vertex_names_.size()) - 1;
  }

  int add_edge(const std::string& name, int from, int to) {
    if (edge_index_.count(name)) throw ValidationError("duplicate edge '" + name + "'");
    if (from < 0 || to < 0 || from >= vertex_count() || to >= vertex_count()) {
      throw ValidationError("edge '" + name + "' has an unknown endpoint");
    }
    edge_index_[name] = static_cast<int>(edge_names_.size());
    edge_names_.push_back(name);
    from_.push_back(from);
    to_.push_back(to);
    return static_cast<int>(edge_names_.size()) - 1;
  }

  void set_basepoint(int v) { basepoint_ = v; }

  /// Installs the action. Vertex permutations are inferred from the edge
  /// action; validate() checks that the inference is consistent.
  void set_group(FiniteGroup group, int declared_order = -1) {
    group_ = std::move(group);
    declared_order_ = declared_order;
    vertex_perms_.clear();
    for (int g = 0; g < group_.order(); ++g) {
      std::vector<int> vp(vertex_count(), -1);
      for (int d = 0; d < directed_count(); ++d) {
        if (vp[terminal(d)] < 0) vp[terminal(d)] = terminal(group_.act(g, d));
      }
      for (int v = 0; v < vertex_count(); ++v) {
        if (vp[v] < 0) vp[v] = v;
      }
      vertex_perms_.push_back(std::move(vp));
    }
  }

  void set_trivial_group() {
    set_group(FiniteGroup({identity_perm(directed_count())}, {}, {}));
  }

  int vertex_count() const noexcept { return static_cast<int>(vertex_names_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edge_names_.size()); }
  int directed_count() const noexcept { return 2 * edge_count(); }
  int basepoint() const noexcept { return basepoint_; }
  const FiniteGroup& group() const noexcept { return group_; }
  int declared_order() const noexcept { return declared_order_; }

  /// Rank of the fundamental group, E - V + 1 (for connected graphs).
  int rank() const noexcept { return edge_count() - vertex_count() + 1; }

  int terminal(int d) const { return (d & 1) ? from_[d >> 1] : to_[d >> 1]; }
  int initial(int d) const { return terminal(reverse(d)); }

  const std::string& vertex_name(int v) const { return vertex_names_.at(v); }
  const std::string& edge_name(int k) const { return edge_names_.at(k); }
  const std::vector<std::string>& vertex_names() const noexcept { return vertex_names_; }
  const std::vector<std::string>& edge_names() const noexcept { return edge_names_; }

  /// `e` or `~e`.
  std::string directed_name(int d) const {
    return ((d & 1) ? "~" : "") + edge_names_.at(d >> 1);
  }

  std::string set_name(const EdgeSet& s) const {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ",";
      out += directed_name(s[i]);
    }
    return out + "}";
  }

  std::optional<int> find_vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> find_edge(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Parses `e` / `~e` into a directed edge id.
  std::optional<int> find_directed(const std::string& token) const {
    if (token.empty()) return std::nullopt;
    bool rev = token[0] == '~';
    auto k = find_edge(rev ? token.substr(1) : token);
    if (!k) return std::nullopt;
    return 2 * *k + (rev ? 1 : 0);
  }

  int act_edge(int g, int d) const { return group_.act(g, d); }
  int act_vertex(int g, int v) const { return vertex_perms_.at(g).at(v); }

  EdgeSet act_set(int g, const EdgeSet& s) const {
    std::vector<int> out;
    out.reserve(s.size());
    for (int d : s) out.push_back(group_.act(g, d));
    return make_set(std::move(out));
  }

  /// E_v: directed edges ending at v, sorted.
  EdgeSet edges_at(int v) const {
    EdgeSet out;
    for (int d = 0; d < directed_count(); ++d) {
      if (terminal(d) == v) out.push_back(d);
    }
    return out;
  }

  int valence(int v) const { return static_cast<int>(edges_at(v).size()); }

  bool is_loop(int d) const { return terminal(d) == initial(d); }

  // --- group queries ----------------------------------------------------------

  Subgroup stabilizer(int d) const {
    check_edge(d);
    Subgroup s;
    for (int g = 0; g < group_.order(); ++g) {
      if (group_.act(g, d) == d) s.push_back(g);
    }
    return s;
  }

  Subgroup vertex_stabilizer(int v) const {
    Subgroup s;
    for (int g = 0; g < group_.order(); ++g) {
      if (act_vertex(g, v) == v) s.push_back(g);
    }
    return s;
  }

  /// Setwise stabilizer of a set of directed edges.
  Subgroup set_stabilizer(const EdgeSet& s) const {
    Subgroup out;
    for (int g = 0; g < group_.order(); ++g) {
      if (act_set(g, s) == s) out.push_back(g);
    }
    return out;
  }

  EdgeOrbit orbit(int d) const {
    check_edge(d);
    std::vector<int> m;
    for (int g = 0; g < group_.order(); ++g) m.push_back(group_.act(g, d));
    return {d, make_set(std::move(m))};
  }

  /// Distinct translates g*s of a set, sorted.
  std::vector<EdgeSet> set_orbit(const EdgeSet& s) const {
    std::set<EdgeSet> out;
    for (int g = 0; g < group_.order(); ++g) out.insert(act_set(g, s));
    return {out.begin(), out.end()};
  }

  /// Union of all translates of s.
  EdgeSet orbit_union(const EdgeSet& s) const {
    std::vector<int> out;
    for (int g = 0; g < group_.order(); ++g) {
      for (int d : s) out.push_back(group_.act(g, d));
    }
    return make_set(std::move(out));
  }

  /// Orbits of undirected edges, each given by its sorted undirected ids,
  /// ordered by least member.
  std::vector<std::vector<int>> undirected_orbits() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(edge_count(), false);
    for (int k = 0; k < edge_count(); ++k) {
      if (seen[k]) continue;
      std::set<int> o;
      for (int g = 0; g < group_.order(); ++g) o.insert(group_.act(g, 2 * k) >> 1);
      for (int x : o) seen[x] = true;
      out.emplace_back(o.begin(), o.end());
    }
    return out;
  }

  // --- validation ---------------------------------------------------------------

  ValidationReport validate() const {
    ValidationReport r;
    if (basepoint_ < 0 || basepoint_ >= vertex_count()) {
      r.add("basepoint", "basepoint is not a vertex");
      return r;
    }
    for (int v = 0; v < vertex_count(); ++v) {
      int val = valence(v);
      if (val == 1) {
        r.add("free edge", "vertex " + vertex_names_[v] + " has valence 1");
      } else if (v == basepoint_ && val < 2) {
        r.add("valence", "basepoint " + vertex_names_[v] + " has valence " + std::to_string(val));
      } else if (v != basepoint_ && val < 3 && !swapped_pair(v)) {
        r.add("valence", "vertex " + vertex_names_[v] + " has valence " + std::to_string(val));
      }
    }
    if (!connected()) r.add("disconnected", "graph is not connected");
    if (declared_order_ >= 0 && declared_order_ != group_.order()) {
      r.add("group order", "declared order " + std::to_string(declared_order_) +
                               " but the generators produce " + std::to_string(group_.order()));
    }
    for (int g = 0; g < group_.order(); ++g) {
      const auto& p = group_.perm(g);
      if (static_cast<int>(p.size()) != directed_count()) {
        r.add("action", "element " + std::to_string(g) + " has the wrong degree");
        continue;
      }
      for (int d = 0; d < directed_count(); ++d) {
        if (p[reverse(d)] != reverse(p[d])) {
          r.add("action", "element " + std::to_string(g) + " does not commute with reversal at " +
                              directed_name(d));
        }
        if (terminal(p[d]) != act_vertex(g, terminal(d))) {
          r.add("incidence", "element " + std::to_string(g) + " does not respect incidence at " +
                                 directed_name(d));
        }
        if (p[d] == reverse(d)) {
          r.add("inversion", "element " + std::to_string(g) + " sends " + directed_name(d) +
                                 " to " + directed_name(reverse(d)));
        }
      }
      if (act_vertex(g, basepoint_) != basepoint_) {
        r.add("basepoint moved", "element " + std::to_string(g) + " moves the basepoint");
      }
    }
    return r;
  }

  bool connected() const {
    if (vertex_count() == 0) return false;
    std::vector<int> parent(vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int k = 0; k < edge_count(); ++k) parent[find(from_[k])] = find(to_[k]);
    for (int v = 0; v < vertex_count(); ++v) {
      if (find(v) != find(0)) return false;
    }
    return true;
  }

  friend bool operator==(const GGraph& a, const GGraph& b) {
    if (a.vertex_names_ != b.vertex_names_ || a.edge_names_ != b.edge_names_ || a.from_ != b.from_ ||
        a.to_ != b.to_ || a.basepoint_ != b.basepoint_ || a.group_.order() != b.group_.order()) {
      return false;
    }
    for (int g = 0; g < a.group_.order(); ++g) {
      if (a.group_.perm(g) != b.group_.perm(g)) return false;
    }
    return true;
  }

 private:
  /// Valence-2 vertex whose two edge-ends are exchanged by the group: the
  /// midpoint of a subdivided inversion, which cannot be smoothed away.
  bool swapped_pair(int v) const {
    const auto ev = edges_at(v);
    if (ev.size() != 2) return false;
    for (int g = 0; g < group_.order(); ++g) {
      const auto& p = group_.perm(g);
      if (static_cast<int>(p.size()) == directed_count() && p[ev[0]] == ev[1]) return true;
    }
    return false;
  }

  void check_edge(int d) const {
    if (d < 0 || d >= directed_count()) throw ValidationError("unknown edge id " + std::to_string(d));
  }

  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::map<std::string, int> vertex_index_;
  std::map<std::string, int> edge_index_;
  std::vector<int> from_;
  std::vector<int> to_;
  int basepoint_ = -1;
  FiniteGroup group_;
  int declared_order_ = -1;
  std::vector<std::vector<int>> vertex_perms_;
};

// --- free functions matching the module operations ------------------------------

inline ValidationReport validate(const GGraph& g) { return g.validate(); }
inline Subgroup stabilizer(const GGraph& g, int d) { return g.stabilizer(d); }
inline EdgeOrbit orbit(const GGraph& g, int d) { return g.orbit(d); }

namespace detail {

inline bool acyclic_non_loop(const GGraph& g, const std::vector<int>& undirected) {
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int k : undirected) {
    int a = find(g.initial(2 * k));
    int b = find(g.terminal(2 * k));
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

}  // namespace detail

/// All nonempty G-invariant forests, ordered by number of edge orbits and then
/// lexicographically by orbit index.
inline std::vector<InvariantForest> invariant_forests(const GGraph& g) {
  auto orbits = g.undirected_orbits();
  std::vector<int> usable;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (detail::acyclic_non_loop(g, orbits[i])) usable.push_back(static_cast<int>(i));
  }
  if (usable.size() > 20) throw ValidationError("too many edge orbits for forest enumeration");
  std::vector<std::pair<std::vector<int>, InvariantForest>> found;
  for (unsigned mask = 1; mask < (1u << usable.size()); ++mask) {
    std::vector<int> chosen;
    std::vector<int> edges;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      if (mask & (1u << i)) {
        chosen.push_back(usable[i]);
        edges.insert(edges.end(), orbits[usable[i]].begin(), orbits[usable[i]].end());
      }
    }
    if (!detail::acyclic_non_loop(g, edges)) continue;
    std::sort(edges.begin(), edges.end());
    found.push_back({chosen, InvariantForest{edges}});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
  });
  std::vector<InvariantForest> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

/// A maximal invariant forest built greedily over edge orbits (empty when the
/// graph is reduced).
inline InvariantForest maximal_invariant_forest(const GGraph& g) {
  std::vector<int> edges;
  for (const auto& o : g.undirected_orbits()) {
    auto trial = edges;
    trial.insert(trial.end(), o.begin(), o.end());
    if (detail::acyclic_non_loop(g, trial)) edges = std::move(trial);
  }
  std::sort(edges.begin(), edges.end());
  return {edges};
}

inline bool is_reduced(const GGraph& g) { return maximal_invariant_forest(g).edge_pairs.empty(); }

struct CollapseResult {
  GGraph graph;
  std::vector<int> vertex_map;  // old vertex -> new vertex
  std::vector<int> edge_map;    // old directed edge -> new directed edge, -1 if collapsed
};

/// Quotient by an invariant forest. Surviving edges keep their names and
/// orientation; each merged vertex takes the basepoint's name if it contains
/// the basepoint, else the name of its least old vertex. Group elements keep
/// their indices.
inline CollapseResult collapse(const GGraph& g, const InvariantForest& f) {
  std::vector<bool> in_forest(g.edge_count(), false);
  for (int k : f.edge_pairs) {
    if (k < 0 || k >= g.edge_count()) throw ValidationError("forest names an unknown edge");
    in_forest[k] = true;
  }
  if (!detail::acyclic_non_loop(g, f.edge_pairs)) throw ValidationError("forest is not acyclic");
  for (int k : f.edge_pairs) {
    for (int x = 0; x < g.group().order(); ++x) {
      if (!in_forest[g.act_edge(x, 2 * k) >> 1]) throw ValidationError("forest is not G-invariant");
    }
  }
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int k : f.edge_pairs) {
    int a = find(g.initial(2 * k));
    int b = find(g.terminal(2 * k));
    parent[std::max(a, b)] = std::min(a, b);
  }
  CollapseResult r;
  r.vertex_map.assign(g.vertex_count(), -1);
  std::map<int, int> root_to_new;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int root = find(v);
    auto it = root_to_new.find(root);
    if (it == root_to_new.end()) {
      std::string name = g.vertex_name(root);
      if (find(g.basepoint()) == root) name = g.vertex_name(g.basepoint());
      it = root_to_new.emplace(root, r.graph.add_vertex(name)).first;
    }
    r.vertex_map[v] = it->second;
  }
  r.edge_map.assign(g.directed_count(), -1);
  for (int k = 0; k < g.edge_count(); ++k) {
    if (in_forest[k]) continue;
    int nk = r.graph.add_edge(g.edge_name(k), r.vertex_map[g.initial(2 * k)],
                              r.vertex_map[g.terminal(2 * k)]);
    r.edge_map[2 * k] = 2 * nk;
    r.edge_map[2 * k + 1] = 2 * nk + 1;
  }
  r.graph.set_basepoint(r.vertex_map[g.basepoint()]);
  std::vector<Perm> perms;
  for (int x = 0; x < g.group().order(); ++x) {
    Perm p(r.graph.directed_count());
    for (int d = 0; d < g.directed_count(); ++d) {
      if (r.edge_map[d] >= 0) p[r.edge_map[d]] = r.edge_map[g.act_edge(x, d)];
    }
    perms.push_back(std::move(p));
  }
  r.graph.set_group(FiniteGroup(std::move(perms), g.group().generators(), g.group().generator_names()),
                    g.declared_order());
  return r;
}

}  // namespace auter
