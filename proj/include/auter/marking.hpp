#pragma once

// Markings of G-graphs: basis loops at the basepoint, path/loop realization of
// words, Lyndon length, and the check that the graph action realizes the
// claimed automorphisms of F_n.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "auter/error.hpp"
#include "auter/freegroup.hpp"
#include "auter/ggraph.hpp"

namespace auter {

/// Edge path as its sequence of directed edges. The start vertex is implied by
/// the first step; every path used by the norms is based at the basepoint.
using EdgePath = std::vector<int>;

inline EdgePath reduce_path(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (int d : p) {
    if (!out.empty() && out.back() == reverse(d)) {
      out.pop_back();
    } else {
      out.push_back(d);
    }
  }
  return out;
}

inline EdgePath reverse_path(const EdgePath& p) {
  EdgePath out(p.rbegin(), p.rend());
  for (auto& d : out) d = reverse(d);
  return out;
}

inline bool is_reduced_path(const EdgePath& p) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i + 1] == reverse(p[i])) return false;
  }
  return true;
}

/// Strips matching ends (free homotopy) and rotates to the least id sequence.
inline EdgePath cyclic_reduce_path(const EdgePath& p) {
  EdgePath r = reduce_path(p);
  std::size_t i = 0;
  std::size_t j = r.size();
  while (j - i >= 2 && r[j - 1] == reverse(r[i])) {
    ++i;
    --j;
  }
  EdgePath core(r.begin() + i, r.begin() + j);
  EdgePath best = core;
  for (std::size_t k = 1; k < core.size(); ++k) {
    std::rotate(core.begin(), core.begin() + 1, core.end());
    if (core < best) best = core;
  }
  return best;
}

inline EdgePath act_path(const GGraph& g, int x, const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (int d : p) out.push_back(g.act_edge(x, d));
  return out;
}

inline std::string path_to_string(const GGraph& g, const EdgePath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += g.directed_name(p[i]);
  }
  return s;
}

class MarkedGGraph {
 public:
  MarkedGGraph() = default;

  /// Marked graph with an explicitly claimed realization (one automorphism per
  /// group element, in group element order). Nothing is checked here; see
  /// validate() and verify_realization().
  MarkedGGraph(GGraph graph, std::vector<EdgePath> basis_paths,
               std::vector<FreeAutomorphism> realization)
      : graph_(std::move(graph)),
        basis_(std::move(basis_paths)),
        realization_(std::move(realization)) {
    build_tree_coordinates();
  }

  /// Marked graph whose realization is read off from the graph action. Throws
  /// ValidationError when the basis loops do not induce an isomorphism
  /// F_n -> pi_1(graph, *).
  static MarkedGGraph derive(GGraph graph, std::vector<EdgePath> basis_paths) {
    MarkedGGraph m(std::move(graph), std::move(basis_paths), {});
    if (auto problem = m.marking_problem()) throw ValidationError(*problem);
    for (int x = 0; x < m.graph_.group().order(); ++x) {
      std::vector<Word> images;
      for (const auto& p : m.basis_) images.push_back(m.word_of_loop(act_path(m.graph_, x, p)));
      m.realization_.emplace_back(std::move(images));
    }
    return m;
  }

  const GGraph& graph() const noexcept { return graph_; }
  int rank() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<EdgePath>& basis_paths() const noexcept { return basis_; }
  const std::vector<FreeAutomorphism>& realization() const noexcept { return realization_; }
  const FreeAutomorphism& realization(int x) const { return realization_.at(x); }
  int group_order() const noexcept { return graph_.group().order(); }

  /// Unique reduced edge path at the basepoint representing w.
  EdgePath path_of_word(const Word& w) const {
    EdgePath raw;
    for (auto l : w.letters()) {
      const auto& p = basis_.at(std::abs(l) - 1);
      if (l > 0) {
        raw.insert(raw.end(), p.begin(), p.end());
      } else {
        auto r = reverse_path(p);
        raw.insert(raw.end(), r.begin(), r.end());
      }
    }
    return reduce_path(raw);
  }

  /// Cyclically reduced loop of a conjugacy class, in rotation-canonical form.
  EdgePath loop_of_class(const ConjClass& c) const { return cyclic_reduce_path(path_of_word(c.rep())); }

  int lyndon_length(const Word& w) const { return static_cast<int>(path_of_word(w).size()); }

  /// Word represented by a loop at the basepoint (the inverse of the marking).
  Word word_of_loop(const EdgePath& loop) const {
    if (!inverse_marking_) throw ValidationError("marking is not invertible");
    std::vector<Letter> raw;
    for (int d : loop) {
      int t = tree_letter_[d >> 1];
      if (t) raw.push_back((d & 1) ? -t : t);
    }
    return inverse_marking_->apply(reduce(raw));
  }

  /// Describes why the basis loops fail to be a marking, or nullopt.
  std::optional<std::string> marking_problem() const {
    if (graph_.basepoint() < 0) return "no basepoint";
    if (!graph_.connected()) return "graph is not connected";
    if (rank() != graph_.rank()) {
      return "marking has " + std::to_string(rank()) + " basis loops but the graph has rank " +
             std::to_string(graph_.rank());
    }
    for (int j = 0; j < rank(); ++j) {
      const auto& p = basis_[j];
      std::string name = "x" + std::to_string(j + 1);
      if (p.empty()) return name + " is the trivial loop";
      if (graph_.initial(p.front()) != graph_.basepoint() ||
          graph_.terminal(p.back()) != graph_.basepoint()) {
        return name + " is not a loop at the basepoint";
      }
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (graph_.terminal(p[i]) != graph_.initial(p[i + 1])) return name + " is not a path";
      }
      if (!is_reduced_path(p)) return name + " is not reduced";
    }
    if (!inverse_marking_) return "basis loops do not induce an isomorphism onto pi_1";
    return std::nullopt;
  }

  /// Equivariance: path_of_word(x(a_j)) == reduce(x * path_of_word(a_j)).
  ValidationReport verify_realization() const {
    ValidationReport r;
    if (static_cast<int>(realization_.size()) != group_order()) {
      r.add("realization", "expected " + std::to_string(group_order()) + " automorphisms, got " +
                               std::to_string(realization_.size()));
      return r;
    }
    for (int x = 0; x < group_order(); ++x) {
      if (realization_[x].rank() != rank()) {
        r.add("realization", "automorphism " + std::to_string(x) + " has the wrong rank");
        continue;
      }
      for (int j = 1; j <= rank(); ++j) {
        auto lhs = path_of_word(realization_[x].image(j));
        auto rhs = reduce_path(act_path(graph_, x, basis_[j - 1]));
        if (lhs != rhs) {
          r.add("equivariance", "element " + std::to_string(x) + " at x" + std::to_string(j) + ": " +
                                    path_to_string(graph_, lhs) + " != " + path_to_string(graph_, rhs));
        }
      }
    }
    return r;
  }

  /// Full check: graph admissibility, marking, realization.
  ValidationReport validate() const {
    ValidationReport r = graph_.validate();
    if (auto problem = marking_problem()) r.add("marking", *problem);
    if (r.ok()) {
      for (auto& v : verify_realization().violations) r.violations.push_back(v);
    }
    return r;
  }

  /// Text that is identical for two marked G-graphs exactly when they are
  /// equivalent: vertices and edges are renamed in order of first traversal by
  /// the basis loops, edges oriented by that first traversal.
  std::string canonical_form() const {
    std::vector<int> vmap(graph_.vertex_count(), -1);
    std::vector<int> emap(graph_.edge_count(), -1);
    std::vector<int> flip(graph_.edge_count(), 0);
    int nv = 0;
    int ne = 0;
    vmap[graph_.basepoint()] = nv++;
    for (const auto& p : basis_) {
      for (int d : p) {
        int k = d >> 1;
        if (emap[k] < 0) {
          emap[k] = ne++;
          flip[k] = d & 1;
        }
        if (vmap[graph_.terminal(d)] < 0) vmap[graph_.terminal(d)] = nv++;
      }
    }
    auto canon = [&](int d) { return 2 * emap[d >> 1] + ((d & 1) ^ flip[d >> 1]); };
    std::string s = "V " + std::to_string(graph_.vertex_count()) + " covered " + std::to_string(nv) +
                    "\nE " + std::to_string(graph_.edge_count()) + " covered " + std::to_string(ne) + "\n";
    std::vector<std::string> edges(ne);
    for (int k = 0; k < graph_.edge_count(); ++k) {
      if (emap[k] < 0) continue;
      int d = 2 * k + flip[k];
      edges[emap[k]] = std::to_string(vmap[graph_.initial(d)]) + ">" + std::to_string(vmap[graph_.terminal(d)]);
    }
    for (const auto& e : edges) s += e + "\n";
    for (const auto& p : basis_) {
      s += "x:";
      for (int d : p) s += " " + std::to_string(canon(d));
      s += "\n";
    }
    for (int x = 0; x < group_order(); ++x) {
      s += "g" + std::to_string(x) + ":";
      for (int k = 0; k < graph_.edge_count(); ++k) {
        if (emap[k] < 0) continue;
        s += " " + std::to_string(canon(graph_.act_edge(x, 2 * k + flip[k])));
      }
      s += "\n";
    }
    return s;
  }

 private:
  // Spanning tree by breadth-first search from the basepoint; every non-tree
  // undirected edge becomes a free generator t_j of pi_1.
  void build_tree_coordinates() {
    tree_letter_.assign(graph_.edge_count(), 0);
    inverse_marking_.reset();
    if (graph_.basepoint() < 0 || !graph_.connected()) return;
    std::vector<bool> seen(graph_.vertex_count(), false);
    std::vector<bool> tree(graph_.edge_count(), false);
    std::deque<int> queue{graph_.basepoint()};
    seen[graph_.basepoint()] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int d = 0; d < graph_.directed_count(); ++d) {
        if (graph_.initial(d) != v || seen[graph_.terminal(d)]) continue;
        seen[graph_.terminal(d)] = true;
        tree[d >> 1] = true;
        queue.push_back(graph_.terminal(d));
      }
    }
    int next = 0;
    for (int k = 0; k < graph_.edge_count(); ++k) {
      if (!tree[k]) tree_letter_[k] = ++next;
    }
    if (next != rank() || rank() == 0) return;
    std::vector<Word> images;
    for (const auto& p : basis_) {
      std::vector<Letter> raw;
      for (int d : p) {
        if (d < 0 || d >= graph_.directed_count()) return;
        int t = tree_letter_[d >> 1];
        if (t) raw.push_back((d & 1) ? -t : t);
      }
      images.push_back(reduce(raw, next));
    }
    inverse_marking_ = invert(FreeAutomorphism(std::move(images)));
  }

  GGraph graph_;
  std::vector<EdgePath> basis_;
  std::vector<FreeAutomorphism> realization_;
  std::vector<int> tree_letter_;
  std::optional<FreeAutomorphism> inverse_marking_;
};

inline EdgePath path_of_word(const MarkedGGraph& m, const Word& w) { return m.path_of_word(w); }
inline EdgePath loop_of_class(const MarkedGGraph& m, const ConjClass& c) { return m.loop_of_class(c); }
inline int lyndon_length(const MarkedGGraph& m, const Word& w) { return m.lyndon_length(w); }
inline ValidationReport verify_realization(const MarkedGGraph& m) { return m.verify_realization(); }

/// Collapses an invariant forest and pushes the marking forward. The
/// realization is unchanged: collapse is an equivariant homotopy equivalence.
inline MarkedGGraph collapse(const MarkedGGraph& m, const InvariantForest& f) {
  auto c = collapse(m.graph(), f);
  std::vector<EdgePath> basis;
  for (const auto& p : m.basis_paths()) {
    EdgePath q;
    for (int d : p) {
      if (c.edge_map[d] >= 0) q.push_back(c.edge_map[d]);
    }
    basis.push_back(reduce_path(q));
  }
  return MarkedGGraph(std::move(c.graph), std::move(basis), m.realization());
}

}  // namespace auter
