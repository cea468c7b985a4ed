#pragma once

// Blow-ups, Whitehead moves, reductivity and greedy norm descent.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "auter/edgeset.hpp"
#include "auter/error.hpp"
#include "auter/ggraph.hpp"
#include "auter/idealedges.hpp"
#include "auter/marking.hpp"
#include "auter/norms.hpp"

namespace auter {

struct BlowUpResult {
  MarkedGGraph marked;
  /// Translates g_j alpha (edge ids are shared by both graphs).
  std::vector<EdgeSet> translates;
  /// Element g_j with g_j alpha = translates[j].
  std::vector<int> elements;
  /// Directed id of e(g_j alpha), running from the new vertex to the old one.
  std::vector<int> new_edges;
  std::vector<int> new_vertices;

  /// Undirected ids of the e(g alpha) orbit, for collapsing it again.
  InvariantForest new_edge_forest() const {
    InvariantForest f;
    for (int d : new_edges) f.edge_pairs.push_back(d >> 1);
    std::sort(f.edge_pairs.begin(), f.edge_pairs.end());
    return f;
  }
};

namespace detail {

inline std::string fresh_name(const std::string& stem, int& counter,
                              const std::function<bool(const std::string&)>& taken) {
  std::string s;
  do {
    s = stem + std::to_string(++counter);
  } while (taken(s));
  return s;
}

/// Translates of s with a witness element for each.
inline void orbit_with_elements(const GGraph& g, const EdgeSet& s, std::vector<EdgeSet>& sets,
                                std::vector<int>& elems) {
  sets = g.set_orbit(s);
  elems.assign(sets.size(), -1);
  for (int x = 0; x < g.group().order(); ++x) {
    auto t = g.act_set(x, s);
    auto pos = std::lower_bound(sets.begin(), sets.end(), t) - sets.begin();
    if (elems[pos] < 0) elems[pos] = x;
  }
}

}  // namespace detail

/// Pulls every translate g alpha away from its vertex v along a new edge
/// e(g alpha): u -> v. Marking paths are rewritten to cross e(g alpha)
/// wherever they pass between an end in g alpha and an end outside it.
inline BlowUpResult blow_up(const MarkedGGraph& m, const EdgeSet& alpha) {
  const auto& g = m.graph();
  require_ideal_edge(g, alpha);
  BlowUpResult r;
  detail::orbit_with_elements(g, alpha, r.translates, r.elements);
  const int k = static_cast<int>(r.translates.size());
  const int ne = g.edge_count();

  std::vector<int> side(g.directed_count(), -1);
  for (int j = 0; j < k; ++j) {
    for (int d : r.translates[j]) side[d] = j;
  }

  GGraph h;
  for (int v = 0; v < g.vertex_count(); ++v) h.add_vertex(g.vertex_name(v));
  int vc = 0;
  int ec = 0;
  for (int j = 0; j < k; ++j) {
    r.new_vertices.push_back(h.add_vertex(detail::fresh_name(
        "u", vc, [&](const std::string& s) { return g.find_vertex(s).has_value(); })));
  }
  for (int e = 0; e < ne; ++e) {
    int from = g.initial(2 * e);
    int to = g.terminal(2 * e);
    if (side[2 * e] >= 0) to = r.new_vertices[side[2 * e]];
    if (side[2 * e + 1] >= 0) from = r.new_vertices[side[2 * e + 1]];
    h.add_edge(g.edge_name(e), from, to);
  }
  for (int j = 0; j < k; ++j) {
    int v = g.terminal(r.translates[j].front());
    int id = h.add_edge(detail::fresh_name("f", ec, [&](const std::string& s) { return g.find_edge(s).has_value(); }),
                        r.new_vertices[j], v);
    r.new_edges.push_back(2 * id);
  }
  h.set_basepoint(g.basepoint());

  const auto& grp = g.group();
  std::vector<Perm> perms;
  for (int x = 0; x < grp.order(); ++x) {
    Perm p(h.directed_count());
    for (int d = 0; d < g.directed_count(); ++d) p[d] = grp.act(x, d);
    for (int j = 0; j < k; ++j) {
      auto t = g.act_set(x, r.translates[j]);
      int jj = static_cast<int>(std::lower_bound(r.translates.begin(), r.translates.end(), t) - r.translates.begin());
      p[r.new_edges[j]] = r.new_edges[jj];
      p[r.new_edges[j] + 1] = r.new_edges[jj] + 1;
    }
    perms.push_back(std::move(p));
  }
  h.set_group(FiniteGroup(std::move(perms), grp.generators(), grp.generator_names()), g.declared_order());

  std::vector<EdgePath> basis;
  for (const auto& p : m.basis_paths()) {
    EdgePath q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      int leaving = reverse(p[i]);
      int arriving = i == 0 ? -1 : p[i - 1];
      int s_in = arriving < 0 ? -1 : side[arriving];
      int s_out = side[leaving];
      if (s_in != s_out) {
        if (s_in >= 0) q.push_back(r.new_edges[s_in]);
        if (s_out >= 0) q.push_back(reverse(r.new_edges[s_out]));
      }
      q.push_back(p[i]);
    }
    if (!p.empty() && side[p.back()] >= 0) q.push_back(r.new_edges[side[p.back()]]);
    basis.push_back(reduce_path(q));
  }
  r.marked = MarkedGGraph(std::move(h), std::move(basis), m.realization());
  return r;
}

/// Blow up G alpha and collapse G a, keeping the name and orientation of each
/// collapsed g a on the surviving e(g alpha). The result has the same vertex
/// and edge ids as the input; edges of g alpha other than g a are re-attached
/// at the initial vertex of g a.
inline MarkedGGraph whitehead(const MarkedGGraph& m, const EdgeSet& alpha, int a) {
  const auto& g = m.graph();
  auto ideal = require_ideal_edge(g, alpha);
  if (!contains(d_set(g, ideal), a)) {
    throw HypothesisError("collapse edge " + g.directed_name(a) + " is not in D(" + g.set_name(alpha) + ")");
  }
  auto bu = blow_up(m, alpha);
  const int k = static_cast<int>(bu.translates.size());
  std::vector<int> target(k);
  std::vector<int> owner(g.directed_count(), -1);
  for (int j = 0; j < k; ++j) {
    target[j] = g.act_edge(bu.elements[j], a);
    for (int d : bu.translates[j]) owner[d] = j;
  }

  GGraph h;
  for (int v = 0; v < g.vertex_count(); ++v) h.add_vertex(g.vertex_name(v));
  for (int e = 0; e < g.edge_count(); ++e) {
    int from = g.initial(2 * e);
    int to = g.terminal(2 * e);
    if (int j = owner[2 * e]; j >= 0 && target[j] != 2 * e) to = g.initial(target[j]);
    if (int j = owner[2 * e + 1]; j >= 0 && target[j] != 2 * e + 1) from = g.initial(target[j]);
    h.add_edge(g.edge_name(e), from, to);
  }
  h.set_basepoint(g.basepoint());
  h.set_group(g.group(), g.declared_order());

  std::vector<int> dropped(g.edge_count(), 0);
  for (int t : target) dropped[t >> 1] = 1;
  std::vector<int> renamed(bu.marked.graph().directed_count(), -1);
  for (int j = 0; j < k; ++j) {
    renamed[bu.new_edges[j]] = target[j];
    renamed[bu.new_edges[j] + 1] = reverse(target[j]);
  }
  std::vector<EdgePath> basis;
  for (const auto& p : bu.marked.basis_paths()) {
    EdgePath q;
    for (int d : p) {
      if (d >= g.directed_count()) {
        q.push_back(renamed[d]);
      } else if (!dropped[d >> 1]) {
        q.push_back(d);
      }
    }
    basis.push_back(reduce_path(q));
  }
  return MarkedGGraph(std::move(h), std::move(basis), m.realization());
}

enum class Verdict { Reductive, NotReductive, NullAtHorizon };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Reductive:
      return "reductive";
    case Verdict::NotReductive:
      return "not-reductive";
    case Verdict::NullAtHorizon:
      return "null-at-horizon";
  }
  return "?";
}

struct Reductivity {
  NormKind kind = NormKind::Tot;
  NormVector value;
  Verdict verdict = Verdict::NotReductive;
  /// value as a functional on all of F_n, for exact zero tests.
  SetFunctional functional;
  /// Null at horizon with a part that is not provably zero: the sign lies
  /// beyond the horizon.
  bool undetermined = false;
};

/// Sign of a functional whose truncation is v. Truncated leading sign when it
/// is nonzero; 0 when the functional vanishes identically; nullopt when it is
/// zero below the horizon without vanishing. For tot the out part is decided
/// first.
inline std::optional<int> decided_sign(const GGraph& g, const SetFunctional& f, const NormVector& v) {
  auto one = [&](NormKind k, const NormVector& part) -> std::optional<int> {
    if (int s = part.leading_sign()) return s;
    if (functional_vanishes(g, f, k)) return 0;
    return std::nullopt;
  };
  if (v.kind() != NormKind::Tot) return one(v.kind(), v);
  auto out = one(NormKind::Out, v.part(NormKind::Out));
  if (!out || *out != 0) return out;
  return one(NormKind::Aut, v.part(NormKind::Aut));
}

inline SetFunctional difference(const SetFunctional& a, const SetFunctional& b) {
  SetFunctional out = a;
  for (const auto& [c, set] : b) out.emplace_back(-c, set);
  return out;
}

/// [G:stab(alpha)] (|a| - |alpha|).
inline Reductivity reductivity(const NormContext& ctx, const IdealEdge& alpha, int a, NormKind kind) {
  const auto& g = ctx.marked().graph();
  if (!contains(d_set(g, alpha), a)) {
    throw HypothesisError("collapse edge " + g.directed_name(a) + " is not in D(" + g.set_name(alpha.edges) + ")");
  }
  Reductivity r;
  r.kind = kind;
  const int idx = orbit_index(g, alpha);
  r.value = (ctx.edge_abs(a, kind) - ctx.set_abs(alpha.edges, kind)).scaled(idx);
  r.functional = {{idx, EdgeSet{a}}, {-idx, alpha.edges}};
  auto s = decided_sign(g, r.functional, r.value);
  r.undetermined = !s.has_value();
  r.verdict = (!s || *s == 0) ? Verdict::NullAtHorizon : (*s > 0 ? Verdict::Reductive : Verdict::NotReductive);
  return r;
}

inline Reductivity reductivity(const MarkedGGraph& m, const EdgeSet& alpha, int a, NormKind kind, int horizon) {
  NormContext ctx(m, horizon);
  return reductivity(ctx, require_ideal_edge(m.graph(), alpha), a, kind);
}

/// Some a in D(alpha) makes (alpha, a) reductive of the given kind.
inline std::optional<int> reductive_target(const NormContext& ctx, const IdealEdge& alpha, NormKind kind) {
  for (int a : d_set(ctx.marked().graph(), alpha)) {
    if (reductivity(ctx, alpha, a, kind).verdict == Verdict::Reductive) return a;
  }
  return std::nullopt;
}

inline bool is_reductive(const NormContext& ctx, const IdealEdge& alpha, NormKind kind = NormKind::Tot) {
  return reductive_target(ctx, alpha, kind).has_value();
}

struct PairSearch {
  std::optional<IdealPair> best;
  Reductivity best_value;
  int candidates = 0;
  int reductive = 0;
  int null_at_horizon = 0;
  /// Null-at-horizon candidates whose sign is decided beyond the horizon.
  int undetermined = 0;
  int ties_at_top = 0;
  std::vector<std::string> warnings;
};

/// Scans every (alpha, a in D(alpha)) over orbit representatives and keeps
/// the lexicographically largest reductivity of the given kind. Ties go to the least
/// (vertex, edges, a). Null-at-horizon candidates count as not reductive; in
/// strict mode they raise IndeterminateError when no pair is reductive, and
/// so does a tie at the top.
inline PairSearch search_reductive_pairs(const NormContext& ctx, const std::vector<IdealEdge>& edges,
                                         bool strict = false, NormKind kind = NormKind::Tot) {
  const auto& g = ctx.marked().graph();
  PairSearch s;
  for (const auto& alpha : edges) {
    for (int a : d_set(g, alpha)) {
      ++s.candidates;
      auto r = reductivity(ctx, alpha, a, kind);
      if (r.verdict == Verdict::NullAtHorizon) {
        ++s.null_at_horizon;
        if (r.undetermined) ++s.undetermined;
        s.warnings.push_back("null-at-horizon: (" + ideal_edge_name(g, alpha) + ", " + g.directed_name(a) + ")");
        continue;
      }
      if (r.verdict != Verdict::Reductive) continue;
      ++s.reductive;
      if (!s.best) {
        s.best = IdealPair{alpha, a};
        s.best_value = r;
        continue;
      }
      auto c = decided_sign(g, difference(r.functional, s.best_value.functional), r.value - s.best_value.value);
      if (c && *c > 0) {
        s.best = IdealPair{alpha, a};
        s.best_value = r;
        s.ties_at_top = 0;
      } else if (!c || *c == 0) {
        ++s.ties_at_top;
      }
    }
  }
  if (s.ties_at_top > 0) s.warnings.push_back("maximal reductivity tied at horizon; least pair kept");
  if (strict) {
    if (!s.best && s.undetermined > 0) throw IndeterminateError("no reductive pair, but some are undetermined at horizon");
    if (s.ties_at_top > 0) throw IndeterminateError("maximal reductive pair is ambiguous at horizon");
  }
  return s;
}

inline std::optional<IdealPair> max_reductive_pair(const NormContext& ctx, bool strict = false) {
  return search_reductive_pairs(ctx, enumerate_ideal_edges(ctx.marked().graph()), strict).best;
}

inline std::optional<IdealPair> max_reductive_pair(const MarkedGGraph& m, int horizon, bool strict = false) {
  NormContext ctx(m, horizon);
  return max_reductive_pair(ctx, strict);
}

/// `[c1, c2, ...]` over the first `limit` coordinates.
inline std::string brief(const NormVector& v, std::size_t limit = 8) {
  std::string s = "[";
  std::size_t n = std::min(limit, v.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  if (n < v.size()) s += ", ...";
  return s + "]";
}

inline std::string pair_name(const GGraph& g, const IdealPair& p) {
  return "(" + ideal_edge_name(g, p.edge) + ", " + g.directed_name(p.collapse_target) + ")";
}

struct ReduceResult {
  MarkedGGraph marked;
  std::vector<std::string> log;
  std::vector<NormVector> tot_norms;
  int steps = 0;
  int collapses = 0;
};

/// Collapses a maximal invariant forest, then applies maximally reductive
/// Whitehead moves until none is left, collapsing any forest a move creates.
/// Every move must strictly lower the tot-norm at the horizon.
inline ReduceResult greedy_reduce(const MarkedGGraph& start, int horizon, int max_steps, bool strict = false) {
  ReduceResult r;
  r.marked = start;
  auto collapse_all = [&](const std::string& when) {
    auto f = maximal_invariant_forest(r.marked.graph());
    if (f.edge_pairs.empty()) return;
    std::string names;
    for (int k : f.edge_pairs) names += (names.empty() ? "" : ",") + r.marked.graph().edge_name(k);
    r.marked = collapse(r.marked, f);
    ++r.collapses;
    r.log.push_back("collapse " + when + ": {" + names + "}");
  };
  collapse_all("initial");
  {
    NormContext ctx(r.marked, horizon);
    r.tot_norms.push_back(ctx.norm(NormKind::Tot));
  }
  while (true) {
    NormContext ctx(r.marked, horizon);
    auto search = search_reductive_pairs(ctx, enumerate_ideal_edges(r.marked.graph()), strict);
    for (const auto& w : search.warnings) r.log.push_back("warning: " + w);
    if (!search.best) break;
    if (r.steps >= max_steps) {
      throw BudgetExhausted("greedy descent exceeded " + std::to_string(max_steps) + " steps");
    }
    const auto pair = *search.best;
    std::string label = pair_name(r.marked.graph(), pair);
    r.marked = whitehead(r.marked, pair.edge.edges, pair.collapse_target);
    ++r.steps;
    collapse_all("after step " + std::to_string(r.steps));
    NormContext after(r.marked, horizon);
    auto out = after.norm(NormKind::Out);
    auto aut = after.norm(NormKind::Aut);
    auto tot = NormVector::concat(out, aut);
    if (compare(tot, r.tot_norms.back()) != Ordering::Less) {
      throw PropertyViolation("step " + std::to_string(r.steps) + " " + label + " did not lower the tot-norm");
    }
    r.tot_norms.push_back(tot);
    r.log.push_back("step " + std::to_string(r.steps) + ": " + label + " red_tot=" + brief(search.best_value.value) +
                    " norm_out=" + brief(out) + " norm_aut=" + brief(aut));
  }
  return r;
}

}  // namespace auter
