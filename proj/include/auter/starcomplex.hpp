#pragma once

// Ideal forests, the star complexes S(C), the families R, C0, C0', C1, the
// explicit poset retractions S(R) -> S(C1) -> S(C0') -> S(C0) -> point, and
// rational homology of order complexes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "auter/edgeset.hpp"
#include "auter/error.hpp"
#include "auter/idealedges.hpp"
#include "auter/moves.hpp"
#include "auter/norms.hpp"

namespace auter {

using Mask = unsigned __int128;

inline Mask bit(int i) { return Mask(1) << i; }

inline int popcount(Mask m) {
  return __builtin_popcountll(static_cast<std::uint64_t>(m)) + __builtin_popcountll(static_cast<std::uint64_t>(m >> 64));
}

inline bool is_submask(Mask a, Mask b) { return (a & ~b) == 0; }

inline std::vector<int> mask_members(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 128 && m; ++i) {
    if (m & bit(i)) {
      out.push_back(i);
      m &= ~bit(i);
    }
  }
  return out;
}

enum class Family { R, C0, C0p, C1 };

inline Family parse_family(const std::string& s) {
  if (s == "R") return Family::R;
  if (s == "C0") return Family::C0;
  if (s == "C0p") return Family::C0p;
  if (s == "C1") return Family::C1;
  throw ValidationError("unknown family '" + s + "'");
}

/// Everything the star machinery needs about one reduced marked G-graph:
/// ideal edge orbits (indexed by position), their tot-reductivity, pairwise
/// compatibility, and the maximally reductive pair (mu, m).
class StarContext {
 public:
  StarContext(const MarkedGGraph& m, int horizon, bool strict = false)
      : marked_(m), norms_(marked_, horizon), edges_(enumerate_ideal_edges(marked_.graph())) {
    const auto& g = graph();
    if (edges_.size() > 128) throw ValidationError("more than 128 ideal edge orbits");
    const int n = size();
    for (const auto& e : edges_) {
      reductive_.push_back(is_reductive(norms_, e, NormKind::Tot));
      inverse_.push_back(-1);
    }
    for (int i = 0; i < n; ++i) {
      if (auto inv = inverse_edge(g, edges_[i])) inverse_[i] = index_of(inv->edges).value();
    }
    compat_.assign(n, std::vector<char>(n, 0));
    precompat_.assign(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        compat_[i][j] = compat_[j][i] = compatible(g, edges_[i], edges_[j]);
        precompat_[i][j] = precompat_[j][i] = pre_compatible(g, edges_[i], edges_[j]);
      }
    }
    search_ = search_reductive_pairs(norms_, edges_, strict);
    if (search_.best) {
      mu_ = index_of(search_.best->edge.edges).value();
      m_ = search_.best->collapse_target;
    }
  }

  const MarkedGGraph& marked() const noexcept { return marked_; }
  const GGraph& graph() const noexcept { return marked_.graph(); }
  const NormContext& norms() const noexcept { return norms_; }
  const std::vector<IdealEdge>& edges() const noexcept { return edges_; }
  const IdealEdge& edge(int i) const { return edges_.at(i); }
  int size() const noexcept { return static_cast<int>(edges_.size()); }
  const PairSearch& pair_search() const noexcept { return search_; }

  bool reductive(int i) const { return reductive_.at(i); }
  bool compatible_at(int i, int j) const { return compat_[i][j]; }
  bool pre_compatible_at(int i, int j) const { return precompat_[i][j]; }
  std::optional<int> inverse_of(int i) const {
    return inverse_[i] < 0 ? std::nullopt : std::optional<int>(inverse_[i]);
  }
  bool at_basepoint(int i) const { return edges_[i].vertex == graph().basepoint(); }

  std::optional<int> mu() const { return mu_; }
  int m() const { return m_; }

  std::optional<int> index_of(const EdgeSet& s) const {
    if (!is_ideal_edge(graph(), s)) return std::nullopt;
    auto c = canonical_translate(graph(), s);
    for (int i = 0; i < size(); ++i) {
      if (edges_[i].edges == c) return i;
    }
    return std::nullopt;
  }

  std::string name(int i) const { return ideal_edge_name(graph(), edges_.at(i)); }

  std::string names(const std::vector<int>& c) const {
    std::string s = "{";
    for (std::size_t k = 0; k < c.size(); ++k) s += (k ? ", " : "") + name(c[k]);
    return s + "}";
  }

  std::string forest_name(Mask f) const { return names(mask_members(f)); }

  std::vector<int> family(Family which) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      if (in_family(i, which)) out.push_back(i);
    }
    return out;
  }

  bool in_family(int i, Family which) const {
    if (!reductive(i)) return false;
    if (which == Family::R) return true;
    if (!mu_) throw HypothesisError("no maximally reductive pair: families C0, C0', C1 are undefined");
    if (compatible_at(i, *mu_)) return true;
    if (which == Family::C0) return false;
    const auto& e = edges_[i];
    if (e.stab == graph().vertex_stabilizer(e.vertex)) return true;
    if (which == Family::C0p) return false;
    return contains(graph().orbit_union(e.edges), m_) && crossing(graph(), e, edges_[*mu_]).count == 1;
  }

  /// C together with the inverses of its invertible members away from the
  /// basepoint.
  std::vector<int> plus_minus(const std::vector<int>& c) const {
    std::set<int> out(c.begin(), c.end());
    for (int i : c) {
      if (!at_basepoint(i) && inverse_[i] >= 0) out.insert(inverse_[i]);
    }
    return {out.begin(), out.end()};
  }

  /// Orbits whose pairwise relation is allowed inside one ideal forest:
  /// compatible at the basepoint, pre-compatible away from it; an edge at the
  /// basepoint and one elsewhere never interfere.
  bool forest_pair_ok(int i, int j) const {
    bool bi = at_basepoint(i);
    bool bj = at_basepoint(j);
    if (bi && bj) return compat_[i][j];
    if (!bi && !bj) return precompat_[i][j];
    return true;
  }

  bool is_forest(Mask f) const {
    if (f == 0) return false;
    auto mem = mask_members(f);
    for (std::size_t a = 0; a < mem.size(); ++a) {
      for (std::size_t b = a + 1; b < mem.size(); ++b) {
        if (!forest_pair_ok(mem[a], mem[b])) return false;
      }
      int i = mem[a];
      if (!at_basepoint(i) && inverse_[i] >= 0 && !(f & bit(inverse_[i]))) return false;
    }
    return true;
  }

  /// All nonempty ideal forests whose orbits lie in c, sorted by (size, mask).
  std::vector<Mask> forests(const std::vector<int>& c, std::size_t limit = 2000000) const {
    std::vector<Mask> out;
    std::vector<int> chosen;
    std::function<void(std::size_t, Mask)> rec = [&](std::size_t from, Mask cur) {
      if (cur != 0 && closed(cur)) {
        out.push_back(cur);
        if (out.size() > limit) throw ValidationError("too many ideal forests");
      }
      for (std::size_t k = from; k < c.size(); ++k) {
        int i = c[k];
        bool ok = true;
        for (int j : chosen) {
          if (!forest_pair_ok(i, j)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        chosen.push_back(i);
        rec(k + 1, cur | bit(i));
        chosen.pop_back();
      }
    };
    rec(0, 0);
    std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
      int pa = popcount(a);
      int pb = popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    return out;
  }

 private:
  bool closed(Mask f) const {
    for (int i : mask_members(f)) {
      if (!at_basepoint(i) && inverse_[i] >= 0 && !(f & bit(inverse_[i]))) return false;
    }
    return true;
  }

  MarkedGGraph marked_;
  NormContext norms_;
  std::vector<IdealEdge> edges_;
  std::vector<char> reductive_;
  std::vector<int> inverse_;
  std::vector<std::vector<char>> compat_;
  std::vector<std::vector<char>> precompat_;
  PairSearch search_;
  std::optional<int> mu_;
  int m_ = -1;
};

inline std::vector<Mask> enumerate_ideal_forests(const StarContext& ctx, const std::vector<int>& restrict_to) {
  return ctx.forests(restrict_to);
}

// --- simplicial complexes ------------------------------------------------------

struct SimplicialComplex {
  std::vector<std::string> labels;
  /// Every nonempty face, each sorted, grouped by dimension.
  std::vector<std::vector<std::vector<int>>> faces;

  int vertex_count() const { return static_cast<int>(labels.size()); }
  int dimension() const { return static_cast<int>(faces.size()) - 1; }

  std::size_t face_count() const {
    std::size_t n = 0;
    for (const auto& f : faces) n += f.size();
    return n;
  }

  std::vector<std::vector<int>> maximal_faces() const {
    std::set<std::vector<int>> covered;
    for (std::size_t d = 1; d < faces.size(); ++d) {
      for (const auto& f : faces[d]) {
        for (std::size_t k = 0; k < f.size(); ++k) {
          auto g = f;
          g.erase(g.begin() + static_cast<std::ptrdiff_t>(k));
          covered.insert(g);
        }
      }
    }
    std::vector<std::vector<int>> out;
    for (const auto& layer : faces) {
      for (const auto& f : layer) {
        if (!covered.count(f)) out.push_back(f);
      }
    }
    return out;
  }

  /// Builds the complex spanned by the given faces and all their subfaces.
  static SimplicialComplex from_faces(std::vector<std::string> labels, const std::vector<std::vector<int>>& generators) {
    SimplicialComplex k;
    k.labels = std::move(labels);
    std::set<std::vector<int>> all;
    for (auto f : generators) {
      std::sort(f.begin(), f.end());
      const std::size_t n = f.size();
      if (n > 20) throw ValidationError("face too large");
      for (unsigned long sub = 1; sub < (1ul << n); ++sub) {
        std::vector<int> s;
        for (std::size_t i = 0; i < n; ++i) {
          if (sub & (1ul << i)) s.push_back(f[i]);
        }
        all.insert(std::move(s));
      }
    }
    for (const auto& f : all) {
      if (k.faces.size() < f.size()) k.faces.resize(f.size());
      k.faces[f.size() - 1].push_back(f);
    }
    return k;
  }
};

/// A finite poset given by its elements and a reflexive order relation.
struct Poset {
  std::vector<std::string> labels;
  std::vector<std::vector<char>> leq;

  int size() const { return static_cast<int>(labels.size()); }
  bool less(int a, int b) const { return a != b && leq[a][b]; }

  Poset restricted(const std::vector<int>& keep) const {
    Poset p;
    for (int i : keep) p.labels.push_back(labels[i]);
    p.leq.assign(keep.size(), std::vector<char>(keep.size(), 0));
    for (std::size_t a = 0; a < keep.size(); ++a) {
      for (std::size_t b = 0; b < keep.size(); ++b) p.leq[a][b] = leq[keep[a]][keep[b]];
    }
    return p;
  }
};

inline Poset forest_poset(const StarContext& ctx, const std::vector<Mask>& forests) {
  Poset p;
  for (Mask f : forests) p.labels.push_back(ctx.forest_name(f));
  const std::size_t n = forests.size();
  p.leq.assign(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) p.leq[a][b] = is_submask(forests[a], forests[b]);
  }
  return p;
}

/// Removes beat points (an element whose strict up-set has a minimum or whose
/// strict down-set has a maximum) until none is left. The order complex keeps
/// its homotopy type; a one-element core means the complex is contractible.
inline Poset poset_core(const Poset& p) {
  std::vector<int> alive(p.size());
  for (int i = 0; i < p.size(); ++i) alive[i] = i;
  bool changed = true;
  while (changed && alive.size() > 1) {
    changed = false;
    for (std::size_t k = 0; k < alive.size(); ++k) {
      int x = alive[k];
      std::vector<int> up;
      std::vector<int> down;
      for (int y : alive) {
        if (p.less(x, y)) up.push_back(y);
        if (p.less(y, x)) down.push_back(y);
      }
      auto has_min = [&](const std::vector<int>& s) {
        for (int a : s) {
          if (std::all_of(s.begin(), s.end(), [&](int b) { return p.leq[a][b]; })) return true;
        }
        return false;
      };
      auto has_max = [&](const std::vector<int>& s) {
        for (int a : s) {
          if (std::all_of(s.begin(), s.end(), [&](int b) { return p.leq[b][a]; })) return true;
        }
        return false;
      };
      if ((!up.empty() && has_min(up)) || (!down.empty() && has_max(down))) {
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  return p.restricted(alive);
}

/// Order complex: vertices are poset elements, faces are chains.
inline SimplicialComplex order_complex(const Poset& p, std::size_t limit = 2000000) {
  SimplicialComplex k;
  k.labels = p.labels;
  std::vector<int> chain;
  std::size_t count = 0;
  std::function<void(int)> extend = [&](int top) {
    if (k.faces.size() < chain.size()) k.faces.resize(chain.size());
    k.faces[chain.size() - 1].push_back(chain);
    if (++count > limit) throw ValidationError("order complex too large");
    for (int y = 0; y < p.size(); ++y) {
      if (p.less(top, y)) {
        chain.push_back(y);
        extend(y);
        chain.pop_back();
      }
    }
  };
  for (int x = 0; x < p.size(); ++x) {
    chain = {x};
    extend(x);
  }
  for (auto& layer : k.faces) {
    for (auto& f : layer) std::sort(f.begin(), f.end());
    std::sort(layer.begin(), layer.end());
  }
  return k;
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using SparseColumn = std::map<int, BigInt>;

/// Rank over Q of a sparse integer matrix given by columns, by exact
/// column reduction on the largest row index.
inline std::size_t rational_rank(std::vector<SparseColumn> cols) {
  std::map<int, SparseColumn> pivots;
  for (auto& c : cols) {
    while (!c.empty()) {
      auto [row, val] = *c.rbegin();
      auto it = pivots.find(row);
      if (it == pivots.end()) {
        pivots.emplace(row, std::move(c));
        break;
      }
      const BigInt pv = it->second.at(row);
      const BigInt cv = val;
      SparseColumn next;
      for (const auto& [r, x] : c) next[r] += x * pv;
      for (const auto& [r, x] : it->second) next[r] -= x * cv;
      BigInt g = 0;
      for (auto i = next.begin(); i != next.end();) {
        if (i->second == 0) {
          i = next.erase(i);
        } else {
          g = boost::multiprecision::gcd(g, i->second);
          ++i;
        }
      }
      if (g > 1) {
        for (auto& [r, x] : next) x /= g;
      }
      c = std::move(next);
    }
  }
  return pivots.size();
}

}  // namespace detail

/// Reduced Betti numbers over Q, one per dimension 0..dim.
inline std::vector<long> reduced_homology(const SimplicialComplex& k) {
  const int dim = k.dimension();
  if (dim < 0) return {};
  std::vector<std::map<std::vector<int>, int>> index(dim + 1);
  for (int d = 0; d <= dim; ++d) {
    for (std::size_t i = 0; i < k.faces[d].size(); ++i) index[d][k.faces[d][i]] = static_cast<int>(i);
  }
  // rank[d] = rank of the boundary from d-faces to (d-1)-faces; the
  // augmentation gives rank[0] = 1.
  std::vector<std::size_t> rank(dim + 2, 0);
  rank[0] = k.faces[0].empty() ? 0 : 1;
  for (int d = 1; d <= dim; ++d) {
    std::vector<detail::SparseColumn> cols;
    for (const auto& f : k.faces[d]) {
      detail::SparseColumn c;
      for (std::size_t i = 0; i < f.size(); ++i) {
        auto g = f;
        g.erase(g.begin() + static_cast<std::ptrdiff_t>(i));
        c[index[d - 1].at(g)] = (i % 2 == 0) ? 1 : -1;
      }
      cols.push_back(std::move(c));
    }
    rank[d] = detail::rational_rank(std::move(cols));
  }
  std::vector<long> betti;
  for (int d = 0; d <= dim; ++d) {
    betti.push_back(static_cast<long>(k.faces[d].size()) - static_cast<long>(rank[d]) -
                    static_cast<long>(rank[d + 1]));
  }
  return betti;
}

struct StarComplex {
  std::vector<int> orbits;
  std::vector<Mask> forests;
  Poset poset;
  Poset core;
  /// Order complex of the core (homotopy equivalent to S(C)).
  SimplicialComplex complex;
};

/// S(C) as the order complex of its forest poset, reduced to the poset core
/// before the chains are listed.
inline StarComplex star_complex(const StarContext& ctx, const std::vector<int>& c) {
  StarComplex s;
  s.orbits = c;
  s.forests = ctx.forests(c);
  s.poset = forest_poset(ctx, s.forests);
  s.core = poset_core(s.poset);
  s.complex = order_complex(s.core);
  return s;
}

inline std::string hasse_dot(const Poset& p, const std::string& name = "forests") {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (int i = 0; i < p.size(); ++i) out << "  n" << i << " [label=\"" << p.labels[i] << "\"];\n";
  for (int a = 0; a < p.size(); ++a) {
    for (int b = 0; b < p.size(); ++b) {
      if (!p.less(a, b)) continue;
      bool cover = true;
      for (int c = 0; c < p.size() && cover; ++c) {
        if (p.less(a, c) && p.less(c, b)) cover = false;
      }
      if (cover) out << "  n" << a << " -> n" << b << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

// --- forest blow-up --------------------------------------------------------------

struct ForestBlowUp {
  MarkedGGraph marked;
  /// For each orbit of the forest, the directed id of one new edge e(alpha)
  /// in the blown-up graph (inverse pairs away from the basepoint share one).
  std::map<int, int> new_edge;
  std::map<int, InvariantForest> new_edge_orbit;
};

/// Blows up every orbit of an ideal forest. An inverse pair away from the
/// basepoint gives a single new edge orbit; the side is chosen so that all
/// blown-up sets are nested or disjoint.
inline ForestBlowUp blow_up_forest(const StarContext& ctx, Mask forest) {
  const auto& g = ctx.graph();
  auto members = mask_members(forest);
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  std::set<int> seen;
  for (int i : members) {
    if (seen.count(i)) continue;
    auto inv = ctx.inverse_of(i);
    if (!ctx.at_basepoint(i) && inv && forest & bit(*inv)) {
      pairs.emplace_back(i, *inv);
      seen.insert(i);
      seen.insert(*inv);
    } else {
      singles.push_back(i);
      seen.insert(i);
    }
  }
  std::optional<std::vector<int>> chosen;
  for (unsigned long side = 0; side < (1ul << pairs.size()) && !chosen; ++side) {
    std::vector<int> pick = singles;
    for (std::size_t k = 0; k < pairs.size(); ++k) pick.push_back((side >> k) & 1 ? pairs[k].second : pairs[k].first);
    bool ok = true;
    for (std::size_t a = 0; a < pick.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < pick.size() && ok; ++b) {
        ok = ctx.compatible_at(pick[a], pick[b]) &&
             (orbit_contained(g, ctx.edge(pick[a]).edges, ctx.edge(pick[b]).edges) ||
              orbit_contained(g, ctx.edge(pick[b]).edges, ctx.edge(pick[a]).edges) ||
              orbits_disjoint(g, ctx.edge(pick[a]).edges, ctx.edge(pick[b]).edges));
      }
    }
    if (ok) chosen = pick;
  }
  if (!chosen) throw PropertyViolation("ideal forest " + ctx.forest_name(forest) + " has no nested orientation");

  std::map<int, EdgeSet> current;
  for (int i : *chosen) current[i] = ctx.edge(i).edges;
  ForestBlowUp r;
  r.marked = ctx.marked();
  std::set<int> done;
  while (done.size() < chosen->size()) {
    int next = -1;
    for (int i : *chosen) {
      if (done.count(i)) continue;
      if (next < 0 || current[i].size() < current[next].size()) next = i;
    }
    auto bu = blow_up(r.marked, current[next]);
    done.insert(next);
    r.new_edge[next] = bu.new_edges.front();
    r.new_edge_orbit[next] = bu.new_edge_forest();
    for (int i : *chosen) {
      if (done.count(i)) continue;
      EdgeSet s = current[i];
      bool inside = false;
      EdgeSet swallowed;
      std::vector<int> added;
      for (std::size_t j = 0; j < bu.translates.size(); ++j) {
        const auto& t = bu.translates[j];
        if (is_subset(s, t) && s != t) {
          inside = true;
        } else if (is_subset(t, s)) {
          swallowed = set_union(swallowed, t);
          added.push_back(bu.new_edges[j]);
        }
      }
      if (!inside) current[i] = set_union(set_difference(s, swallowed), make_set(added));
    }
    r.marked = bu.marked;
  }
  for (const auto& [a, b] : pairs) {
    int owner = r.new_edge.count(a) ? a : b;
    r.new_edge[a == owner ? b : a] = r.new_edge[owner];
    r.new_edge_orbit[a == owner ? b : a] = r.new_edge_orbit[owner];
  }
  return r;
}

// --- retractions -------------------------------------------------------------------

struct RetractionStep {
  std::string lemma;
  std::string action;
  int forests_before = 0;
  int forests_after = 0;
};

enum class TraceStatus { Contracted, SinglePoint, OutOfScope, NoReductiveEdge };

inline std::string trace_status_name(TraceStatus s) {
  switch (s) {
    case TraceStatus::Contracted:
      return "contracted";
    case TraceStatus::SinglePoint:
      return "single-point";
    case TraceStatus::OutOfScope:
      return "out-of-scope";
    case TraceStatus::NoReductiveEdge:
      return "no-reductive-edge";
  }
  return "?";
}

struct RetractionTrace {
  TraceStatus status = TraceStatus::NoReductiveEdge;
  std::string note;
  std::vector<RetractionStep> steps;
  std::vector<std::string> warnings;
  /// Reduced Betti numbers of every intermediate S(C), when requested.
  std::vector<std::vector<long>> homology;
  Mask final_forest = 0;
};

namespace detail {

class Retractor {
 public:
  Retractor(const StarContext& ctx, bool with_homology) : ctx_(ctx), homology_(with_homology) {
    mu_ = *ctx.mu();
    m_ = ctx.m();
    mu_orbit_ = ctx.graph().orbit_union(ctx.edge(mu_).edges);
  }

  RetractionTrace run() {
    const auto& g = ctx_.graph();
    const auto& mu = ctx_.edge(mu_);
    if (mu.vertex != g.basepoint()) {
      trace_.status = TraceStatus::OutOfScope;
      trace_.note = "maximal pair is not at the basepoint";
      return trace_;
    }
    auto r = ctx_.family(Family::R);
    if (ctx_.plus_minus(r) != r) trace_.warnings.push_back("R is not closed under inverses away from the basepoint");
    gamma_ = find_gamma();
    if (gamma_ && *gamma_ == mu_) {
      if (r != std::vector<int>{mu_}) {
        fail("mu = gamma but R = " + ctx_.names(r) + " has other members");
      }
      trace_.status = TraceStatus::SinglePoint;
      trace_.note = "mu is the conjugating edge; R = {mu}";
      trace_.final_forest = bit(mu_);
      record_homology(r);
      return trace_;
    }
    std::set<int> c(r.begin(), r.end());
    record_homology(c);
    shrink_to_c1(c);
    push_to_c0p(c);
    finish(c);
    trace_.status = TraceStatus::Contracted;
    return trace_;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw PropertyViolation("retraction: " + what); }

  std::optional<int> find_gamma() const {
    const auto& g = ctx_.graph();
    std::optional<int> found;
    for (int i : ctx_.family(Family::R)) {
      const auto& e = ctx_.edge(i);
      if (e.vertex == g.basepoint() && static_cast<int>(e.stab.size()) == g.group().order() &&
          !ctx_.inverse_of(i)) {
        if (found) fail("two non-invertible full-stabilizer reductive edges at the basepoint");
        found = i;
      }
    }
    return found;
  }

  EdgeSet translate_containing(int i, int d) const {
    for (const auto& t : ctx_.graph().set_orbit(ctx_.edge(i).edges)) {
      if (contains(t, d)) return t;
    }
    return {};
  }

  int meet_orbit_mu(int i) const {
    return static_cast<int>(set_intersection(ctx_.edge(i).edges, mu_orbit_).size());
  }

  bool strictly_inside(int a, int b) const {
    return a != b && orbit_contained(ctx_.graph(), ctx_.edge(a).edges, ctx_.edge(b).edges);
  }

  /// Best candidate by `key` (smaller first), then minimal (or maximal) by
  /// orbit inclusion among the best.
  template <class Key>
  int choose(const std::vector<int>& cand, Key key, bool minimal_inclusion) const {
    if (cand.empty()) fail("no candidate to remove");
    auto best = key(cand.front());
    for (int i : cand) best = std::min(best, key(i));
    std::vector<int> tied;
    for (int i : cand) {
      if (key(i) == best) tied.push_back(i);
    }
    for (int i : tied) {
      bool extreme = true;
      for (int j : tied) {
        if (minimal_inclusion ? strictly_inside(j, i) : strictly_inside(i, j)) extreme = false;
      }
      if (extreme) return i;
    }
    return tied.front();
  }

  std::optional<int> reductive_orbit(const EdgeSet& s) const {
    auto i = ctx_.index_of(s);
    if (i && ctx_.reductive(*i)) return i;
    return std::nullopt;
  }

  /// One Poset-Lemma round: f adds `add` to every forest meeting `trigger`,
  /// g deletes `remove`. Checks the Poset-Lemma side conditions and that the
  /// image of g o f is exactly S(C - remove).
  void substitute(std::set<int>& c, const std::string& lemma, Mask trigger, int add, Mask remove) {
    std::vector<int> cv(c.begin(), c.end());
    auto before = ctx_.forests(cv);
    std::set<Mask> domain(before.begin(), before.end());
    auto f = [&](Mask phi) { return (phi & trigger) ? (phi | bit(add)) : phi; };
    auto gmap = [&](Mask psi) { return psi & ~remove; };
    std::set<Mask> image_f;
    for (Mask phi : before) {
      Mask fp = f(phi);
      if (!domain.count(fp)) fail(lemma + ": f(" + ctx_.forest_name(phi) + ") = " + ctx_.forest_name(fp) + " is not in S(C)");
      if (!is_submask(phi, fp)) fail(lemma + ": f does not contain its argument");
      image_f.insert(fp);
    }
    check_monotone(before, f, lemma + ": f");
    std::vector<Mask> fi(image_f.begin(), image_f.end());
    std::set<Mask> image_g;
    for (Mask psi : fi) {
      Mask gp = gmap(psi);
      if (gp == 0 || !image_f.count(gp)) {
        fail(lemma + ": g(" + ctx_.forest_name(psi) + ") = " + ctx_.forest_name(gp) + " leaves f(S(C))");
      }
      if (!is_submask(gp, psi)) fail(lemma + ": g is not below the identity");
      image_g.insert(gp);
    }
    check_monotone(fi, gmap, lemma + ": g");
    std::vector<int> rest;
    for (int i : cv) {
      if (!(remove & bit(i))) rest.push_back(i);
    }
    auto after = ctx_.forests(rest);
    if (std::set<Mask>(after.begin(), after.end()) != image_g) {
      fail(lemma + ": image of g o f differs from S(C - removed)");
    }
    RetractionStep step;
    step.lemma = lemma;
    step.action = "add " + ctx_.name(add) + " where " + ctx_.forest_name(trigger) + " occurs; remove " +
                  ctx_.forest_name(remove);
    step.forests_before = static_cast<int>(before.size());
    step.forests_after = static_cast<int>(after.size());
    trace_.steps.push_back(step);
    c = std::set<int>(rest.begin(), rest.end());
    record_homology(c);
  }

  template <class F>
  void check_monotone(const std::vector<Mask>& dom, F f, const std::string& what) const {
    for (Mask a : dom) {
      for (Mask b : dom) {
        if (a != b && is_submask(a, b) && !is_submask(f(a), f(b))) {
          fail(what + " is not monotone at " + ctx_.forest_name(a) + " <= " + ctx_.forest_name(b));
        }
      }
    }
  }

  /// Every beta in `over` related to `from` (compatible, or pre-compatible
  /// when `pre`) must be compatible with `to`.
  void check_transfer(const std::string& claim, const std::set<int>& over, int from, int to, bool pre) const {
    for (int b : over) {
      bool related = pre ? ctx_.pre_compatible_at(b, from) : ctx_.compatible_at(b, from);
      if (related && !ctx_.compatible_at(b, to)) {
        fail(claim + ": " + ctx_.name(b) + " is compatible with " + ctx_.name(from) + " but not with " +
             ctx_.name(to));
      }
    }
  }

  void record_homology(const std::set<int>& c) { record_homology(std::vector<int>(c.begin(), c.end())); }

  void record_homology(const std::vector<int>& c) {
    if (!homology_) return;
    auto s = star_complex(ctx_, c);
    trace_.homology.push_back(reduced_homology(s.complex));
  }

  std::set<int> family_set(Family f) const {
    auto v = ctx_.family(f);
    return {v.begin(), v.end()};
  }

  // S(R) -> S(C1): shrink alpha to a piece compatible with mu.
  void shrink_to_c1(std::set<int>& c) {
    const auto c1 = family_set(Family::C1);
    while (true) {
      std::vector<int> cand;
      for (int i : c) {
        if (!c1.count(i)) cand.push_back(i);
      }
      if (cand.empty()) break;
      int a = choose(cand, [&](int i) { return meet_orbit_mu(i); }, true);
      const auto& alpha = ctx_.edge(a);
      auto cr = crossing(ctx_.graph(), alpha, ctx_.edge(mu_));
      auto m_orbit = ctx_.graph().orbit(m_).members;
      EdgeSet beta = alpha.edges;
      std::vector<EdgeSet> options;
      for (const auto& comp : cr.components) {
        if (comp.empty() || intersects(comp, m_orbit)) continue;
        beta = set_difference(beta, comp);
        options.push_back(comp);
      }
      options.insert(options.begin(), beta);
      std::optional<int> a0;
      for (const auto& s : options) {
        auto i = reductive_orbit(s);
        if (i && c.count(*i) && ctx_.compatible_at(*i, mu_)) {
          a0 = i;
          break;
        }
      }
      if (!a0) fail("shrinking gave no reductive piece of " + ctx_.name(a) + " compatible with mu");
      check_transfer("compatibility transfer (shrinking)", c, a, *a0, false);
      substitute(c, "S(R)->S(C1) removing " + ctx_.name(a), bit(a), *a0, bit(a));
    }
  }

  // S(C1) -> S(C0'): push alpha onto alpha & mu or alpha - mu.
  void push_to_c0p(std::set<int>& c) {
    const auto c0p = family_set(Family::C0p);
    while (true) {
      std::vector<int> cand;
      for (int i : c) {
        if (!c0p.count(i)) cand.push_back(i);
      }
      if (cand.empty()) break;
      int a = choose(cand, [&](int i) { return meet_orbit_mu(i); }, true);
      auto alpha = translate_containing(a, m_);
      if (alpha.empty()) fail(ctx_.name(a) + " has no translate containing m");
      const auto& mu = ctx_.edge(mu_).edges;
      std::optional<int> a0;
      for (const auto& s : {set_intersection(alpha, mu), set_difference(alpha, mu)}) {
        auto i = reductive_orbit(s);
        if (i && c.count(*i) && ctx_.compatible_at(*i, mu_)) {
          a0 = i;
          break;
        }
      }
      if (!a0) fail("pushing gave neither alpha & mu nor alpha - mu reductive for " + ctx_.name(a));
      check_transfer("compatibility transfer (pushing)", c, a, *a0, false);
      substitute(c, "S(C1)->S(C0') removing " + ctx_.name(a), bit(a), *a0, bit(a));
    }
  }

  void finish(std::set<int>& c) {
    const bool mu_invertible = ctx_.inverse_of(mu_).has_value();
    const bool gamma_crosses_mu = gamma_ && !ctx_.compatible_at(*gamma_, mu_);
    std::string lemma;
    if (mu_invertible && gamma_crosses_mu) {
      lemma = "mu invertible, gamma not compatible";
    } else if (mu_invertible) {
      lemma = "mu invertible, gamma compatible or absent";
    } else {
      lemma = "mu not invertible";
    }
    const auto c0 = family_set(Family::C0);
    std::set<int> keep = c0;
    if (gamma_crosses_mu) keep.insert(*gamma_);
    const auto& mu = ctx_.edge(mu_).edges;

    while (true) {
      std::vector<int> cand;
      for (int i : c) {
        if (!keep.count(i)) cand.push_back(i);
      }
      if (cand.empty()) break;
      std::vector<int> with_m;
      for (int i : cand) {
        if (!translate_containing(i, m_).empty()) with_m.push_back(i);
      }
      if (with_m.empty()) {
        // Every remaining edge misses m; its inverse then lies inside mu and
        // replaces it.
        std::vector<int> swap;
        for (int i : cand) {
          auto inv = ctx_.inverse_of(i);
          if (inv && c.count(*inv) && ctx_.compatible_at(*inv, mu_)) swap.push_back(i);
        }
        if (swap.empty()) fail(lemma + ": no remaining edge contains a translate of m");
        int a = choose(swap, [](int) { return 0; }, false);
        int ai = *ctx_.inverse_of(a);
        check_transfer("compatibility transfer (inverse inside mu)", c, a, ai, false);
        substitute(c, lemma + ": replace " + ctx_.name(a) + " by its inverse inside mu", bit(a), ai, bit(a));
        continue;
      }
      auto key = [&](int i) {
        auto t = translate_containing(i, m_);
        return -static_cast<int>(mu_invertible ? set_intersection(t, mu).size()
                                               : set_intersection(t, mu_orbit_).size());
      };
      int a = choose(with_m, key, false);
      auto alpha = translate_containing(a, m_);
      auto inv = ctx_.inverse_of(a);
      if (!inv) fail(lemma + ": " + ctx_.name(a) + " is not invertible");
      int ai = *inv;
      if (!c.count(ai)) fail(lemma + ": inverse of " + ctx_.name(a) + " is not in C");

      if (mu_invertible && ctx_.compatible_at(ai, mu_)) {
        // alpha^-1 lies inside mu: replace alpha by its inverse.
        check_transfer("compatibility transfer (inverse)", c, a, ai, false);
        substitute(c, lemma + ": replace " + ctx_.name(a) + " by its inverse", bit(a), ai, bit(a));
        continue;
      }
      std::optional<int> a0;
      bool union_case = false;
      if (mu_invertible) {
        if (auto i = reductive_orbit(set_difference(mu, alpha)); i && c.count(*i)) {
          a0 = i;
        } else if (auto j = reductive_orbit(set_union(alpha, mu)); j && c.count(*j)) {
          a0 = j;
          union_case = true;
        }
      } else {
        EdgeSet grown = set_union(alpha, mu_orbit_);
        if (auto j = reductive_orbit(grown); j && c.count(*j)) {
          a0 = j;
          union_case = true;
        }
      }
      if (!a0) fail(lemma + ": pushing gave no reductive replacement for " + ctx_.name(a));
      if (!union_case) {
        check_transfer("pre-compatibility transfer", c, a, *a0, true);
        check_transfer("pre-compatibility transfer", c, ai, *a0, true);
        substitute(c, lemma + ": replace " + ctx_.name(a) + " and its inverse by " + ctx_.name(*a0),
                   bit(a) | bit(ai), *a0, bit(a) | bit(ai));
        continue;
      }
      auto a0i = ctx_.inverse_of(*a0);
      if (!a0i || !c.count(*a0i)) fail(lemma + ": " + ctx_.name(*a0) + " has no inverse in C");
      check_transfer("compatibility transfer (inverse side)", c, ai, *a0i, false);
      substitute(c, lemma + ": replace " + ctx_.name(ai) + " by " + ctx_.name(*a0i), bit(ai), *a0i, bit(ai));
      std::set<int> rest = c;
      check_transfer("compatibility transfer", rest, a, *a0, false);
      substitute(c, lemma + ": replace " + ctx_.name(a) + " by " + ctx_.name(*a0), bit(a), *a0, bit(a));
    }

    if (gamma_crosses_mu && c.count(*gamma_)) {
      auto mui = ctx_.inverse_of(mu_);
      if (!mui || !c.count(*mui)) fail("inverse of mu is not in C0");
      check_transfer("compatibility transfer (gamma)", c, *gamma_, *mui, false);
      substitute(c, "replace gamma by the inverse of mu", bit(*gamma_), *mui, bit(*gamma_));
    }

    // S(C0) to a point: add mu everywhere, then drop everything else.
    Mask everything = 0;
    for (int i : c) everything |= bit(i);
    substitute(c, "cone to mu", everything, mu_, everything & ~bit(mu_));
    if (c != std::set<int>{mu_}) fail("final family is not {mu}");
    trace_.final_forest = bit(mu_);
  }

  const StarContext& ctx_;
  bool homology_;
  int mu_ = -1;
  int m_ = -1;
  EdgeSet mu_orbit_;
  std::optional<int> gamma_;
  RetractionTrace trace_;
};

}  // namespace detail

/// Runs the explicit retractions of S(R) down to a single forest, checking
/// every Poset-Lemma side condition on every forest. Failures raise
/// PropertyViolation naming the offending forest or edge.
inline RetractionTrace run_retractions(const StarContext& ctx, bool with_homology = false) {
  if (!ctx.mu() || ctx.family(Family::R).empty()) {
    RetractionTrace t;
    t.status = TraceStatus::NoReductiveEdge;
    t.note = "no reductive ideal edge";
    return t;
  }
  return detail::Retractor(ctx, with_homology).run();
}

}  // namespace auter
