#pragma once

// The out/aut/tot norms of a marked G-graph, edge absolute values |e|, turn
// counts (A.B) and set absolute values |C|, all truncated at a horizon.
//
// Coordinates are indexed by enumerate_classes (out), enumerate_words (aut),
// or their concatenation out-then-aut (tot). For each coordinate the paths
// (aut) or cyclic loops (out) of x*w for every x in G are scanned once and
// summarized as
//   ends[d]  = number of step ends equal to d, i.e. occurrences of d or ~d,
//   turns    = consecutive step pairs s, t seen as the unordered end pair
//              {s, ~t} at the vertex between them (cyclically for out).
// With those, |e| = ends[e], (A.B) counts turns with one end in A and the
// other in B, and |C| = sum_{e in C} |e| - 2 (turns with both ends in C).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "auter/edgeset.hpp"
#include "auter/error.hpp"
#include "auter/freegroup.hpp"
#include "auter/marking.hpp"

namespace auter {

enum class NormKind { Out, Aut, Tot };

inline std::string kind_name(NormKind k) {
  switch (k) {
    case NormKind::Out:
      return "out";
    case NormKind::Aut:
      return "aut";
    case NormKind::Tot:
      return "tot";
  }
  return "?";
}

inline NormKind parse_kind(const std::string& s) {
  if (s == "out") return NormKind::Out;
  if (s == "aut") return NormKind::Aut;
  if (s == "tot") return NormKind::Tot;
  throw ValidationError("unknown norm kind '" + s + "'");
}

/// The enumerations indexing norm coordinates for one (rank, horizon).
struct IndexSet {
  int rank = 0;
  int horizon = 0;
  std::vector<ConjClass> classes;
  std::vector<Word> words;

  std::size_t size(NormKind k) const {
    switch (k) {
      case NormKind::Out:
        return classes.size();
      case NormKind::Aut:
        return words.size();
      case NormKind::Tot:
        return classes.size() + words.size();
    }
    return 0;
  }

  std::string label(NormKind k, std::size_t i) const {
    if (k == NormKind::Out) return classes.at(i).to_string();
    if (k == NormKind::Aut) return words.at(i).to_string();
    return i < classes.size() ? classes[i].to_string() : words.at(i - classes.size()).to_string();
  }
};

/// Shared, immutable enumerations; built once per (rank, horizon).
inline const IndexSet& index_set(int rank, int horizon) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<IndexSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{rank, horizon}];
  if (!slot) {
    slot = std::make_unique<IndexSet>();
    slot->rank = rank;
    slot->horizon = horizon;
    slot->classes = enumerate_classes(rank, horizon);
    slot->words = enumerate_words(rank, horizon);
  }
  return *slot;
}

enum class Ordering { Less, Greater, EqualAtHorizon };

inline std::string ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Less:
      return "Less";
    case Ordering::Greater:
      return "Greater";
    case Ordering::EqualAtHorizon:
      return "EqualAtHorizon";
  }
  return "?";
}

/// Integer vector over a fixed index set. Norms and absolute values are
/// nonnegative; differences (reductivities) may be signed.
class NormVector {
 public:
  NormVector() = default;
  NormVector(NormKind kind, int rank, int horizon, std::vector<std::int64_t> coords)
      : kind_(kind), rank_(rank), horizon_(horizon), coords_(std::move(coords)) {}

  static NormVector zeros(NormKind kind, int rank, int horizon) {
    return NormVector(kind, rank, horizon, std::vector<std::int64_t>(index_set(rank, horizon).size(kind), 0));
  }

  NormKind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  int horizon() const noexcept { return horizon_; }
  const std::vector<std::int64_t>& coords() const noexcept { return coords_; }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const noexcept { return coords_.size(); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
  }

  /// Sign of the first nonzero coordinate (0 if none).
  int leading_sign() const {
    for (auto c : coords_) {
      if (c != 0) return c > 0 ? 1 : -1;
    }
    return 0;
  }

  bool all_nonnegative() const {
    return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c >= 0; });
  }

  bool same_index(const NormVector& o) const {
    return kind_ == o.kind_ && rank_ == o.rank_ && horizon_ == o.horizon_ && coords_.size() == o.coords_.size();
  }

  friend bool operator==(const NormVector&, const NormVector&) = default;

  NormVector operator+(const NormVector& o) const { return zip(o, 1); }
  NormVector operator-(const NormVector& o) const { return zip(o, -1); }
  NormVector scaled(std::int64_t k) const {
    auto c = coords_;
    for (auto& x : c) x *= k;
    return NormVector(kind_, rank_, horizon_, std::move(c));
  }

  /// Sub-vector for one factor of a tot vector.
  NormVector part(NormKind k) const {
    if (kind_ != NormKind::Tot || k == NormKind::Tot) {
      if (k != kind_) throw ValidationError("no " + kind_name(k) + " part in a " + kind_name(kind_) + " vector");
      return *this;
    }
    const auto& idx = index_set(rank_, horizon_);
    auto split = coords_.begin() + static_cast<std::ptrdiff_t>(idx.classes.size());
    std::vector<std::int64_t> c = (k == NormKind::Out) ? std::vector<std::int64_t>(coords_.begin(), split)
                                                       : std::vector<std::int64_t>(split, coords_.end());
    return NormVector(k, rank_, horizon_, std::move(c));
  }

  static NormVector concat(const NormVector& out, const NormVector& aut) {
    auto c = out.coords();
    c.insert(c.end(), aut.coords().begin(), aut.coords().end());
    return NormVector(NormKind::Tot, out.rank(), out.horizon(), std::move(c));
  }

  /// `kind h=H : [c1, c2, ...]`, optionally truncated to the first `limit`
  /// coordinates.
  std::string to_string(std::size_t limit = 0) const {
    std::string s = kind_name(kind_) + " h=" + std::to_string(horizon_) + " : [";
    std::size_t n = (limit == 0) ? coords_.size() : std::min(limit, coords_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i) s += ", ";
      s += std::to_string(coords_[i]);
    }
    if (n < coords_.size()) s += ", ...";
    return s + "]";
  }

 private:
  NormVector zip(const NormVector& o, int sign) const {
    if (!same_index(o)) throw ValidationError("norm vectors over different index sets");
    auto c = coords_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += sign * o.coords_[i];
    return NormVector(kind_, rank_, horizon_, std::move(c));
  }

  NormKind kind_ = NormKind::Out;
  int rank_ = 0;
  int horizon_ = 0;
  std::vector<std::int64_t> coords_;
};

/// Lexicographic comparison of truncated vectors.
inline Ordering compare(const NormVector& u, const NormVector& v) {
  if (!u.same_index(v)) throw ValidationError("cannot compare norm vectors over different index sets");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != v[i]) return u[i] < v[i] ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::EqualAtHorizon;
}

/// Per-instance evaluator. Building it scans every indexed path once; every
/// later query is a sum over those summaries.
class NormContext {
 public:
  NormContext(const MarkedGGraph& m, int horizon)
      : marked_(&m), horizon_(horizon), degree_(m.graph().directed_count()) {
    const auto& idx = index_set(m.rank(), horizon);
    out_ = build(idx, NormKind::Out);
    aut_ = build(idx, NormKind::Aut);
  }

  const MarkedGGraph& marked() const noexcept { return *marked_; }
  int horizon() const noexcept { return horizon_; }
  int rank() const noexcept { return marked_->rank(); }
  const IndexSet& index() const { return index_set(rank(), horizon_); }

  NormVector edge_abs(int d, NormKind kind) const { return set_abs(EdgeSet{d}, kind); }

  NormVector dot(const EdgeSet& a, const EdgeSet& b, NormKind kind) const {
    if (kind == NormKind::Tot) return NormVector::concat(dot(a, b, NormKind::Out), dot(a, b, NormKind::Aut));
    const auto& t = table(kind);
    std::vector<char> in_a(degree_, 0);
    std::vector<char> in_b(degree_, 0);
    for (int d : a) in_a.at(d) = 1;
    for (int d : b) in_b.at(d) = 1;
    std::vector<std::int64_t> c(t.size, 0);
    for (std::size_t i = 0; i < t.size; ++i) {
      std::int64_t s = 0;
      for (auto k = t.turn_start[i]; k < t.turn_start[i + 1]; ++k) {
        const auto& tr = t.turns[k];
        s += tr.count * ((in_a[tr.a] && in_b[tr.b]) + (in_b[tr.a] && in_a[tr.b]));
      }
      c[i] = s;
    }
    return NormVector(kind, rank(), horizon_, std::move(c));
  }

  /// |C| = sum |e| - 2 sum over unordered pairs {e, f} in C of (e.f).
  NormVector set_abs(const EdgeSet& cset, NormKind kind) const {
    if (kind == NormKind::Tot) return NormVector::concat(set_abs(cset, NormKind::Out), set_abs(cset, NormKind::Aut));
    auto& cache = (kind == NormKind::Out) ? out_cache_ : aut_cache_;
    if (auto it = cache.find(cset); it != cache.end()) return it->second;
    const auto& t = table(kind);
    std::vector<char> in(degree_, 0);
    for (int d : cset) in.at(d) = 1;
    std::vector<std::int64_t> c(t.size, 0);
    for (std::size_t i = 0; i < t.size; ++i) {
      std::int64_t s = 0;
      const int* row = &t.ends[i * degree_];
      for (int d : cset) s += row[d];
      for (auto k = t.turn_start[i]; k < t.turn_start[i + 1]; ++k) {
        const auto& tr = t.turns[k];
        if (in[tr.a] && in[tr.b]) s -= 2 * tr.count;
      }
      c[i] = s;
    }
    NormVector v(kind, rank(), horizon_, std::move(c));
    cache.emplace(cset, v);
    return v;
  }

  /// Norm computed from the definition (G-summed path/loop lengths of the
  /// realized images x(w_i)) and as half the sum of |e| over all directed
  /// edges. A mismatch is an internal error.
  NormVector norm(NormKind kind) const {
    if (kind == NormKind::Tot) return NormVector::concat(norm(NormKind::Out), norm(NormKind::Aut));
    const auto& t = table(kind);
    std::vector<std::int64_t> c(t.size, 0);
    for (std::size_t i = 0; i < t.size; ++i) {
      std::int64_t s = 0;
      const int* row = &t.ends[i * degree_];
      for (int d = 0; d < degree_; ++d) s += row[d];
      if (s % 2 != 0 || s / 2 != t.direct[i]) {
        throw PropertyViolation("norm mismatch at " + kind_name(kind) + " coordinate " +
                                index().label(kind, i) + ": direct " + std::to_string(t.direct[i]) +
                                ", half edge sum " + std::to_string(s) + "/2");
      }
      c[i] = t.direct[i];
    }
    return NormVector(kind, rank(), horizon_, std::move(c));
  }

  /// Norm from the definition only.
  NormVector direct_norm(NormKind kind) const {
    if (kind == NormKind::Tot) return NormVector::concat(direct_norm(NormKind::Out), direct_norm(NormKind::Aut));
    return NormVector(kind, rank(), horizon_, table(kind).direct);
  }

  /// Half the sum of edge absolute values over all directed edges.
  NormVector half_edge_sum(NormKind kind) const {
    if (kind == NormKind::Tot) return NormVector::concat(half_edge_sum(NormKind::Out), half_edge_sum(NormKind::Aut));
    NormVector s = NormVector::zeros(kind, rank(), horizon_);
    for (int d = 0; d < degree_; ++d) s = s + edge_abs(d, kind);
    std::vector<std::int64_t> c = s.coords();
    for (auto& x : c) {
      if (x % 2 != 0) throw PropertyViolation("odd edge-sum in norm");
      x /= 2;
    }
    return NormVector(kind, rank(), horizon_, std::move(c));
  }

 private:
  struct Turn {
    int a;
    int b;
    int count;
  };

  struct Table {
    std::size_t size = 0;
    std::vector<int> ends;
    std::vector<std::size_t> turn_start;
    std::vector<Turn> turns;
    std::vector<std::int64_t> direct;
  };

  const Table& table(NormKind kind) const { return kind == NormKind::Out ? out_ : aut_; }

  Table build(const IndexSet& idx, NormKind kind) const {
    const auto& m = *marked_;
    const auto& g = m.graph();
    const int order = g.group().order();
    const bool cyclic = (kind == NormKind::Out);
    Table t;
    t.size = idx.size(kind);
    t.ends.assign(t.size * degree_, 0);
    t.turn_start.push_back(0);
    t.direct.assign(t.size, 0);
    std::map<std::pair<int, int>, int> turns;
    for (std::size_t i = 0; i < t.size; ++i) {
      const Word& w = cyclic ? idx.classes[i].rep() : idx.words[i];
      EdgePath base = cyclic ? m.loop_of_class(idx.classes[i]) : m.path_of_word(w);
      turns.clear();
      int* row = &t.ends[i * degree_];
      for (int x = 0; x < order; ++x) {
        EdgePath p = act_path(g, x, base);
        const std::size_t n = p.size();
        for (std::size_t k = 0; k < n; ++k) {
          row[p[k]] += 1;
          row[reverse(p[k])] += 1;
          if (k + 1 < n || (cyclic && n > 0)) {
            int a = p[k];
            int b = reverse(p[(k + 1) % n]);
            if (a == b) throw PropertyViolation("backtracking turn in a reduced path");
            ++turns[{std::min(a, b), std::max(a, b)}];
          }
        }
        // Direct route: realize x(w) through the claimed automorphism.
        Word image = m.realization(x).apply(w);
        t.direct[i] += cyclic ? static_cast<std::int64_t>(m.loop_of_class(ConjClass(image)).size())
                              : static_cast<std::int64_t>(m.path_of_word(image).size());
      }
      for (const auto& [key, count] : turns) t.turns.push_back({key.first, key.second, count});
      t.turn_start.push_back(t.turns.size());
    }
    return t;
  }

  const MarkedGGraph* marked_;
  int horizon_;
  int degree_;
  Table out_;
  Table aut_;
  mutable std::map<EdgeSet, NormVector> out_cache_;
  mutable std::map<EdgeSet, NormVector> aut_cache_;
};

// Convenience wrappers matching the module operations. Each builds a fresh
// context; reuse a NormContext when evaluating many quantities.
inline NormVector edge_abs(const MarkedGGraph& m, int d, NormKind kind, int horizon) {
  return NormContext(m, horizon).edge_abs(d, kind);
}
inline NormVector dot(const MarkedGGraph& m, const EdgeSet& a, const EdgeSet& b, NormKind kind, int horizon) {
  return NormContext(m, horizon).dot(a, b, kind);
}
inline NormVector set_abs(const MarkedGGraph& m, const EdgeSet& c, NormKind kind, int horizon) {
  return NormContext(m, horizon).set_abs(c, kind);
}
inline NormVector norm(const MarkedGGraph& m, NormKind kind, int horizon) {
  return NormContext(m, horizon).norm(kind);
}


/// Integer combination sum c_k |C_k| of set absolute values, viewed as a
/// function on all conjugacy classes (Out) or all elements (Aut) of F_n.
using SetFunctional = std::vector<std::pair<std::int64_t, EdgeSet>>;

/// True when the functional vanishes on every class (Out) or every element
/// (Aut), not only on those below the horizon. Each coordinate is a sum of
/// turn weights along a reduced loop or path, so it vanishes identically
/// exactly when the turn weights are a coboundary on the non-backtracking
/// line graph (with source and sink at the basepoint for paths).
inline bool functional_vanishes(const GGraph& g, const SetFunctional& f, NormKind kind) {
  if (kind == NormKind::Tot) return functional_vanishes(g, f, NormKind::Out) && functional_vanishes(g, f, NormKind::Aut);
  const int n = g.directed_count();
  const int order = g.group().order();
  // in[g][d]: weighted membership sum_k c_k [x d in C_k], and pair term.
  std::vector<std::vector<char>> member(f.size(), std::vector<char>(n, 0));
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (int d : f[k].second) member[k][d] = 1;
  }
  auto end_weight = [&](int d) {
    std::int64_t s = 0;
    for (int x = 0; x < order; ++x) {
      int e = g.act_edge(x, d);
      for (std::size_t k = 0; k < f.size(); ++k) s += f[k].first * member[k][e];
    }
    return s;
  };
  auto turn_weight = [&](int d, int next) {
    const int y = reverse(next);
    std::int64_t s = 0;
    for (int x = 0; x < order; ++x) {
      int ex = g.act_edge(x, d);
      int ey = g.act_edge(x, y);
      for (std::size_t k = 0; k < f.size(); ++k) {
        s += f[k].first * (member[k][ex] != member[k][ey]);
      }
    }
    return s;
  };
  // Nodes 0..n-1 are directed edges; n is the source, n+1 the sink.
  const int src = n;
  const int snk = n + 1;
  struct Arc {
    int to;
    std::int64_t w;
  };
  std::vector<std::vector<Arc>> arcs(n + 2);
  for (int d = 0; d < n; ++d) {
    for (int e = 0; e < n; ++e) {
      if (g.terminal(d) == g.initial(e) && e != reverse(d)) arcs[d].push_back({e, turn_weight(d, e)});
    }
  }
  const bool paths = (kind == NormKind::Aut);
  if (paths) {
    for (int d = 0; d < n; ++d) {
      if (g.initial(d) == g.basepoint()) arcs[src].push_back({d, end_weight(reverse(d))});
      if (g.terminal(d) == g.basepoint()) arcs[d].push_back({snk, end_weight(d)});
    }
  }
  const int total = n + 2;
  auto reach = [&](int from, bool backward) {
    std::vector<char> seen(total, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < total; ++v) {
        bool linked = false;
        for (const auto& a : arcs[backward ? v : u]) {
          if (a.to == (backward ? u : v)) linked = true;
        }
        if (linked && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return seen;
  };
  // An arc matters when it lies on a cycle (loops) or on a source-sink walk.
  std::vector<std::vector<char>> fwd(total);
  std::vector<std::vector<char>> bwd(total);
  if (paths) {
    fwd[0] = reach(src, false);
    bwd[0] = reach(snk, true);
  } else {
    for (int u = 0; u < n; ++u) fwd[u] = reach(u, false);
  }
  auto useful = [&](int u, int v) {
    if (paths) return fwd[0][u] && bwd[0][v];
    return u < n && v < n && fwd[v][u] != 0;  // v reaches u: the arc closes a cycle
  };
  std::vector<std::int64_t> phi(total, 0);
  std::vector<char> set(total, 0);
  // Constraint graph: phi(v) - phi(u) = w on useful arcs, solved per component.
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(total);
  for (int u = 0; u < total; ++u) {
    for (const auto& a : arcs[u]) {
      if (!useful(u, a.to)) continue;
      adj[u].push_back({a.to, a.w});
      adj[a.to].push_back({u, -a.w});
    }
  }
  for (int root = 0; root < total; ++root) {
    if (set[root] || adj[root].empty()) continue;
    if (paths && root != src) continue;
    set[root] = 1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[u]) {
        if (!set[v]) {
          set[v] = 1;
          phi[v] = phi[u] + w;
          stack.push_back(v);
        } else if (phi[v] != phi[u] + w) {
          return false;
        }
      }
    }
  }
  if (paths) return !set[snk] || phi[snk] == 0;
  return true;
}

}  // namespace auter
