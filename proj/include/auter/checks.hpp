#pragma once

// Property checks shared by `auter selftest` and the acceptance binary. Each
// check runs over one marked G-graph and records into a Tally; violations
// carry a short description and, when a witness directory is set, the
// offending instance is written there.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "auter/fixtures.hpp"
#include "auter/idealedges.hpp"
#include "auter/io.hpp"
#include "auter/moves.hpp"
#include "auter/norms.hpp"
#include "auter/random_instance.hpp"
#include "auter/starcomplex.hpp"

namespace auter::checks {

struct Tally {
  std::string name;
  long checked = 0;
  long violations = 0;
  /// Cases whose hypotheses could not be decided at the horizon.
  long skipped = 0;
  std::vector<std::string> messages;
  std::string witness_dir;

  explicit Tally(std::string n = "", std::string dir = "") : name(std::move(n)), witness_dir(std::move(dir)) {}

  bool ok() const { return violations == 0; }

  void pass() { ++checked; }

  void violation(const std::string& what, const MarkedGGraph* m = nullptr) {
    ++checked;
    ++violations;
    if (messages.size() < 20) messages.push_back(what);
    if (!m || witness_dir.empty()) return;
    std::filesystem::create_directories(witness_dir);
    auto path = std::filesystem::path(witness_dir) / (name + "-" + std::to_string(violations) + ".inst");
    std::ofstream out(path);
    out << "# " << what << "\n" << serialize(*m);
  }

  void check(bool ok, const std::string& what, const MarkedGGraph* m = nullptr) {
    if (ok) {
      pass();
    } else {
      violation(what, m);
    }
  }

  void merge(const Tally& o) {
    checked += o.checked;
    violations += o.violations;
    skipped += o.skipped;
    for (const auto& s : o.messages) {
      if (messages.size() < 20) messages.push_back(s);
    }
  }

  std::string summary() const {
    std::string s = name + ": " + std::to_string(checked) + " checked, " + std::to_string(violations) +
                    " violations";
    if (skipped) s += ", " + std::to_string(skipped) + " undecided at horizon";
    return s;
  }
};

struct Instance {
  std::string name;
  MarkedGGraph marked;
};

inline std::vector<Instance> fixture_instances() {
  std::vector<Instance> out;
  for (auto& [name, m] : fixtures::all()) out.push_back({name, m});
  return out;
}

inline MarkedGGraph reduced_form(const MarkedGGraph& m) {
  return collapse(m, maximal_invariant_forest(m.graph()));
}

/// count random instances, drawn from seeds derived from `seed`.
inline std::vector<Instance> random_instances(std::uint64_t seed, int count, bool reduced) {
  std::vector<Instance> out;
  RandomOptions opt;
  opt.reduced = reduced;
  for (int i = 0; i < count; ++i) {
    std::uint64_t s = seed * 1000003ull + static_cast<std::uint64_t>(i);
    auto ri = random_instance(s, opt);
    out.push_back({"random-" + std::to_string(s) + "-" + ri.group, ri.marked});
  }
  return out;
}

inline bool leq(const NormVector& a, const NormVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

// --- norms -----------------------------------------------------------------------

/// Direct norms equal half the edge-absolute-value sums, out and aut.
inline void norm_consistency(const Instance& in, const NormContext& ctx, Tally& t) {
  for (auto k : {NormKind::Out, NormKind::Aut}) {
    try {
      auto d = ctx.direct_norm(k);
      auto h = ctx.half_edge_sum(k);
      t.check(d.coords() == h.coords(), in.name + ": " + kind_name(k) + " norm differs from half edge sum",
              &in.marked);
    } catch (const PropertyViolation& e) {
      t.violation(in.name + ": " + e.what(), &in.marked);
    }
  }
}

/// |A u B| = |A| + |B| - 2 A.B on random disjoint A, B; the out-only identity
/// |A|_out = (A.(E-A))_out = |E-A|_out; counts aut failures of the latter.
inline void inclusion_exclusion(const Instance& in, const NormContext& ctx, std::mt19937_64& rng, int draws,
                                Tally& ie, Tally& out_only, long& aut_counterexamples) {
  const int n = in.marked.graph().directed_count();
  EdgeSet all;
  for (int d = 0; d < n; ++d) all.push_back(d);
  for (int i = 0; i < draws; ++i) {
    EdgeSet a;
    EdgeSet b;
    for (int d = 0; d < n; ++d) {
      auto r = rng() % 3;
      if (r == 0) a.push_back(d);
      if (r == 1) b.push_back(d);
    }
    for (auto k : {NormKind::Out, NormKind::Aut}) {
      auto lhs = ctx.set_abs(set_union(a, b), k);
      auto rhs = ctx.set_abs(a, k) + ctx.set_abs(b, k) - ctx.dot(a, b, k).scaled(2);
      ie.check(lhs.coords() == rhs.coords(),
               in.name + ": inclusion-exclusion fails (" + kind_name(k) + ") for A=" +
                   in.marked.graph().set_name(a) + " B=" + in.marked.graph().set_name(b),
               &in.marked);
    }
    auto rest = set_difference(all, a);
    auto abs_out = ctx.set_abs(a, NormKind::Out);
    out_only.check(abs_out.coords() == ctx.dot(a, rest, NormKind::Out).coords() &&
                       abs_out.coords() == ctx.set_abs(rest, NormKind::Out).coords(),
                   in.name + ": |A|_out != (A.(E-A))_out for A=" + in.marked.graph().set_name(a), &in.marked);
    if (ctx.set_abs(a, NormKind::Aut).coords() != ctx.dot(a, rest, NormKind::Aut).coords()) ++aut_counterexamples;
  }
}

/// ((K e).A) = [K : stab(e)] (e.A) for every subgroup K, K-invariant A and
/// edge e with stab(e) inside K; both kinds.
inline void coset_identity(const Instance& in, const NormContext& ctx, Tally& t, std::mt19937_64& rng) {
  const auto& g = in.marked.graph();
  const auto& grp = g.group();
  for (const auto& k : grp.subgroups()) {
    // K-orbits of directed edges; A ranges over their unions.
    std::vector<EdgeSet> orbits;
    std::vector<char> seen(g.directed_count(), 0);
    for (int d = 0; d < g.directed_count(); ++d) {
      if (seen[d]) continue;
      EdgeSet o;
      for (int x : k) o.push_back(g.act_edge(x, d));
      o = make_set(o);
      for (int e : o) seen[e] = 1;
      orbits.push_back(o);
    }
    std::vector<std::uint64_t> picks;
    const std::size_t no = orbits.size();
    if (no <= 8) {
      for (std::uint64_t s = 1; s < (1ull << no); ++s) picks.push_back(s);
    } else {
      for (int i = 0; i < 64; ++i) picks.push_back(rng() & ((1ull << no) - 1));
    }
    for (auto s : picks) {
      EdgeSet a;
      for (std::size_t i = 0; i < no; ++i) {
        if (s & (1ull << i)) a = set_union(a, orbits[i]);
      }
      for (int e = 0; e < g.directed_count(); ++e) {
        auto st = g.stabilizer(e);
        if (!std::includes(k.begin(), k.end(), st.begin(), st.end())) continue;
        EdgeSet ke;
        for (int x : k) ke.push_back(g.act_edge(x, e));
        ke = make_set(ke);
        const long index = static_cast<long>(k.size() / st.size());
        for (auto kind : {NormKind::Out, NormKind::Aut}) {
          auto lhs = ctx.dot(ke, a, kind);
          auto rhs = ctx.dot(EdgeSet{e}, a, kind).scaled(index);
          t.check(lhs.coords() == rhs.coords(),
                  in.name + ": coset identity fails (" + kind_name(kind) + ") K of order " +
                      std::to_string(k.size()) + ", e=" + g.directed_name(e) + ", A=" + g.set_name(a),
                  &in.marked);
        }
      }
    }
  }
}

inline void g_invariance(const Instance& in, const NormContext& ctx, Tally& t) {
  const auto& g = in.marked.graph();
  for (int d = 0; d < g.directed_count(); ++d) {
    auto base = ctx.edge_abs(d, NormKind::Tot);
    for (int x = 0; x < g.group().order(); ++x) {
      t.check(ctx.edge_abs(g.act_edge(x, d), NormKind::Tot).coords() == base.coords(),
              in.name + ": |g e| != |e| at " + g.directed_name(d), &in.marked);
    }
    t.check(ctx.edge_abs(reverse(d), NormKind::Tot).coords() == base.coords(),
            in.name + ": |e| != |~e| at " + g.directed_name(d), &in.marked);
  }
}

/// norm(after) - norm(before) = [G:stab(alpha)] (|alpha| - |a|) for every
/// Whitehead move, all kinds.
inline void norm_change_law(const Instance& in, const NormContext& ctx, Tally& t) {
  const auto& g = in.marked.graph();
  const auto before = ctx.norm(NormKind::Tot);
  for (const auto& alpha : enumerate_ideal_edges(g)) {
    for (int a : d_set(g, alpha)) {
      std::string label = in.name + " " + pair_name(g, IdealPair{alpha, a});
      try {
        auto after_m = whitehead(in.marked, alpha.edges, a);
        t.check(after_m.validate().ok(), label + ": move result is not a valid marked G-graph", &in.marked);
        NormContext after(after_m, ctx.horizon());
        auto delta = after.norm(NormKind::Tot) - before;
        auto law = (ctx.set_abs(alpha.edges, NormKind::Tot) - ctx.edge_abs(a, NormKind::Tot))
                       .scaled(orbit_index(g, alpha));
        t.check(delta.coords() == law.coords(), label + ": norm change differs from the law", &in.marked);
      } catch (const Error& e) {
        t.violation(label + ": " + e.what(), &in.marked);
      }
    }
  }
}

/// |alpha| before = |e(alpha)| after blowing up, and blow-up then collapse is
/// the identity up to canonical renaming.
inline void blowup_correspondence(const Instance& in, const NormContext& ctx, Tally& t) {
  const auto& g = in.marked.graph();
  const auto original = in.marked.canonical_form();
  for (const auto& alpha : enumerate_ideal_edges(g)) {
    std::string label = in.name + " " + ideal_edge_name(g, alpha);
    try {
      auto bu = blow_up(in.marked, alpha.edges);
      NormContext after(bu.marked, ctx.horizon());
      t.check(ctx.set_abs(alpha.edges, NormKind::Tot).coords() ==
                  after.edge_abs(bu.new_edges.front(), NormKind::Tot).coords(),
              label + ": |alpha| != |e(alpha)|", &in.marked);
      auto back = collapse(bu.marked, bu.new_edge_forest());
      t.check(back.canonical_form() == original, label + ": blow-up/collapse round trip differs", &in.marked);
    } catch (const Error& e) {
      t.violation(label + ": " + e.what(), &in.marked);
    }
  }
}

// --- lemmas ----------------------------------------------------------------------

/// Crossing inequalities for every pair of ideal edges at a common vertex:
/// simply crossing with P <= Q (t21) and every intersection component (t22).
inline void crossing_inequalities(const Instance& in, const NormContext& ctx, Tally& t21, Tally& t22) {
  const auto& g = in.marked.graph();
  const int order = g.group().order();
  auto edges = enumerate_ideal_edges(g);
  for (const auto& alpha : edges) {
    const long p = order / static_cast<long>(alpha.stab.size());
    for (const auto& beta_rep : edges) {
      if (beta_rep.vertex != alpha.vertex) continue;
      const long q0 = order / static_cast<long>(beta_rep.stab.size());
      auto cr = crossing(g, alpha, beta_rep);
      if (cr.count > 0) {
        for (std::size_t i = 0; i < cr.components.size(); ++i) {
          for (auto kind : {NormKind::Out, NormKind::Aut}) {
            auto lhs = ctx.set_abs(set_difference(alpha.edges, cr.components[i]), kind).scaled(p) +
                       ctx.set_abs(set_difference(beta_rep.edges, cr.dual_components[i]), kind).scaled(q0);
            auto rhs = ctx.set_abs(alpha.edges, kind).scaled(p) + ctx.set_abs(beta_rep.edges, kind).scaled(q0);
            t22.check(leq(lhs, rhs),
                      in.name + ": t22 fails (" + kind_name(kind) + ") for " + ideal_edge_name(g, alpha) + ", " +
                          ideal_edge_name(g, beta_rep) + " component " + std::to_string(i),
                      &in.marked);
          }
        }
      }
      for (const auto& bt : g.set_orbit(beta_rep.edges)) {
        auto beta = make_ideal_edge(g, bt);
        if (!beta) continue;
        const auto& q_stab = beta->stab;
        if (!std::includes(q_stab.begin(), q_stab.end(), alpha.stab.begin(), alpha.stab.end())) continue;
        if (!intersects(alpha.edges, bt) || crossing(g, alpha, *beta).count != 1) continue;
        const long q = order / static_cast<long>(q_stab.size());
        EdgeSet q_alpha;
        for (int x : q_stab) q_alpha = set_union(q_alpha, g.act_set(x, alpha.edges));
        for (auto kind : {NormKind::Out, NormKind::Aut}) {
          auto lhs = ctx.set_abs(set_intersection(alpha.edges, bt), kind).scaled(p) +
                     ctx.set_abs(set_union(bt, q_alpha), kind).scaled(q);
          auto rhs = ctx.set_abs(alpha.edges, kind).scaled(p) + ctx.set_abs(bt, kind).scaled(q);
          t21.check(leq(lhs, rhs),
                    in.name + ": t21 fails (" + kind_name(kind) + ") for " + ideal_edge_name(g, alpha) + ", " +
                        g.set_name(bt),
                    &in.marked);
        }
      }
    }
  }
}

/// Reductivity of an arbitrary edge set: false when it is not an ideal edge,
/// nullopt when undecided at the horizon.
inline std::optional<bool> reductive_set(const NormContext& ctx, const EdgeSet& s, NormKind kind) {
  const auto& g = ctx.marked().graph();
  if (s.empty()) return false;
  auto e = make_ideal_edge(g, s);
  if (!e) return false;
  bool unknown = false;
  for (int a : d_set(g, *e)) {
    auto r = reductivity(ctx, *e, a, kind);
    if (r.verdict == Verdict::Reductive) return true;
    if (r.undetermined) unknown = true;
  }
  if (unknown) return std::nullopt;
  return false;
}

/// Three-valued or/and over optional<bool>.
inline std::optional<bool> tri_and(std::optional<bool> a, std::optional<bool> b) {
  if ((a && !*a) || (b && !*b)) return false;
  if (!a || !b) return std::nullopt;
  return true;
}

inline std::optional<bool> tri_or(std::optional<bool> a, std::optional<bool> b) {
  if ((a && *a) || (b && *b)) return true;
  if (!a || !b) return std::nullopt;
  return false;
}

/// Pushing and Shrinking Lemmas for reductivity of the given kind on a
/// reduced instance. `shrink_literal` records the Shrinking conclusion
/// without the hypothesis that alpha is reductive.
inline void pushing_shrinking(const Instance& in, const NormContext& ctx, NormKind kind, Tally& push, Tally& shrink,
                              Tally& shrink_literal) {
  const auto& g = in.marked.graph();
  auto edges = enumerate_ideal_edges(g);
  auto search = search_reductive_pairs(ctx, edges, false, kind);
  if (!search.best) return;
  if (search.ties_at_top > 0) {
    ++push.skipped;
    ++shrink.skipped;
    return;
  }
  const auto mu = search.best->edge;
  const int m = search.best->collapse_target;
  const auto m_orbit = g.orbit(m).members;
  const std::string tag = in.name + " [" + kind_name(kind) + "] mu=" + pair_name(g, *search.best);
  auto red = [&](const EdgeSet& s) { return reductive_set(ctx, s, kind); };

  for (const auto& rep : edges) {
    if (rep.vertex != mu.vertex) continue;
    std::optional<bool> rep_red = red(rep.edges);
    for (const auto& t : g.set_orbit(rep.edges)) {
      auto alpha = make_ideal_edge(g, t);
      if (!alpha) continue;
      auto cr = crossing(g, *alpha, mu);
      // Pushing: (alpha, a) reductive, m in alpha, simple crossing.
      if (contains(t, m) && cr.count == 1 && rep_red.value_or(false)) {
        EdgeSet p_mu;
        for (int x : alpha->stab) p_mu = set_union(p_mu, g.act_set(x, mu.edges));
        auto first = tri_and(red(set_difference(mu.edges, t)), red(set_difference(t, mu.edges)));
        auto second = tri_and(red(set_union(t, p_mu)), red(set_intersection(t, mu.edges)));
        auto verdict = tri_or(first, second);
        if (!verdict) {
          ++push.skipped;
        } else {
          push.check(*verdict, tag + ": pushing fails for alpha=" + g.set_name(t), &in.marked);
        }
      }
      if (cr.count == 0) continue;
      // Shrinking: components with no translate of m, and the rest.
      EdgeSet beta = t;
      std::vector<EdgeSet> pieces;
      for (const auto& comp : cr.components) {
        if (comp.empty() || intersects(comp, m_orbit)) continue;
        beta = set_difference(beta, comp);
        pieces.push_back(comp);
      }
      std::optional<bool> verdict = red(beta);
      for (const auto& piece : pieces) verdict = tri_or(verdict, red(piece));
      if (!verdict) {
        ++shrink_literal.skipped;
      } else {
        shrink_literal.check(*verdict, tag + ": shrinking conclusion fails for alpha=" + g.set_name(t));
      }
      if (!rep_red) {
        ++shrink.skipped;
      } else if (*rep_red) {
        if (!verdict) {
          ++shrink.skipped;
        } else {
          shrink.check(*verdict, tag + ": shrinking fails for reductive alpha=" + g.set_name(t), &in.marked);
        }
      }
    }
  }
}

/// Inverse of an invertible tot-reductive basepoint edge is tot-reductive;
/// such a move with stab(a) = G changes the out-norm; at most one
/// non-invertible full-stabilizer reductive gamma, whose move is a
/// conjugation invisible to the out-norm.
inline void inverse_and_gamma(const Instance& in, const NormContext& ctx, Tally& t17, Tally& t18, Tally& t25) {
  const auto& g = in.marked.graph();
  const int order = g.group().order();
  auto edges = enumerate_ideal_edges(g);
  std::vector<IdealEdge> gammas;
  for (const auto& alpha : edges) {
    if (alpha.vertex != g.basepoint()) continue;
    auto red = reductive_set(ctx, alpha.edges, NormKind::Tot);
    auto inv = inverse_edge(g, alpha);
    if (inv && red.value_or(false)) {
      auto inv_red = reductive_set(ctx, inv->edges, NormKind::Tot);
      if (!inv_red) {
        ++t17.skipped;
      } else {
        t17.check(*inv_red, in.name + ": inverse of reductive " + ideal_edge_name(g, alpha) + " is not reductive",
                  &in.marked);
      }
      for (int a : d_set(g, alpha)) {
        if (static_cast<int>(g.stabilizer(a).size()) != order) continue;
        auto r = reductivity(ctx, alpha, a, NormKind::Tot);
        if (r.verdict != Verdict::Reductive) continue;
        t18.check(!functional_vanishes(g, r.functional, NormKind::Out),
                  in.name + ": out-reductivity of " + pair_name(g, IdealPair{alpha, a}) + " vanishes", &in.marked);
      }
    }
    if (!inv && static_cast<int>(alpha.stab.size()) == order && red.value_or(false)) gammas.push_back(alpha);
  }
  t25.check(gammas.size() <= 1, in.name + ": " + std::to_string(gammas.size()) + " reductive conjugating edges",
            &in.marked);
  auto search = search_reductive_pairs(ctx, edges, false, NormKind::Tot);
  for (const auto& gamma : gammas) {
    auto rest = set_difference(g.edges_at(gamma.vertex), gamma.edges);
    if (rest.size() != 1) {
      t25.violation(in.name + ": gamma " + ideal_edge_name(g, gamma) + " misses more than one edge", &in.marked);
      continue;
    }
    const int c = reverse(rest.front());
    if (!contains(d_set(g, gamma), c)) {
      t25.violation(in.name + ": c is not a legal collapse target of gamma", &in.marked);
      continue;
    }
    auto r = reductivity(ctx, gamma, c, NormKind::Tot);
    auto after = whitehead(in.marked, gamma.edges, c);
    NormContext actx(after, ctx.horizon());
    t25.check(actx.norm(NormKind::Out).coords() == ctx.norm(NormKind::Out).coords() &&
                  functional_vanishes(g, r.functional, NormKind::Out),
              in.name + ": move (gamma, c) changes the out-norm", &in.marked);
    if (search.best && search.ties_at_top == 0) {
      IdealEdge mu = search.best->edge;
      if (!compatible(g, gamma, mu)) {
        t25.check(c == reverse(search.best->collapse_target) && is_invertible(g, mu),
                  in.name + ": gamma crosses mu but c != m^-1 or mu not invertible", &in.marked);
      }
    }
  }
}

/// greedy_reduce terminates within the budget with strictly falling tot-norms.
inline std::optional<ReduceResult> descent(const Instance& in, int horizon, int max_steps, Tally& t) {
  try {
    auto r = greedy_reduce(in.marked, horizon, max_steps);
    bool falling = true;
    for (std::size_t i = 1; i < r.tot_norms.size(); ++i) {
      falling = falling && compare(r.tot_norms[i], r.tot_norms[i - 1]) == Ordering::Less;
    }
    t.check(falling, in.name + ": tot-norm did not fall at every step", &in.marked);
    return r;
  } catch (const Error& e) {
    t.violation(in.name + ": " + e.what(), &in.marked);
  }
  return std::nullopt;
}

// --- star ------------------------------------------------------------------------

struct StarOutcome {
  bool in_scope = false;
  double seconds = 0;
  std::string status;
};

/// Family nesting, vanishing homology of S(R) and every intermediate S(C),
/// and a complete checked retraction to one forest.
inline StarOutcome star_contractibility(const Instance& in, int horizon, Tally& nesting, Tally& star) {
  StarOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  StarContext ctx(in.marked, horizon);
  const auto& ps = ctx.pair_search();
  if (!ctx.mu()) {
    if (ps.undetermined > 0) ++star.skipped;
    out.status = "no reductive pair";
    return out;
  }
  if (ps.ties_at_top > 0 || ps.undetermined > 0) {
    ++star.skipped;
    out.status = "maximal pair undecided at horizon";
    return out;
  }
  auto r = ctx.family(Family::R);
  auto c1 = ctx.family(Family::C1);
  auto c0p = ctx.family(Family::C0p);
  auto c0 = ctx.family(Family::C0);
  auto sub = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  nesting.check(sub(c0, c0p) && sub(c0p, c1) && sub(c1, r) &&
                    std::binary_search(c0.begin(), c0.end(), *ctx.mu()),
                in.name + ": families are not nested", &in.marked);
  if (!ctx.at_basepoint(*ctx.mu())) {
    out.status = "maximal pair away from the basepoint";
    return out;
  }
  out.in_scope = true;
  try {
    auto s = star_complex(ctx, r);
    auto betti = reduced_homology(s.complex);
    bool zero = std::all_of(betti.begin(), betti.end(), [](long b) { return b == 0; });
    star.check(zero, in.name + ": S(R) has nonzero reduced homology", &in.marked);
    auto trace = run_retractions(ctx, true);
    bool all_zero = true;
    for (const auto& h : trace.homology) {
      all_zero = all_zero && std::all_of(h.begin(), h.end(), [](long b) { return b == 0; });
    }
    star.check(all_zero, in.name + ": an intermediate S(C) has nonzero reduced homology", &in.marked);
    star.check(popcount(trace.final_forest) == 1 &&
                   (trace.status == TraceStatus::Contracted || trace.status == TraceStatus::SinglePoint),
               in.name + ": retraction did not end at a single forest", &in.marked);
    out.status = trace_status_name(trace.status) + " in " + std::to_string(trace.steps.size()) + " steps";
  } catch (const Error& e) {
    star.violation(in.name + ": " + e.what(), &in.marked);
    out.status = "failed";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Distinct ideal forests blow up to distinct marked graphs, and collapsing
/// the new edges of a sub-forest's complement recovers the sub-forest's
/// blow-up. Runs when the instance has at most `max_forests` forests.
inline void poset_sanity(const Instance& in, int horizon, Tally& t, std::size_t max_forests = 30) {
  StarContext ctx(in.marked, horizon);
  std::vector<int> all(ctx.size());
  for (int i = 0; i < ctx.size(); ++i) all[i] = i;
  std::vector<Mask> forests;
  try {
    forests = ctx.forests(all, max_forests);
  } catch (const ValidationError&) {
    return;
  }
  std::map<Mask, ForestBlowUp> blown;
  std::set<std::string> forms;
  for (Mask f : forests) {
    try {
      auto b = blow_up_forest(ctx, f);
      t.check(!b.marked.marking_problem(), in.name + ": blow-up of " + ctx.forest_name(f) + " has a broken marking",
              &in.marked);
      forms.insert(b.marked.canonical_form());
      blown.emplace(f, std::move(b));
    } catch (const Error& e) {
      t.violation(in.name + ": blow-up of " + ctx.forest_name(f) + ": " + e.what(), &in.marked);
    }
  }
  t.check(forms.size() == blown.size(), in.name + ": two ideal forests blow up to the same marked graph", &in.marked);
  for (const auto& [f, bf] : blown) {
    for (const auto& [h, bh] : blown) {
      if (f == h || !is_submask(h, f)) continue;
      InvariantForest extra;
      for (int i : mask_members(f & ~h)) {
        const auto& pairs = bf.new_edge_orbit.at(i).edge_pairs;
        extra.edge_pairs.insert(extra.edge_pairs.end(), pairs.begin(), pairs.end());
      }
      std::sort(extra.edge_pairs.begin(), extra.edge_pairs.end());
      extra.edge_pairs.erase(std::unique(extra.edge_pairs.begin(), extra.edge_pairs.end()), extra.edge_pairs.end());
      auto c = collapse(bf.marked, extra);
      t.check(c.canonical_form() == bh.marked.canonical_form(),
              in.name + ": collapsing " + ctx.forest_name(f & ~h) + " in the blow-up of " + ctx.forest_name(f) +
                  " does not give the blow-up of " + ctx.forest_name(h),
              &in.marked);
    }
  }
}

// --- suites ------------------------------------------------------------------------

struct SuiteResult {
  std::vector<Tally> tallies;
  std::vector<std::string> notes;

  bool ok() const {
    return std::all_of(tallies.begin(), tallies.end(), [](const Tally& t) { return t.ok(); });
  }
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int horizon = 4;
  int random_count = 20;
  std::string witness_dir;
};

inline SuiteResult norms_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally cons("norm-consistency", o.witness_dir), ie("inclusion-exclusion", o.witness_dir),
      oo("out-only-identity", o.witness_dir), coset("coset-identity", o.witness_dir),
      inv("g-invariance", o.witness_dir), law("norm-change-law", o.witness_dir),
      blow("blow-up-correspondence", o.witness_dir);
  long aut_ce = 0;
  std::mt19937_64 rng(o.seed);
  auto instances = fixture_instances();
  for (auto& in : random_instances(o.seed, o.random_count, false)) instances.push_back(in);
  for (const auto& in : instances) {
    NormContext ctx(in.marked, o.horizon);
    norm_consistency(in, ctx, cons);
    inclusion_exclusion(in, ctx, rng, 10, ie, oo, aut_ce);
    coset_identity(in, ctx, coset, rng);
    g_invariance(in, ctx, inv);
    norm_change_law(in, ctx, law);
    blowup_correspondence(in, ctx, blow);
  }
  r.notes.push_back("aut counterexamples to |A| = A.(E-A): " + std::to_string(aut_ce));
  r.tallies = {cons, ie, oo, coset, inv, law, blow};
  return r;
}

inline SuiteResult lemmas_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally t21("t21", o.witness_dir), t22("t22", o.witness_dir), push("pushing", o.witness_dir),
      shrink("shrinking", o.witness_dir), t17("inverse-reductive", o.witness_dir), t18("out-change", o.witness_dir),
      t25("conjugating-edge", o.witness_dir), desc("descent", o.witness_dir);
  Tally literal("shrinking-literal");
  std::vector<Instance> instances;
  for (const auto& in : fixture_instances()) instances.push_back({in.name, reduced_form(in.marked)});
  for (auto& in : random_instances(o.seed, o.random_count, true)) instances.push_back(in);
  for (const auto& in : instances) {
    NormContext ctx(in.marked, o.horizon);
    crossing_inequalities(in, ctx, t21, t22);
    for (auto kind : {NormKind::Aut, NormKind::Tot}) pushing_shrinking(in, ctx, kind, push, shrink, literal);
    inverse_and_gamma(in, ctx, t17, t18, t25);
  }
  for (const auto& in : fixture_instances()) descent(in, o.horizon, 500, desc);
  for (auto& in : random_instances(o.seed + 7, o.random_count, false)) descent(in, o.horizon, 500, desc);
  r.notes.push_back("shrinking without the reductive hypothesis: " + std::to_string(literal.violations) + " of " +
                    std::to_string(literal.checked) + " cases fail");
  r.tallies = {t21, t22, push, shrink, t17, t18, t25, desc};
  return r;
}

inline SuiteResult star_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally nesting("family-nesting", o.witness_dir), star("star-contractible", o.witness_dir),
      sanity("poset-sanity", o.witness_dir);
  std::vector<Instance> instances;
  for (const auto& in : fixture_instances()) instances.push_back({in.name, reduced_form(in.marked)});
  for (auto& in : random_instances(o.seed, o.random_count, true)) instances.push_back(in);
  int in_scope = 0;
  for (const auto& in : instances) {
    auto s = star_contractibility(in, o.horizon, nesting, star);
    if (s.in_scope) ++in_scope;
  }
  for (const auto& in : fixture_instances()) poset_sanity(in, o.horizon, sanity);
  r.notes.push_back("instances with a basepoint maximal pair: " + std::to_string(in_scope));
  r.tallies = {nesting, star, sanity};
  return r;
}

}  // namespace auter::checks
