#pragma once

// Seeded random marked G-graphs for property tests and the self-test suites.
// Graphs are assembled from coset orbits of a small abstract group, so the
// action has no inversions and fixes the basepoint by construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "auter/error.hpp"
#include "auter/ggraph.hpp"
#include "auter/group.hpp"
#include "auter/marking.hpp"

namespace auter {

struct RandomOptions {
  int min_rank = 2;
  int max_rank = 3;
  int max_directed_orbits = 12;
  int max_nielsen = 6;
  /// Collapse a maximal invariant forest before returning.
  bool reduced = true;
  /// Group names to draw from: trivial, Z2, Z3, Z4, Z2xZ2, Z6, S3.
  std::vector<std::string> groups = {"trivial", "Z2", "Z3", "Z4", "Z2xZ2", "Z6", "S3"};
};

struct RandomInstance {
  MarkedGGraph marked;
  std::string group;
  int attempts = 0;
};

namespace detail {

struct AbstractGroup {
  std::vector<Perm> elems;
  std::vector<std::vector<int>> mul;
  std::vector<int> gens;

  int order() const { return static_cast<int>(elems.size()); }

  std::vector<int> closure(const std::vector<int>& s) const {
    std::set<int> out{0};
    bool grew = true;
    while (grew) {
      grew = false;
      for (int a : std::vector<int>(out.begin(), out.end())) {
        for (int b : s) {
          if (out.insert(mul[a][b]).second) grew = true;
        }
      }
    }
    return {out.begin(), out.end()};
  }

  std::vector<std::vector<int>> subgroups() const {
    std::set<std::vector<int>> all;
    for (int a = 0; a < order(); ++a) {
      for (int b = a; b < order(); ++b) all.insert(closure({a, b}));
    }
    return {all.begin(), all.end()};
  }

  std::vector<int> coset(int g, const std::vector<int>& h) const {
    std::vector<int> c;
    for (int x : h) c.push_back(mul[g][x]);
    std::sort(c.begin(), c.end());
    return c;
  }

  std::vector<int> conjugate(int g, const std::vector<int>& h) const {
    int gi = 0;
    for (int x = 0; x < order(); ++x) {
      if (mul[g][x] == 0) gi = x;
    }
    std::vector<int> c;
    for (int x : h) c.push_back(mul[mul[g][x]][gi]);
    std::sort(c.begin(), c.end());
    return c;
  }
};

inline AbstractGroup make_abstract_group(const std::string& name) {
  std::vector<Perm> gens;
  auto cycle = [](int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = (i + 1) % n;
    return p;
  };
  if (name == "trivial") {
  } else if (name == "Z2") {
    gens = {cycle(2)};
  } else if (name == "Z3") {
    gens = {cycle(3)};
  } else if (name == "Z4") {
    gens = {cycle(4)};
  } else if (name == "Z6") {
    gens = {cycle(6)};
  } else if (name == "Z2xZ2") {
    gens = {{1, 0, 3, 2}, {2, 3, 0, 1}};
  } else if (name == "S3") {
    gens = {{1, 2, 0}, {1, 0, 2}};
  } else {
    throw ValidationError("unknown group '" + name + "'");
  }
  const std::size_t deg = gens.empty() ? 1 : gens.front().size();
  AbstractGroup g;
  g.elems = {identity_perm(deg)};
  std::map<Perm, int> index{{g.elems[0], 0}};
  for (std::size_t i = 0; i < g.elems.size(); ++i) {
    for (const auto& s : gens) {
      Perm p = compose_perm(s, g.elems[i]);
      if (index.emplace(p, static_cast<int>(g.elems.size())).second) g.elems.push_back(p);
    }
  }
  for (const auto& s : gens) g.gens.push_back(index.at(s));
  g.mul.assign(g.order(), std::vector<int>(g.order()));
  for (int a = 0; a < g.order(); ++a) {
    for (int b = 0; b < g.order(); ++b) g.mul[a][b] = index.at(compose_perm(g.elems[a], g.elems[b]));
  }
  return g;
}

inline bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<int> meet(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Basis loops from a breadth-first spanning tree at the basepoint.
inline std::vector<EdgePath> tree_basis(const GGraph& g) {
  const int nv = g.vertex_count();
  std::vector<EdgePath> to_root(nv);
  std::vector<char> seen(nv, 0);
  std::vector<char> tree(g.edge_count(), 0);
  std::vector<int> queue{g.basepoint()};
  seen[g.basepoint()] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (int d = 0; d < g.directed_count(); ++d) {
      if (g.initial(d) != v || seen[g.terminal(d)]) continue;
      seen[g.terminal(d)] = 1;
      tree[d >> 1] = 1;
      to_root[g.terminal(d)] = to_root[v];
      to_root[g.terminal(d)].push_back(d);
      queue.push_back(g.terminal(d));
    }
  }
  std::vector<EdgePath> basis;
  for (int k = 0; k < g.edge_count(); ++k) {
    if (tree[k]) continue;
    int d = 2 * k;
    EdgePath p = to_root[g.initial(d)];
    p.push_back(d);
    auto back = reverse_path(to_root[g.terminal(d)]);
    p.insert(p.end(), back.begin(), back.end());
    basis.push_back(reduce_path(p));
  }
  return basis;
}

}  // namespace detail

/// Draws one admissible marked G-graph. Deterministic in the seed.
inline RandomInstance random_instance(std::uint64_t seed, const RandomOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  for (int attempt = 1; attempt <= 5000; ++attempt) {
    const std::string gname = opt.groups.at(pick(static_cast<int>(opt.groups.size())));
    const auto grp = detail::make_abstract_group(gname);
    const auto subs = grp.subgroups();
    const int n = grp.order();

    // Vertex orbits: the basepoint plus up to two coset orbits G/H.
    std::vector<std::vector<int>> vstab{grp.closure({})};
    vstab[0].resize(n);
    for (int i = 0; i < n; ++i) vstab[0][i] = i;
    const int extra = pick(3);
    for (int i = 0; i < extra; ++i) vstab.push_back(subs[pick(static_cast<int>(subs.size()))]);
    std::vector<std::vector<std::vector<int>>> vcosets;
    std::vector<std::map<std::vector<int>, int>> vindex;
    int vertex_total = 0;
    for (const auto& h : vstab) {
      std::vector<std::vector<int>> cs;
      std::map<std::vector<int>, int> idx;
      for (int g = 0; g < n; ++g) {
        auto c = grp.coset(g, h);
        if (idx.emplace(c, vertex_total + static_cast<int>(cs.size())).second) cs.push_back(c);
      }
      vertex_total += static_cast<int>(cs.size());
      vcosets.push_back(cs);
      vindex.push_back(idx);
    }

    struct EdgeOrbitSpec {
      int from_orbit, to_orbit, twist;
      std::vector<int> stab;
    };
    std::vector<EdgeOrbitSpec> specs;
    int edge_total = 0;
    const int target_rank = opt.min_rank + pick(opt.max_rank - opt.min_rank + 1);
    bool ok = true;
    while (edge_total - vertex_total + 1 < target_rank) {
      if (2 * static_cast<int>(specs.size()) + 2 > opt.max_directed_orbits) {
        ok = false;
        break;
      }
      EdgeOrbitSpec s;
      s.from_orbit = pick(static_cast<int>(vstab.size()));
      s.to_orbit = pick(static_cast<int>(vstab.size()));
      s.twist = pick(n);
      auto allowed = detail::meet(vstab[s.from_orbit], grp.conjugate(s.twist, vstab[s.to_orbit]));
      std::vector<std::vector<int>> options;
      for (const auto& k : subs) {
        if (detail::subset_of(k, allowed)) options.push_back(k);
      }
      s.stab = options[pick(static_cast<int>(options.size()))];
      edge_total += n / static_cast<int>(s.stab.size());
      specs.push_back(s);
    }
    if (!ok || edge_total - vertex_total + 1 != target_rank) continue;

    GGraph g;
    for (std::size_t o = 0; o < vcosets.size(); ++o) {
      for (std::size_t c = 0; c < vcosets[o].size(); ++c) {
        g.add_vertex(o == 0 ? std::string("*") : "v" + std::to_string(g.vertex_count()));
      }
    }
    g.set_basepoint(0);
    // Directed id of the edge for coset gK in each orbit, for the action.
    std::vector<std::map<std::vector<int>, int>> eindex(specs.size());
    for (std::size_t o = 0; o < specs.size(); ++o) {
      const auto& s = specs[o];
      for (int x = 0; x < n; ++x) {
        auto c = grp.coset(x, s.stab);
        if (eindex[o].count(c)) continue;
        int a = vindex[s.from_orbit].at(grp.coset(x, vstab[s.from_orbit]));
        int b = vindex[s.to_orbit].at(grp.coset(grp.mul[x][s.twist], vstab[s.to_orbit]));
        int k = g.add_edge("e" + std::to_string(g.edge_count()), a, b);
        eindex[o][c] = 2 * k;
      }
    }
    std::vector<Perm> gens;
    for (int x : grp.gens) {
      Perm p(g.directed_count());
      for (std::size_t o = 0; o < specs.size(); ++o) {
        for (const auto& [c, d] : eindex[o]) {
          int img = eindex[o].at(grp.coset(grp.mul[x][c.front()], specs[o].stab));
          p[d] = img;
          p[d + 1] = img + 1;
        }
      }
      gens.push_back(p);
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < gens.size(); ++i) names.push_back("t" + std::to_string(i + 1));
    g.set_group(FiniteGroup::generated_by(gens, names, g.directed_count()));
    if (!g.validate().ok()) continue;

    auto basis = detail::tree_basis(g);
    const int rank = static_cast<int>(basis.size());
    const int twists = pick(opt.max_nielsen + 1);
    for (int t = 0; t < twists && rank > 1; ++t) {
      int i = pick(rank);
      int j = pick(rank - 1);
      if (j >= i) ++j;
      auto other = pick(2) ? basis[j] : reverse_path(basis[j]);
      EdgePath p;
      if (pick(2)) {
        p = basis[i];
        p.insert(p.end(), other.begin(), other.end());
      } else {
        p = other;
        p.insert(p.end(), basis[i].begin(), basis[i].end());
      }
      basis[i] = reduce_path(p);
    }
    MarkedGGraph m;
    try {
      m = MarkedGGraph::derive(g, basis);
      if (opt.reduced) m = collapse(m, maximal_invariant_forest(m.graph()));
    } catch (const ValidationError&) {
      continue;
    }
    if (!m.validate().ok()) continue;
    return RandomInstance{m, gname, attempt};
  }
  throw ValidationError("random_instance: no admissible instance found");
}

}  // namespace auter
