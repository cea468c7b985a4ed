#include <gtest/gtest.h>

#include "auter/checks.hpp"
#include "auter/fixtures.hpp"

using namespace auter;

namespace {

EdgeSet set(const GGraph& g, std::initializer_list<const char*> names) {
  std::vector<int> ids;
  for (const char* n : names) ids.push_back(*g.find_directed(n));
  return make_set(ids);
}

IdealEdge ideal(const GGraph& g, std::initializer_list<const char*> names) {
  return require_ideal_edge(g, set(g, names));
}

}  // namespace

TEST(IdealEdge, ThetaExamples) {
  auto g = fixtures::fix_theta().graph();
  // At v the translate of {e1,e2} overlaps it in e1 only; the complement is also a single edge.
  EXPECT_FALSE(is_ideal_edge(g, set(g, {"e1", "e2"})));
  EXPECT_TRUE(is_ideal_edge(g, set(g, {"~e2", "~e3"})));
  EXPECT_FALSE(is_ideal_edge(g, set(g, {"~e1"})));
  // Edges of one set must share an endpoint.
  EXPECT_FALSE(is_ideal_edge(g, set(g, {"e1", "~e2"})));
}

TEST(IdealEdge, CardinalityRules) {
  auto r = fixtures::fix_r2().graph();
  EXPECT_TRUE(is_ideal_edge(r, set(r, {"a", "b", "~b"})));
  EXPECT_FALSE(is_ideal_edge(r, set(r, {"a", "~a", "b", "~b"})));
  EXPECT_FALSE(is_ideal_edge(r, set(r, {"a"})));
  auto t = fixtures::fix_theta().graph();
  // Valence 3 at v: leaving a single edge is not allowed away from the basepoint.
  for (const auto& a : enumerate_ideal_edges(t)) {
    if (a.vertex != t.basepoint()) {
      EXPECT_GE(set_difference(t.edges_at(a.vertex), a.edges).size(), 2u);
    }
  }
}

TEST(IdealEdge, OrbitCountOnRose) {
  auto g = fixtures::fix_r2().graph();
  auto all = enumerate_ideal_edges(g);
  EXPECT_EQ(all.size(), 10u);
  std::size_t pairs = 0;
  for (const auto& a : all) pairs += d_set(g, a).size();
  EXPECT_EQ(pairs, 12u);
}

TEST(IdealEdge, EnumerationIsCanonicalAndCoherent) {
  for (const auto& in : checks::random_instances(5, 25, false)) {
    const auto& g = in.marked.graph();
    auto all = enumerate_ideal_edges(g);
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& a = all[i];
      EXPECT_EQ(canonical(g, a), a) << in.name;
      EXPECT_EQ(a.stab, g.set_stabilizer(a.edges)) << in.name;
      EXPECT_EQ(g.set_orbit(a.edges).size() * a.stab.size(), static_cast<std::size_t>(g.group().order()));
      for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_NE(canonical(g, all[j]), a) << in.name;
    }
  }
}

TEST(DSet, Examples) {
  auto t = fixtures::fix_theta().graph();
  EXPECT_TRUE(d_set(t, ideal(t, {"~e2", "~e3"})).empty());
  auto r = fixtures::fix_r2().graph();
  EXPECT_EQ(d_set(r, ideal(r, {"a", "~b"})), set(r, {"a", "~b"}));
  EXPECT_EQ(d_set(r, ideal(r, {"a", "~a"})), EdgeSet{});
  auto s = fixtures::fix_r2_swap().graph();
  EXPECT_TRUE(d_set(s, ideal(s, {"a", "b"})).empty());
}

TEST(Inverse, Examples) {
  auto s = fixtures::fix_r2_swap().graph();
  auto inv = inverse_edge(s, ideal(s, {"a", "b"}));
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(inv->edges, set(s, {"~a", "~b"}));
  // The complement of {a,~b} is its own translate.
  EXPECT_FALSE(is_invertible(s, ideal(s, {"a", "~b"})));
  auto r = fixtures::fix_r2().graph();
  auto ri = inverse_edge(r, ideal(r, {"a", "~b"}));
  ASSERT_TRUE(ri.has_value());
  EXPECT_EQ(ri->edges, set(r, {"~a", "b"}));
  EXPECT_FALSE(is_invertible(r, ideal(r, {"a", "b", "~b"})));
}

TEST(Compatible, Examples) {
  auto r = fixtures::fix_r2().graph();
  auto ab = ideal(r, {"a", "b"});
  auto abB = ideal(r, {"a", "b", "~b"});
  auto AB = ideal(r, {"~a", "~b"});
  auto aB = ideal(r, {"a", "~b"});
  EXPECT_TRUE(compatible(r, ab, abB));
  EXPECT_TRUE(compatible(r, ab, AB));
  EXPECT_FALSE(compatible(r, ab, aB));
  EXPECT_FALSE(pre_compatible(r, ab, aB));
  // {~a,b} is the inverse of {a,~b} and sits inside {~a,b,~b}.
  EXPECT_FALSE(compatible(r, aB, ideal(r, {"~a", "b", "~b"})));
  EXPECT_TRUE(pre_compatible(r, aB, ideal(r, {"~a", "b", "~b"})));
  // At the basepoint an edge is compatible with its inverse.
  EXPECT_TRUE(compatible(r, aB, *inverse_edge(r, aB)));
  for (const auto& x : enumerate_ideal_edges(r)) {
    EXPECT_TRUE(compatible(r, x, x));
    for (const auto& y : enumerate_ideal_edges(r)) {
      EXPECT_EQ(compatible(r, x, y), compatible(r, y, x));
      if (compatible(r, x, y)) {
        EXPECT_TRUE(pre_compatible(r, x, y));
      }
    }
  }
}

TEST(Crossing, Examples) {
  auto s = fixtures::fix_r2_swap().graph();
  auto c = crossing(s, ideal(s, {"a", "b"}), ideal(s, {"a", "~b"}));
  ASSERT_EQ(c.reps.size(), 1u);
  EXPECT_EQ(c.count, 1);
  EXPECT_EQ(c.components.front(), set(s, {"a", "b"}));
  EXPECT_EQ(c.dual_components.front(), set(s, {"a"}));
  auto r = fixtures::fix_r2().graph();
  EXPECT_EQ(crossing(r, ideal(r, {"a", "b"}), ideal(r, {"~a", "~b"})).count, 0);
  EXPECT_EQ(crossing(r, ideal(r, {"a", "b"}), ideal(r, {"a", "~b"})).count, 1);
}

TEST(Crossing, ComponentsPartitionByOrbits) {
  for (const auto& in : checks::random_instances(9, 15, true)) {
    const auto& g = in.marked.graph();
    auto all = enumerate_ideal_edges(g);
    if (all.size() > 40) all.resize(40);
    for (const auto& a : all) {
      for (const auto& b : all) {
        auto c = crossing(g, a, b);
        if (a.vertex != b.vertex) {
          EXPECT_EQ(c.count, 0);
          continue;
        }
        EdgeSet u;
        for (const auto& comp : c.components) u = set_union(u, comp);
        EXPECT_EQ(u, set_intersection(a.edges, g.orbit_union(b.edges))) << in.name;
      }
    }
  }
}
