#include <gtest/gtest.h>

#include "auter/fixtures.hpp"
#include "auter/io.hpp"
#include "auter/random_instance.hpp"

using namespace auter;

namespace {

GGraph graph_of(const char* text) { return parse_instance(text).marked.graph(); }

int edge(const GGraph& g, const char* name) { return *g.find_directed(name); }

}  // namespace

TEST(Validate, FixturesAreAdmissible) {
  for (const auto& [name, m] : fixtures::all()) EXPECT_TRUE(m.validate().ok()) << name;
}

TEST(Validate, FreeEdge) {
  auto g = graph_of(R"([graph]
basepoint = *
vertex v
edge a : * -> *
edge b : * -> v
[marking]
x1 = a
)");
  auto r = g.validate();
  EXPECT_TRUE(r.has("free edge")) << r.to_string();
}

TEST(Validate, Inversion) {
  auto g = graph_of(R"([graph]
basepoint = *
edge a : * -> *
edge b : * -> *
[group]
gen t : a->~a
[marking]
x1 = a
x2 = b
)");
  EXPECT_TRUE(g.validate().has("inversion"));
}

TEST(Validate, LowValence) {
  auto g = graph_of(R"([graph]
basepoint = *
vertex v
edge a : * -> v
edge b : v -> *
edge c : * -> *
[marking]
x1 = a b
x2 = c
)");
  EXPECT_TRUE(g.validate().has("valence"));
}

TEST(Validate, SubdividedInversionMidpointIsAllowed) {
  // v is the midpoint of an edge flipped by t; smoothing it would need an inversion.
  auto g = graph_of(R"([graph]
basepoint = *
vertex u
vertex w
vertex v
edge p : * -> u
edge q : * -> w
edge r : u -> v
edge s : w -> v
edge l : u -> u
edge k : w -> w
[group]
gen t : p->q, q->p, r->s, s->r, l->k, k->l
[marking]
x1 = p l ~p
x2 = q k ~q
x3 = p r ~s ~q
)");
  EXPECT_FALSE(g.validate().has("valence")) << g.validate().to_string();
}

TEST(Stabilizer, Theta) {
  auto g = fixtures::fix_theta().graph();
  EXPECT_EQ(g.stabilizer(edge(g, "e1")).size(), 2u);
  EXPECT_EQ(g.stabilizer(edge(g, "e2")).size(), 1u);
  auto r2 = fixtures::fix_r2().graph();
  for (int d = 0; d < r2.directed_count(); ++d) EXPECT_EQ(r2.stabilizer(d).size(), 1u);
}

TEST(Orbit, Examples) {
  auto g = fixtures::fix_theta().graph();
  EXPECT_EQ(g.orbit(edge(g, "e2")).members, make_set({edge(g, "e2"), edge(g, "e3")}));
  EXPECT_EQ(g.orbit(edge(g, "e1")).members, EdgeSet{edge(g, "e1")});
  auto s = fixtures::fix_r2_swap().graph();
  EXPECT_EQ(s.orbit(edge(s, "a")).members, make_set({edge(s, "a"), edge(s, "b")}));
}

TEST(Orbit, OrbitStabilizer) {
  for (const auto& [name, m] : fixtures::all()) {
    const auto& g = m.graph();
    for (int d = 0; d < g.directed_count(); ++d) {
      EXPECT_EQ(g.orbit(d).members.size() * g.stabilizer(d).size(), static_cast<std::size_t>(g.group().order()))
          << name;
    }
  }
}

TEST(InvariantForests, Examples) {
  EXPECT_TRUE(invariant_forests(fixtures::fix_r2().graph()).empty());
  auto g = fixtures::fix_theta().graph();
  auto fs = invariant_forests(g);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].edge_pairs, std::vector<int>{edge(g, "e1") >> 1});
}

TEST(Collapse, ThetaGivesSwapRose) {
  auto g = fixtures::fix_theta().graph();
  auto c = collapse(g, invariant_forests(g).front());
  EXPECT_EQ(c.graph.vertex_count(), 1);
  EXPECT_EQ(c.graph.edge_count(), 2);
  EXPECT_EQ(c.graph.basepoint(), 0);
  EXPECT_TRUE(c.graph.validate().ok());
  for (int d = 0; d < c.graph.directed_count(); ++d) {
    EXPECT_TRUE(c.graph.is_loop(d));
    EXPECT_EQ(c.graph.orbit(d).members.size(), 2u);
  }
  auto m = collapse(fixtures::fix_theta(), invariant_forests(g).front());
  EXPECT_TRUE(m.validate().ok());
}

TEST(Collapse, EmptyForestIsIdentity) {
  auto g = fixtures::fix_theta().graph();
  auto c = collapse(g, InvariantForest{});
  EXPECT_EQ(c.graph, g);
}

TEST(Collapse, PreservesRankOnRandomGraphs) {
  RandomOptions opt;
  opt.reduced = false;
  for (std::uint64_t s = 1; s <= 40; ++s) {
    auto m = random_instance(s, opt).marked;
    const auto& g = m.graph();
    auto f = maximal_invariant_forest(g);
    auto c = collapse(m, f);
    EXPECT_EQ(c.graph().rank(), g.rank());
    EXPECT_TRUE(is_reduced(c.graph()));
    EXPECT_TRUE(c.validate().ok()) << c.validate().to_string();
    EXPECT_EQ(c.graph().group().order(), g.group().order());
  }
}

TEST(IsReduced, Examples) {
  EXPECT_TRUE(is_reduced(fixtures::fix_r2().graph()));
  EXPECT_FALSE(is_reduced(fixtures::fix_theta().graph()));
  EXPECT_TRUE(is_reduced(fixtures::fix_r2_swap().graph()));
}

TEST(RandomInstance, Deterministic) {
  for (std::uint64_t s = 100; s < 110; ++s) {
    EXPECT_EQ(serialize(random_instance(s).marked), serialize(random_instance(s).marked));
  }
}
