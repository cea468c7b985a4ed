#include <gtest/gtest.h>

#include "auter/checks.hpp"
#include "auter/fixtures.hpp"

using namespace auter;

namespace {

int edge(const GGraph& g, const char* name) { return *g.find_directed(name); }

EdgeSet set(const GGraph& g, std::initializer_list<const char*> names) {
  std::vector<int> ids;
  for (const char* n : names) ids.push_back(edge(g, n));
  return make_set(ids);
}

std::string path_string(const MarkedGGraph& m, const char* word) {
  std::string s;
  for (int d : m.path_of_word(parse_word(word, m.rank()))) s += (s.empty() ? "" : " ") + m.graph().directed_name(d);
  return s;
}

}  // namespace

TEST(BlowUp, SwapRose) {
  auto s = fixtures::fix_r2_swap();
  const auto& g = s.graph();
  auto bu = blow_up(s, set(g, {"a", "b"}));
  ASSERT_EQ(bu.new_edges.size(), 1u);
  ASSERT_EQ(bu.new_vertices.size(), 1u);
  const auto& h = bu.marked.graph();
  EXPECT_EQ(h.vertex_count(), 2);
  EXPECT_EQ(h.edge_count(), 3);
  const int e = bu.new_edges.front();
  EXPECT_EQ(h.terminal(e), h.basepoint());
  EXPECT_EQ(h.terminal(reverse(e)), bu.new_vertices.front());
  EXPECT_EQ(h.terminal(edge(h, "a")), bu.new_vertices.front());
  EXPECT_EQ(h.terminal(edge(h, "b")), bu.new_vertices.front());
  EXPECT_EQ(h.orbit(e).members.size(), 1u);
  EXPECT_TRUE(bu.marked.validate().ok()) << bu.marked.validate().to_string();
  auto x1 = bu.marked.path_of_word(parse_word("x1", 2));
  EXPECT_EQ(x1, (EdgePath{edge(h, "a"), e}));
  EXPECT_EQ(collapse(bu.marked, bu.new_edge_forest()).canonical_form(), s.canonical_form());
}

TEST(BlowUp, RejectsNonIdealSet) {
  auto r = fixtures::fix_r2();
  EXPECT_THROW(blow_up(r, set(r.graph(), {"a"})), ValidationError);
}

TEST(Whitehead, ConjugatingMoveOnRose) {
  auto r = fixtures::fix_r2();
  const auto& g = r.graph();
  auto gamma = set_difference(g.edges_at(g.basepoint()), EdgeSet{edge(g, "~a")});
  auto w = whitehead(r, gamma, edge(g, "a"));
  EXPECT_TRUE(w.validate().ok());
  EXPECT_EQ(path_string(w, "x1"), "a");
  EXPECT_EQ(path_string(w, "x2"), "~a b a");
}

TEST(Whitehead, TargetMustLieInSet) {
  auto r = fixtures::fix_r2();
  const auto& g = r.graph();
  EXPECT_THROW(whitehead(r, set(g, {"a", "~b"}), edge(g, "b")), HypothesisError);
  // ~a is in the set's orbit union as the reverse of a, so it is outside D.
  EXPECT_THROW(whitehead(r, set(g, {"a", "~a"}), edge(g, "a")), HypothesisError);
}

TEST(Reductivity, ConjugatingMoveIsNotReductive) {
  auto r = fixtures::fix_r2();
  const auto& g = r.graph();
  auto gamma = set_difference(g.edges_at(g.basepoint()), EdgeSet{edge(g, "~a")});
  auto aut = reductivity(r, gamma, edge(g, "a"), NormKind::Aut, 3);
  ASSERT_GE(aut.value.size(), 3u);
  EXPECT_EQ(aut.value[0], 0);
  EXPECT_EQ(aut.value[1], 0);
  EXPECT_EQ(aut.value[2], -2);
  EXPECT_EQ(aut.verdict, Verdict::NotReductive);
  auto out = reductivity(r, gamma, edge(g, "a"), NormKind::Out, 3);
  EXPECT_TRUE(out.value.is_zero());
  EXPECT_FALSE(out.undetermined);
}

TEST(Reductivity, WordRoseMove) {
  auto w = fixtures::fix_r2w();
  const auto& g = w.graph();
  auto out = reductivity(w, set(g, {"a", "~b"}), edge(g, "a"), NormKind::Out, 3);
  EXPECT_EQ(out.verdict, Verdict::Reductive);
  EXPECT_GT(out.value.leading_sign(), 0);
  auto after = whitehead(w, set(g, {"a", "~b"}), edge(g, "a"));
  const auto n = norm(after, NormKind::Out, 1);
  EXPECT_EQ(n.to_string(), "out h=1 : [1, 1, 1, 1]");
}

TEST(MaxPair, Fixtures) {
  EXPECT_FALSE(max_reductive_pair(fixtures::fix_r2(), 4).has_value());
  EXPECT_FALSE(max_reductive_pair(fixtures::fix_r2_swap(), 4).has_value());
  auto w = fixtures::fix_r2w();
  auto p = max_reductive_pair(w, 4);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(pair_name(w.graph(), *p), "(*:{~a,b}, ~a)");
}

TEST(MaxPair, StrictModeWithoutCandidates) {
  // On the swap rose every candidate has empty D, so strict mode has nothing to refuse.
  EXPECT_NO_THROW(max_reductive_pair(fixtures::fix_r2_swap(), 3, true));
}

TEST(GreedyReduce, Fixtures) {
  auto r = greedy_reduce(fixtures::fix_r2(), 4, 100);
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(r.collapses, 0);
  auto t = greedy_reduce(fixtures::fix_theta(), 4, 100);
  EXPECT_EQ(t.collapses, 1);
  EXPECT_EQ(t.steps, 0);
  EXPECT_TRUE(is_reduced(t.marked.graph()));
  auto w = greedy_reduce(fixtures::fix_r2w(), 4, 100);
  EXPECT_GE(w.steps, 1);
  EXPECT_EQ(norm(w.marked, NormKind::Out, 1).to_string(), "out h=1 : [1, 1, 1, 1]");
  for (std::size_t i = 1; i < w.tot_norms.size(); ++i) {
    EXPECT_EQ(compare(w.tot_norms[i], w.tot_norms[i - 1]), Ordering::Less);
  }
}

TEST(GreedyReduce, RandomDescent) {
  checks::Tally t("descent");
  for (const auto& in : checks::random_instances(17, 15, false)) checks::descent(in, 3, 500, t);
  EXPECT_GT(t.checked, 0);
  EXPECT_EQ(t.violations, 0) << (t.messages.empty() ? "" : t.messages.front());
}

TEST(Lemmas, SmallSample) {
  checks::Tally t21("t21"), t22("t22"), push("push"), shrink("shrink"), literal("literal"), t17("t17"), t18("t18"),
      t25("t25");
  auto instances = checks::random_instances(23, 10, true);
  for (const auto& in : checks::fixture_instances()) instances.push_back({in.name, checks::reduced_form(in.marked)});
  for (const auto& in : instances) {
    NormContext ctx(in.marked, 3);
    checks::crossing_inequalities(in, ctx, t21, t22);
    checks::pushing_shrinking(in, ctx, NormKind::Tot, push, shrink, literal);
    checks::inverse_and_gamma(in, ctx, t17, t18, t25);
  }
  for (const auto* t : {&t21, &t22, &push, &shrink, &t17, &t18, &t25}) {
    EXPECT_EQ(t->violations, 0) << t->summary() << (t->messages.empty() ? "" : "\n" + t->messages.front());
  }
}
