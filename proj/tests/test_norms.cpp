#include <gtest/gtest.h>

#include "auter/checks.hpp"
#include "auter/fixtures.hpp"

using namespace auter;

namespace {

int edge(const MarkedGGraph& m, const char* name) { return *m.graph().find_directed(name); }

std::int64_t at(const NormVector& v, const std::string& label) {
  const auto& idx = index_set(v.rank(), v.horizon());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (idx.label(v.kind(), i) == label) return v[i];
  }
  ADD_FAILURE() << "no coordinate " << label;
  return -1;
}

void expect_clean(const checks::Tally& t) {
  EXPECT_GT(t.checked, 0) << t.name;
  EXPECT_EQ(t.violations, 0) << t.summary() << (t.messages.empty() ? "" : "\n" + t.messages.front());
}

}  // namespace

TEST(EdgeAbs, SwapRoseAut) {
  auto s = fixtures::fix_r2_swap();
  EXPECT_EQ(at(edge_abs(s, edge(s, "a"), NormKind::Aut, 2), "x1"), 1);
  EXPECT_EQ(at(edge_abs(s, edge(s, "a"), NormKind::Aut, 2), "x1 x2"), 2);
}

TEST(Dot, Examples) {
  auto s = fixtures::fix_r2_swap();
  EdgeSet a{edge(s, "a")}, b{edge(s, "b")};
  EXPECT_EQ(at(dot(s, a, b, NormKind::Aut, 2), "x1 ~x2"), 2);
  auto r = fixtures::fix_r2();
  EdgeSet ra{edge(r, "a")}, rb{edge(r, "b")};
  EXPECT_EQ(at(dot(r, ra, rb, NormKind::Out, 2), "[x1 x2]"), 0);
  EXPECT_EQ(dot(r, EdgeSet{}, rb, NormKind::Tot, 3).is_zero(), true);
}

TEST(SetAbs, Examples) {
  auto r = fixtures::fix_r2();
  EdgeSet c{edge(r, "a"), edge(r, "b"), edge(r, "~b")};
  EXPECT_EQ(at(set_abs(r, c, NormKind::Aut, 2), "x2"), 2);
  EXPECT_TRUE(set_abs(r, EdgeSet{}, NormKind::Tot, 3).is_zero());
}

TEST(Norm, Examples) {
  auto s = fixtures::fix_r2_swap();
  EXPECT_EQ(at(norm(s, NormKind::Aut, 2), "x1"), 2);
  auto r = fixtures::fix_r2();
  EXPECT_EQ(norm(r, NormKind::Out, 1).to_string(), "out h=1 : [1, 1, 1, 1]");
  EXPECT_EQ(at(norm(r, NormKind::Out, 3), "[x1]"), 1);
  EXPECT_EQ(at(norm(r, NormKind::Out, 3), "[x1 ~x2]"), 2);
  auto tot = norm(r, NormKind::Tot, 2);
  EXPECT_EQ(tot.size(), index_set(2, 2).classes.size() + index_set(2, 2).words.size());
}

TEST(Norm, OutCoordinateIsLoopLength) {
  auto w = fixtures::fix_r2w();
  auto n = norm(w, NormKind::Out, 3);
  const auto& idx = index_set(2, 3);
  for (std::size_t i = 0; i < idx.classes.size(); ++i) {
    EXPECT_EQ(n[i], static_cast<std::int64_t>(w.loop_of_class(idx.classes[i]).size()));
  }
}

TEST(Compare, Examples) {
  NormVector a(NormKind::Out, 1, 1, {1, 2});
  NormVector b(NormKind::Out, 1, 1, {1, 3});
  EXPECT_EQ(compare(a, b), Ordering::Less);
  EXPECT_EQ(compare(b, a), Ordering::Greater);
  EXPECT_EQ(compare(a, a), Ordering::EqualAtHorizon);
  NormVector c(NormKind::Aut, 1, 1, {1, 2});
  EXPECT_THROW(compare(a, c), ValidationError);
}

TEST(NormKind, ParseRoundTrip) {
  for (auto k : {NormKind::Out, NormKind::Aut, NormKind::Tot}) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_THROW(parse_kind("inner"), ValidationError);
}

TEST(NormProperties, FixturesAndRandom) {
  checks::Tally cons("consistency"), ie("inclusion-exclusion"), oo("out-only"), coset("coset"), inv("invariance"),
      law("change-law"), blow("blow-up");
  long aut_ce = 0;
  std::mt19937_64 rng(3);
  auto instances = checks::fixture_instances();
  for (auto& in : checks::random_instances(3, 12, false)) instances.push_back(in);
  for (const auto& in : instances) {
    NormContext ctx(in.marked, 3);
    checks::norm_consistency(in, ctx, cons);
    checks::inclusion_exclusion(in, ctx, rng, 10, ie, oo, aut_ce);
    checks::coset_identity(in, ctx, coset, rng);
    checks::g_invariance(in, ctx, inv);
    checks::norm_change_law(in, ctx, law);
    checks::blowup_correspondence(in, ctx, blow);
  }
  for (const auto* t : {&cons, &ie, &oo, &coset, &inv, &law, &blow}) expect_clean(*t);
  // The out-only identity genuinely fails for aut norms somewhere.
  EXPECT_GT(aut_ce, 0);
}
