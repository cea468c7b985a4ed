#include <gtest/gtest.h>

#include <random>

#include "auter/fixtures.hpp"
#include "auter/io.hpp"
#include "auter/random_instance.hpp"

using namespace auter;

namespace {

EdgePath path(const GGraph& g, std::initializer_list<const char*> names) {
  EdgePath p;
  for (const char* n : names) p.push_back(*g.find_directed(n));
  return p;
}

}  // namespace

TEST(PathOfWord, Examples) {
  auto r2 = fixtures::fix_r2();
  EXPECT_EQ(r2.path_of_word(parse_word("x1", 2)), path(r2.graph(), {"a"}));
  auto th = fixtures::fix_theta();
  EXPECT_EQ(th.path_of_word(parse_word("x1", 2)), path(th.graph(), {"e1", "~e2"}));
  auto w = fixtures::fix_r2w();
  EXPECT_EQ(w.path_of_word(parse_word("x2 ~x1", 2)), path(w.graph(), {"b"}));
}

TEST(LoopOfClass, Examples) {
  auto r2 = fixtures::fix_r2();
  EXPECT_EQ(r2.loop_of_class(ConjClass(parse_word("x1", 2))), path(r2.graph(), {"a"}));
  auto th = fixtures::fix_theta();
  EXPECT_EQ(th.loop_of_class(ConjClass(parse_word("x1", 2))), path(th.graph(), {"e1", "~e2"}));
  auto w = fixtures::fix_r2w();
  EXPECT_EQ(w.loop_of_class(ConjClass(parse_word("x2 ~x1", 2))), path(w.graph(), {"b"}));
}

TEST(LyndonLength, Examples) {
  auto r2 = fixtures::fix_r2();
  EXPECT_EQ(r2.lyndon_length(Word{}), 0);
  EXPECT_EQ(r2.lyndon_length(parse_word("x1 x2", 2)), 2);
  EXPECT_EQ(fixtures::fix_theta().lyndon_length(parse_word("x1", 2)), 2);
}

TEST(LyndonLength, LengthFunctionAxioms) {
  std::mt19937_64 rng(21);
  for (const auto& [name, m] : fixtures::all()) {
    const int n = m.rank();
    auto words = enumerate_words(n, 3);
    for (int t = 0; t < 200; ++t) {
      const auto& u = words[rng() % words.size()];
      const auto& v = words[rng() % words.size()];
      EXPECT_EQ(m.lyndon_length(u), m.lyndon_length(u.inverse())) << name;
      EXPECT_LE(m.lyndon_length(u * v), m.lyndon_length(u) + m.lyndon_length(v)) << name;
    }
  }
}

TEST(LoopOfClass, MinimumOverConjugates) {
  for (const auto& [name, m] : fixtures::all()) {
    auto conj = enumerate_words(m.rank(), 3);
    conj.push_back(Word{});
    for (const auto& c : enumerate_classes(m.rank(), 3)) {
      int best = 1 << 30;
      for (const auto& g : conj) best = std::min(best, m.lyndon_length(g * c.rep() * g.inverse()));
      EXPECT_EQ(static_cast<int>(m.loop_of_class(c).size()), best) << name << " " << c.to_string();
    }
  }
}

TEST(VerifyRealization, Examples) {
  auto s = fixtures::fix_r2_swap();
  EXPECT_TRUE(s.verify_realization().ok());
  EXPECT_EQ(s.realization(1).image(1), parse_word("x2", 2));
  auto id = FreeAutomorphism::identity(2);
  MarkedGGraph wrong(s.graph(), s.basis_paths(), {id, id});
  auto r = wrong.verify_realization();
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.to_string().find("x1"), std::string::npos);
  auto th = fixtures::fix_theta();
  EXPECT_TRUE(th.verify_realization().ok());
  EXPECT_EQ(th.realization(1).image(1), parse_word("x2", 2));
}

TEST(Marking, RejectsNonBasis) {
  auto g = fixtures::fix_r2().graph();
  EXPECT_THROW(MarkedGGraph::derive(g, {path(g, {"a"}), path(g, {"a", "a"})}), ValidationError);
  EXPECT_THROW(MarkedGGraph::derive(g, {path(g, {"a"})}), ValidationError);
}

TEST(Marking, CollapsePushesMarkingForward) {
  auto m = collapse(fixtures::fix_theta(), maximal_invariant_forest(fixtures::fix_theta().graph()));
  EXPECT_TRUE(m.validate().ok());
  RandomOptions opt;
  opt.reduced = false;
  for (std::uint64_t s = 200; s < 240; ++s) {
    auto r = random_instance(s, opt).marked;
    auto c = collapse(r, maximal_invariant_forest(r.graph()));
    EXPECT_TRUE(c.validate().ok()) << c.validate().to_string();
    // Collapsing only shortens loops.
    for (const auto& cls : enumerate_classes(r.rank(), 3)) {
      EXPECT_LE(c.loop_of_class(cls).size(), r.loop_of_class(cls).size());
    }
  }
}

TEST(Marking, CanonicalFormIgnoresNames) {
  auto a = fixtures::fix_r2();
  auto b = parse(R"([graph]
basepoint = o
edge p : o -> o
edge q : o -> o
[marking]
x1 = p
x2 = q
)");
  EXPECT_EQ(a.canonical_form(), b.canonical_form());
  EXPECT_NE(a.canonical_form(), fixtures::fix_r2w().canonical_form());
}
