#include <gtest/gtest.h>

#include "auter/checks.hpp"
#include "auter/fixtures.hpp"
#include "auter/io.hpp"

using namespace auter;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(Parse, ThetaFile) {
  auto m = parse(R"(# theta graph
[graph]
basepoint = *
vertex v
edge e1 : * -> v
edge e2 : * -> v
edge e3 : * -> v
[group]
gen t : e2->e3, e3->e2
[marking]
x1 = e1 ~e2
x2 = e1 ~e3
)");
  EXPECT_TRUE(m.validate().ok()) << m.validate().to_string();
  EXPECT_EQ(m.graph().group().order(), 2);
  EXPECT_EQ(m.canonical_form(), fixtures::fix_theta().canonical_form());
}

TEST(Parse, MissingBasepointNamesSection) {
  auto e = parse_error("[graph]\nvertex v\nedge a : v -> v\n[marking]\nx1 = a\n");
  EXPECT_NE(std::string(e.what()).find("[graph]"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("basepoint"), std::string::npos) << e.what();
}

TEST(Parse, ErrorsCarryPositions) {
  auto e = parse_error("[graph]\nbasepoint = *\nedge a : * -> w\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 15u);
  EXPECT_NE(std::string(e.what()).find("unknown vertex 'w'"), std::string::npos);
  auto u = parse_error("[graph]\nbasepoint = *\nedge a : * -> *\n[marking]\nx1 = a  q\n");
  EXPECT_EQ(u.line(), 5u);
  EXPECT_EQ(u.column(), 9u);
  auto s = parse_error("[graph]\nbasepoint = *\nedge a : * -> *\nedge b : * -> *\n[marking]\nx1 = a\nx3 = b\n");
  EXPECT_NE(std::string(s.what()).find("skips x2"), std::string::npos);
  auto h = parse_error("basepoint = *\n");
  EXPECT_EQ(h.line(), 1u);
  auto g = parse_error("[graph]\nbasepoint = *\nedge a : * -> *\nedge b : * -> *\n[group]\ngen t : a->b, a->~b\n");
  EXPECT_NE(std::string(g.what()).find("conflicting"), std::string::npos);
}

TEST(Parse, UnreducedMarkingWarns) {
  auto p = parse_instance("[graph]\nbasepoint = *\nedge a : * -> *\nedge b : * -> *\n[marking]\nx1 = a b ~b\nx2 = b\n");
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_NE(p.warnings[0].find("x1"), std::string::npos);
  EXPECT_EQ(p.marked.basis_paths()[0].size(), 1u);
  EXPECT_TRUE(p.marked.validate().ok());
}

TEST(Parse, NonBasisMarkingIsReportedByValidate) {
  auto p = parse_instance("[graph]\nbasepoint = *\nedge a : * -> *\nedge b : * -> *\n[marking]\nx1 = a\nx2 = a a\n");
  EXPECT_FALSE(p.marked.validate().ok());
}

TEST(Serialize, RoundTrip) {
  auto instances = checks::fixture_instances();
  for (auto& in : checks::random_instances(2, 20, false)) instances.push_back(in);
  for (const auto& in : instances) {
    auto text = serialize(in.marked);
    auto back = parse(text);
    EXPECT_EQ(serialize(back), text) << in.name;
    EXPECT_EQ(back.canonical_form(), in.marked.canonical_form()) << in.name;
  }
}

TEST(Dot, GraphOutput) {
  auto dot = graph_dot(fixtures::fix_theta().graph(), "theta");
  EXPECT_EQ(dot.rfind("digraph theta {", 0), 0u);
  EXPECT_NE(dot.find("shape=box"), std::string::npos);
  EXPECT_NE(dot.find("e1"), std::string::npos);
}
