// auter: command-line front end for pointed marked G-graphs.
//
// Exit codes: 0 ok, 1 validation or parse error, 2 undecided at the horizon,
// 3 hypothesis not met, 4 property violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "auter/checks.hpp"
#include "auter/io.hpp"
#include "auter/moves.hpp"
#include "auter/norms.hpp"
#include "auter/starcomplex.hpp"

namespace {

using namespace auter;

MarkedGGraph load(const std::string& path) {
  auto parsed = read_instance(path);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  auto report = parsed.marked.validate();
  if (!report.ok()) throw ValidationError(report.to_string());
  return parsed.marked;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

int cmd_validate(const std::string& file, const std::string& dot) {
  auto parsed = read_instance(file);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  auto report = parsed.marked.validate();
  if (!report.ok()) {
    std::cout << report.to_string();
    return 1;
  }
  const auto& g = parsed.marked.graph();
  std::cout << "ok: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, |G| = "
            << g.group().order() << ", rank " << parsed.marked.rank() << (is_reduced(g) ? ", reduced" : "") << "\n";
  if (!dot.empty()) write_file(dot, graph_dot(g));
  return 0;
}

int cmd_norm(const std::string& file, int horizon, const std::string& kind_text) {
  auto m = load(file);
  const auto kind = parse_kind(kind_text);
  NormContext ctx(m, horizon);
  auto v = ctx.norm(kind);
  std::cout << v.to_string() << "\n";
  const auto& idx = ctx.index();
  for (std::size_t i = 0; i < v.size(); ++i) std::cout << "  " << idx.label(kind, i) << "\t" << v[i] << "\n";
  return 0;
}

int cmd_ideal_edges(const std::string& file, int horizon) {
  auto m = load(file);
  const auto& g = m.graph();
  NormContext ctx(m, horizon);
  auto edges = enumerate_ideal_edges(g);
  for (const auto& alpha : edges) {
    std::cout << g.vertex_name(alpha.vertex) << " : " << g.set_name(alpha.edges) << " stab=" << alpha.stab.size()
              << " D=" << g.set_name(d_set(g, alpha)) << " inv=" << (is_invertible(g, alpha) ? "yes" : "no") << "\n";
    for (int a : d_set(g, alpha)) {
      auto r = reductivity(ctx, alpha, a, NormKind::Tot);
      std::cout << "    " << g.directed_name(a) << ": " << verdict_name(r.verdict) << " " << brief(r.value)
                << (r.undetermined ? " (sign beyond horizon)" : "") << "\n";
    }
  }
  auto search = search_reductive_pairs(ctx, edges);
  std::cout << edges.size() << " orbits, " << search.candidates << " pairs, " << search.reductive << " reductive\n";
  if (search.best) std::cout << "maximal: " << pair_name(g, *search.best) << "\n";
  for (const auto& w : search.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_move(const std::string& file, const std::string& vertex, const std::string& alpha_text,
             const std::string& target, const std::string& out, int horizon) {
  auto m = load(file);
  const auto& g = m.graph();
  auto v = g.find_vertex(vertex);
  if (!v) throw ValidationError("unknown vertex '" + vertex + "'");
  EdgeSet alpha;
  std::stringstream ss(alpha_text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    auto d = g.find_directed(tok);
    if (!d) throw ValidationError("unknown edge '" + tok + "'");
    alpha.push_back(*d);
  }
  alpha = make_set(alpha);
  for (int d : alpha) {
    if (g.terminal(d) != *v) throw HypothesisError(g.directed_name(d) + " does not end at " + vertex);
  }
  auto a = g.find_directed(target);
  if (!a) throw ValidationError("unknown edge '" + target + "'");
  auto result = whitehead(m, alpha, *a);
  NormContext before(m, horizon);
  NormContext after(result, horizon);
  std::cerr << "tot-norm " << brief(before.norm(NormKind::Tot)) << " -> " << brief(after.norm(NormKind::Tot))
            << "\n";
  if (out.empty()) {
    std::cout << serialize(result);
  } else {
    write_file(out, serialize(result));
  }
  return 0;
}

int cmd_reduce(const std::string& file, int horizon, int max_steps, const std::string& log, const std::string& out,
               bool strict) {
  auto m = load(file);
  auto r = greedy_reduce(m, horizon, max_steps, strict);
  std::string log_text;
  for (const auto& line : r.log) log_text += line + "\n";
  log_text += std::to_string(r.steps) + " moves, " + std::to_string(r.collapses) + " collapses\n";
  if (log.empty()) {
    std::cerr << log_text;
  } else {
    write_file(log, log_text);
  }
  if (out.empty()) {
    std::cout << serialize(r.marked);
  } else {
    write_file(out, serialize(r.marked));
  }
  return 0;
}

int cmd_star(const std::string& file, int horizon, const std::string& family, bool homology, bool retract,
             const std::string& dot, bool strict) {
  auto m = load(file);
  if (!is_reduced(m.graph())) throw HypothesisError("instance is not reduced; collapse an invariant forest first");
  StarContext ctx(m, horizon, strict);
  const auto& ps = ctx.pair_search();
  for (const auto& w : ps.warnings) std::cerr << "warning: " << w << "\n";
  if (ctx.mu()) {
    std::cout << "mu: " << pair_name(m.graph(), *ps.best) << "\n";
  } else {
    std::cout << "mu: none\n";
  }
  auto c = ctx.family(parse_family(family));
  std::cout << family << ": " << c.size() << " orbits\n";
  for (int i : c) std::cout << "  " << ctx.name(i) << "\n";
  auto s = star_complex(ctx, c);
  std::cout << "forests: " << s.forests.size() << ", core: " << s.core.size()
            << ", complex: dimension " << s.complex.dimension() << ", " << s.complex.face_count() << " faces\n";
  if (!dot.empty()) write_file(dot, hasse_dot(s.poset));
  if (homology) {
    auto betti = reduced_homology(s.complex);
    std::cout << "reduced betti:";
    for (long b : betti) std::cout << " " << b;
    std::cout << "\n";
  }
  if (!retract) return 0;
  auto trace = run_retractions(ctx, homology);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    std::cout << "step " << i + 1 << " [" << st.lemma << "] " << st.action << ": " << st.forests_before << " -> "
              << st.forests_after << " forests\n";
  }
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "status: " << trace_status_name(trace.status);
  if (!trace.note.empty()) std::cout << " (" << trace.note << ")";
  std::cout << "\n";
  if (trace.status == TraceStatus::OutOfScope || trace.status == TraceStatus::NoReductiveEdge) return 3;
  std::cout << "final forest: " << ctx.forest_name(trace.final_forest) << "\n";
  return 0;
}

int cmd_selftest(const std::string& suite, std::uint64_t seed, int horizon, int count, const std::string& witness) {
  checks::SuiteOptions o;
  o.seed = seed;
  o.horizon = horizon;
  o.random_count = count;
  o.witness_dir = witness;
  std::vector<std::pair<std::string, checks::SuiteResult (*)(const checks::SuiteOptions&)>> suites;
  if (suite == "norms" || suite == "all") suites.emplace_back("norms", checks::norms_suite);
  if (suite == "lemmas" || suite == "all") suites.emplace_back("lemmas", checks::lemmas_suite);
  if (suite == "star" || suite == "all") suites.emplace_back("star", checks::star_suite);
  bool ok = true;
  for (const auto& [name, run] : suites) {
    auto r = run(o);
    std::cout << "[" << name << "]\n";
    for (const auto& t : r.tallies) {
      std::cout << "  " << t.summary() << "\n";
      for (const auto& msg : t.messages) std::cout << "    " << msg << "\n";
    }
    for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    ok = ok && r.ok();
  }
  std::cout << (ok ? "all checks passed" : "violations found") << "\n";
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointed marked G-graphs: norms, ideal edges, Whitehead moves and star complexes"};
  app.require_subcommand(1);

  std::string file, kind = "tot", vertex, alpha, target, out, log, family = "R", dot, suite = "all", witness;
  int horizon = 5, max_steps = 500, count = 20;
  std::uint64_t seed = 1;
  bool homology = false, retract = false, strict = false;
  int code = 0;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("file", file)->required();
  validate->add_option("--dot", dot, "Write the graph as Graphviz");
  validate->callback([&] { code = cmd_validate(file, dot); });

  auto* norm = app.add_subcommand("norm", "Print a norm vector with its index legend");
  norm->add_option("file", file)->required();
  norm->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  norm->add_option("--kind", kind)->check(CLI::IsMember({"out", "aut", "tot"}));
  norm->callback([&] { code = cmd_norm(file, horizon, kind); });

  auto* ideal = app.add_subcommand("ideal-edges", "List ideal edge orbits with reductivity verdicts");
  ideal->add_option("file", file)->required();
  ideal->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  ideal->callback([&] { code = cmd_ideal_edges(file, horizon); });

  auto* move = app.add_subcommand("move", "Apply a Whitehead move");
  move->add_option("file", file)->required();
  move->add_option("--vertex", vertex)->required();
  move->add_option("--alpha", alpha, "Comma-separated edges, e.g. a,~b")->required();
  move->add_option("--collapse", target)->required();
  move->add_option("--out", out);
  move->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  move->callback([&] { code = cmd_move(file, vertex, alpha, target, out, horizon); });

  auto* reduce = app.add_subcommand("reduce", "Greedy descent by maximally reductive moves");
  reduce->add_option("file", file)->required();
  reduce->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  reduce->add_option("--max-steps", max_steps)->check(CLI::NonNegativeNumber);
  reduce->add_option("--log", log);
  reduce->add_option("--out", out);
  reduce->add_flag("--strict", strict, "Fail when a choice is undecided at the horizon");
  reduce->callback([&] { code = cmd_reduce(file, horizon, max_steps, log, out, strict); });

  auto* star = app.add_subcommand("star", "Ideal forest complex of a reduced instance");
  star->add_option("file", file)->required();
  star->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  star->add_option("--family", family)->check(CLI::IsMember({"R", "C0", "C0p", "C1"}));
  star->add_flag("--homology", homology);
  star->add_flag("--retract", retract);
  star->add_option("--dot", dot, "Write the forest poset as Graphviz");
  star->add_flag("--strict", strict);
  star->callback([&] { code = cmd_star(file, horizon, family, homology, retract, dot, strict); });

  auto* self = app.add_subcommand("selftest", "Run the property suites");
  self->add_option("--suite", suite)->check(CLI::IsMember({"norms", "lemmas", "star", "all"}));
  self->add_option("--seed", seed);
  self->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  self->add_option("--count", count, "Random instances per suite")->check(CLI::NonNegativeNumber);
  self->add_option("--witness-dir", witness, "Write violating instances here");
  self->callback([&] { code = cmd_selftest(suite, seed, horizon, count, witness); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IndeterminateError& e) {
    std::cerr << "undecided at horizon: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis not met: " << e.what() << "\n";
    return 3;
  } catch (const PropertyViolation& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return 4;
  }
  return code;
}
