#pragma once

// Line-oriented instance files:
//
//   # comment
//   [graph]
//   basepoint = *
//   vertex v
//   edge e1 : * -> v
//   [group]
//   order = 2
//   gen t : e2->e3, e3->e2
//   [marking]
//   x1 = e1 ~e2
//
// Generators list the images of directed edges; unlisted edges are fixed and
// ~e follows e. Syntax errors carry a line and column; semantic problems
// (admissibility, group order, marking) are left to validate().

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "auter/error.hpp"
#include "auter/ggraph.hpp"
#include "auter/group.hpp"
#include "auter/marking.hpp"

namespace auter {

struct ParsedInstance {
  MarkedGGraph marked;
  std::vector<std::string> warnings;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> split_tokens(std::string_view line, std::size_t offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({std::string(line.substr(i, j - i)), offset + i + 1});
    i = j;
  }
  return out;
}

struct Generator {
  std::string name;
  std::size_t line;
  std::vector<std::pair<Token, Token>> moves;
};

class InstanceParser {
 public:
  explicit InstanceParser(std::string_view text) : text_(text) {}

  ParsedInstance run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = raw.substr(0, raw.find('#'));
      auto toks = split_tokens(line);
      if (toks.empty()) continue;
      if (toks[0].text.front() == '[') {
        section_header(toks, lineno);
        continue;
      }
      if (section_.empty()) throw ParseError(lineno, toks[0].column, "content before any section header");
      if (section_ == "graph") {
        graph_line(line, toks, lineno);
      } else if (section_ == "group") {
        group_line(line, toks, lineno);
      } else {
        marking_line(toks, lineno);
      }
    }
    if (!seen_graph_) throw ParseError(lineno + 1, 1, "missing [graph] section");
    if (base_ < 0) throw ParseError(graph_line_, 1, "[graph] section has no basepoint line");
    return build();
  }

 private:
  void section_header(const std::vector<Token>& toks, std::size_t lineno) {
    if (toks.size() != 1 || toks[0].text.back() != ']') throw ParseError(lineno, toks[0].column, "malformed section header");
    std::string name = toks[0].text.substr(1, toks[0].text.size() - 2);
    if (name != "graph" && name != "group" && name != "marking") {
      throw ParseError(lineno, toks[0].column, "unknown section [" + name + "]");
    }
    if (name == "graph") {
      if (seen_graph_) throw ParseError(lineno, toks[0].column, "duplicate [graph] section");
      seen_graph_ = true;
      graph_line_ = lineno;
    } else if (!seen_graph_) {
      throw ParseError(lineno, toks[0].column, "[" + name + "] before [graph]");
    }
    section_ = name;
  }

  int declare_vertex(const Token& t, std::size_t lineno, bool allow_existing) {
    if (auto v = graph_.find_vertex(t.text)) {
      if (allow_existing) return *v;
      throw ParseError(lineno, t.column, "duplicate vertex '" + t.text + "'");
    }
    check_identifier(t, lineno);
    return graph_.add_vertex(t.text);
  }

  static void check_identifier(const Token& t, std::size_t lineno) {
    for (char c : t.text) {
      if (c == '~' || c == ':' || c == ',' || c == '=' || c == '[' || c == ']') {
        throw ParseError(lineno, t.column, "invalid identifier '" + t.text + "'");
      }
    }
    if (t.text.find("->") != std::string::npos) throw ParseError(lineno, t.column, "invalid identifier '" + t.text + "'");
  }

  void graph_line(const std::string&, const std::vector<Token>& toks, std::size_t lineno) {
    const auto& kw = toks[0].text;
    if (kw == "basepoint") {
      if (toks.size() != 3 || toks[1].text != "=") throw ParseError(lineno, toks[0].column, "expected 'basepoint = <id>'");
      if (base_ >= 0) throw ParseError(lineno, toks[0].column, "duplicate basepoint line");
      base_ = declare_vertex(toks[2], lineno, true);
    } else if (kw == "vertex") {
      if (toks.size() != 2) throw ParseError(lineno, toks[0].column, "expected 'vertex <id>'");
      if (!vertex_lines_.insert(toks[1].text).second) {
        throw ParseError(lineno, toks[1].column, "duplicate vertex '" + toks[1].text + "'");
      }
      declare_vertex(toks[1], lineno, true);
    } else if (kw == "edge") {
      if (toks.size() != 6 || toks[2].text != ":" || toks[4].text != "->") {
        throw ParseError(lineno, toks[0].column, "expected 'edge <id> : <from> -> <to>'");
      }
      check_identifier(toks[1], lineno);
      if (graph_.find_edge(toks[1].text)) throw ParseError(lineno, toks[1].column, "duplicate edge '" + toks[1].text + "'");
      auto from = graph_.find_vertex(toks[3].text);
      if (!from) throw ParseError(lineno, toks[3].column, "unknown vertex '" + toks[3].text + "'");
      auto to = graph_.find_vertex(toks[5].text);
      if (!to) throw ParseError(lineno, toks[5].column, "unknown vertex '" + toks[5].text + "'");
      graph_.add_edge(toks[1].text, *from, *to);
    } else {
      throw ParseError(lineno, toks[0].column, "unknown [graph] statement '" + kw + "'");
    }
  }

  void group_line(const std::string& line, const std::vector<Token>& toks, std::size_t lineno) {
    const auto& kw = toks[0].text;
    if (kw == "order") {
      if (toks.size() != 3 || toks[1].text != "=") throw ParseError(lineno, toks[0].column, "expected 'order = <k>'");
      try {
        std::size_t used = 0;
        order_ = std::stoi(toks[2].text, &used);
        if (used != toks[2].text.size() || order_ < 1) throw std::invalid_argument("order");
      } catch (const std::exception&) {
        throw ParseError(lineno, toks[2].column, "order must be a positive integer");
      }
    } else if (kw == "gen") {
      auto colon = line.find(':');
      if (toks.size() < 3 || toks[2].text != ":" || colon == std::string::npos) {
        throw ParseError(lineno, toks[0].column, "expected 'gen <id> : <edge>-><edge>, ...'");
      }
      Generator gen{toks[1].text, lineno, {}};
      std::string rest = line.substr(colon + 1);
      std::size_t start = 0;
      while (start <= rest.size()) {
        auto comma = rest.find(',', start);
        std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        auto parts = split_tokens(item, colon + 1 + start);
        std::string joined;
        for (const auto& p : parts) joined += p.text;
        if (!joined.empty()) {
          auto arrow = joined.find("->");
          if (arrow == std::string::npos || arrow == 0 || arrow + 2 == joined.size()) {
            throw ParseError(lineno, parts.front().column, "expected '<edge>-><edge>'");
          }
          Token src{joined.substr(0, arrow), parts.front().column};
          Token dst{joined.substr(arrow + 2), parts.front().column + arrow + 2};
          gen.moves.emplace_back(src, dst);
        } else if (comma != std::string::npos) {
          throw ParseError(lineno, colon + 2 + start, "empty generator item");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      gens_.push_back(std::move(gen));
    } else {
      throw ParseError(lineno, toks[0].column, "unknown [group] statement '" + kw + "'");
    }
  }

  void marking_line(const std::vector<Token>& toks, std::size_t lineno) {
    const auto& name = toks[0].text;
    if (toks.size() < 2 || toks[1].text != "=" || name.size() < 2 || name[0] != 'x') {
      throw ParseError(lineno, toks[0].column, "expected 'x<i> = <edge path>'");
    }
    int index = 0;
    try {
      std::size_t used = 0;
      index = std::stoi(name.substr(1), &used);
      if (used != name.size() - 1 || index < 1) throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw ParseError(lineno, toks[0].column, "bad generator name '" + name + "'");
    }
    if (marking_.count(index)) throw ParseError(lineno, toks[0].column, "duplicate marking for " + name);
    EdgePath p;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      auto d = graph_.find_directed(toks[i].text);
      if (!d) throw ParseError(lineno, toks[i].column, "unknown edge '" + toks[i].text + "'");
      p.push_back(*d);
    }
    marking_[index] = {p, lineno};
  }

  int directed(const Token& t, std::size_t lineno) const {
    auto d = graph_.find_directed(t.text);
    if (!d) throw ParseError(lineno, t.column, "unknown edge '" + t.text + "'");
    return *d;
  }

  ParsedInstance build() {
    ParsedInstance out;
    graph_.set_basepoint(base_);
    const std::size_t n = graph_.directed_count();
    std::vector<Perm> perms;
    std::vector<std::string> names;
    for (const auto& gen : gens_) {
      Perm p(n, -1);
      for (const auto& [src, dst] : gen.moves) {
        int a = directed(src, gen.line);
        int b = directed(dst, gen.line);
        for (auto [x, y] : {std::pair{a, b}, std::pair{reverse(a), reverse(b)}}) {
          if (p[x] >= 0 && p[x] != y) throw ParseError(gen.line, src.column, "conflicting image for '" + src.text + "'");
          p[x] = y;
        }
      }
      std::vector<bool> hit(n, false);
      for (std::size_t d = 0; d < n; ++d) {
        if (p[d] < 0) p[d] = static_cast<int>(d);
      }
      for (std::size_t d = 0; d < n; ++d) {
        if (hit[p[d]]) throw ParseError(gen.line, 1, "generator " + gen.name + " is not a permutation of the edges");
        hit[p[d]] = true;
      }
      perms.push_back(std::move(p));
      names.push_back(gen.name);
    }
    FiniteGroup group = FiniteGroup::generated_by(perms, names, n);
    graph_.set_group(std::move(group), order_);

    std::vector<EdgePath> basis;
    for (const auto& [index, entry] : marking_) {
      if (index != static_cast<int>(basis.size()) + 1) {
        throw ParseError(entry.second, 1, "marking skips x" + std::to_string(basis.size() + 1));
      }
      EdgePath reduced = reduce_path(entry.first);
      if (reduced.size() != entry.first.size()) {
        out.warnings.push_back("line " + std::to_string(entry.second) + ": x" + std::to_string(index) +
                               " was not reduced; using its reduction");
      }
      basis.push_back(std::move(reduced));
    }
    try {
      out.marked = MarkedGGraph::derive(graph_, basis);
    } catch (const ValidationError&) {
      out.marked = MarkedGGraph(graph_, std::move(basis), {});
    }
    return out;
  }

  std::string_view text_;
  std::string section_;
  bool seen_graph_ = false;
  std::size_t graph_line_ = 0;
  GGraph graph_;
  int base_ = -1;
  std::set<std::string> vertex_lines_;
  int order_ = -1;
  std::vector<Generator> gens_;
  std::map<int, std::pair<EdgePath, std::size_t>> marking_;
};

}  // namespace detail

inline ParsedInstance parse_instance(std::string_view text) { return detail::InstanceParser(text).run(); }

inline MarkedGGraph parse(std::string_view text) { return parse_instance(text).marked; }

inline ParsedInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

inline std::string serialize(const MarkedGGraph& m) {
  const auto& g = m.graph();
  std::string s = "[graph]\n";
  for (int v = 0; v < g.vertex_count(); ++v) s += "vertex " + g.vertex_name(v) + "\n";
  s += "basepoint = " + g.vertex_name(g.basepoint()) + "\n";
  for (int e = 0; e < g.edge_count(); ++e) {
    s += "edge " + g.edge_name(e) + " : " + g.vertex_name(g.initial(2 * e)) + " -> " +
         g.vertex_name(g.terminal(2 * e)) + "\n";
  }
  s += "\n[group]\n";
  s += "order = " + std::to_string(g.group().order()) + "\n";
  const auto& grp = g.group();
  for (std::size_t i = 0; i < grp.generators().size(); ++i) {
    std::string name = i < grp.generator_names().size() ? grp.generator_names()[i] : "g" + std::to_string(i + 1);
    s += "gen " + name + " :";
    bool first = true;
    for (int e = 0; e < g.edge_count(); ++e) {
      int img = grp.act(grp.generators()[i], 2 * e);
      if (img == 2 * e) continue;
      s += std::string(first ? " " : ", ") + g.directed_name(2 * e) + "->" + g.directed_name(img);
      first = false;
    }
    s += "\n";
  }
  s += "\n[marking]\n";
  for (int j = 0; j < m.rank(); ++j) {
    s += "x" + std::to_string(j + 1) + " =";
    for (int d : m.basis_paths()[j]) s += " " + g.directed_name(d);
    s += "\n";
  }
  return s;
}

/// Graphviz rendering of the underlying graph; the basepoint is boxed.
inline std::string graph_dot(const GGraph& g, const std::string& name = "graph") {
  std::string s = "digraph " + name + " {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    s += "  \"" + g.vertex_name(v) + "\"" + (v == g.basepoint() ? " [shape=box]" : "") + ";\n";
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    s += "  \"" + g.vertex_name(g.initial(2 * e)) + "\" -> \"" + g.vertex_name(g.terminal(2 * e)) +
         "\" [label=\"" + g.edge_name(e) + "\"];\n";
  }
  return s + "}\n";
}

}  // namespace auter
