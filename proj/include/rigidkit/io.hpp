#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigidkit/multigraph.hpp"

namespace rigidkit {

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct GraphFile {
  int d = 0;
  Multigraph graph;
};

namespace detail {

// Whole line must be exactly `count` integers.
inline std::vector<long> integers_on_line(const std::string& text, std::size_t count, int line) {
  std::istringstream is(text);
  std::vector<long> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    long x = 0;
    try {
      x = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw GraphParseError(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw GraphParseError(line, "expected an integer, got '" + tok + "'");
    out.push_back(x);
  }
  if (out.size() != count)
    throw GraphParseError(line, "expected " + std::to_string(count) + " integers, got " + std::to_string(out.size()));
  return out;
}

inline bool skippable(const std::string& s) {
  auto p = s.find_first_not_of(" \t\r");
  return p == std::string::npos || s[p] == '#';
}

}  // namespace detail

// Line 1 `d n m`, then m lines `u v`; '#' lines and blank lines are skipped.
inline GraphFile parse_graph(std::istream& is) {
  GraphFile g;
  std::string text;
  int line = 0;
  bool header = false;
  long m = 0;
  while (std::getline(is, text)) {
    ++line;
    if (detail::skippable(text)) continue;
    if (!header) {
      auto h = detail::integers_on_line(text, 3, line);
      if (h[0] < 2) throw GraphParseError(line, "dimension must be at least 2");
      if (h[1] < 0 || h[2] < 0) throw GraphParseError(line, "negative count");
      g.d = static_cast<int>(h[0]);
      g.graph = Multigraph(static_cast<int>(h[1]));
      m = h[2];
      header = true;
      continue;
    }
    if (g.graph.edge_count() == m) throw GraphParseError(line, "more edge lines than declared");
    auto e = detail::integers_on_line(text, 2, line);
    const long n = g.graph.vertex_count();
    if (e[0] < 0 || e[1] < 0 || e[0] >= n || e[1] >= n) throw GraphParseError(line, "vertex out of range");
    if (e[0] == e[1]) throw GraphParseError(line, "self-loop");
    g.graph.add_edge(static_cast<int>(e[0]), static_cast<int>(e[1]));
  }
  if (!header) throw GraphParseError(line + 1, "missing header 'd n m'");
  if (g.graph.edge_count() != m)
    throw GraphParseError(line + 1, "expected " + std::to_string(m) + " edges, got " + std::to_string(g.graph.edge_count()));
  return g;
}

inline GraphFile parse_graph(const std::string& text) {
  std::istringstream is(text);
  return parse_graph(is);
}

inline void write_graph(std::ostream& os, const Multigraph& G, int d) {
  os << d << ' ' << G.vertex_count() << ' ' << G.edge_count() << '\n';
  for (const auto& e : G.edges()) os << e.u << ' ' << e.v << '\n';
}

}  // namespace rigidkit
