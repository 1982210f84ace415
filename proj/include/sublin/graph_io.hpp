#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sublin/errors.hpp"
#include "sublin/graph.hpp"

namespace sublin {

class ParseError : public ParameterError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ParameterError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

template <class T>
bool read_field(std::istringstream& ss, T& out) {
  std::string tok;
  if (!(ss >> tok)) return false;
  std::size_t used = 0;
  try {
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) return false;
    if constexpr (std::is_unsigned_v<T>) {
      if (v < 0) return false;
    }
    out = static_cast<T>(v);
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace detail

// Format:
//   graph <n> <m> [plain | e2lin <q> | ulc <q>]
//   u v [offset | permutation images]      (one line per undirected edge)
// Blank lines and '#' comments are ignored.
inline Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError(lineno + 1, "missing header");
  std::istringstream hs(line);
  std::string word;
  hs >> word;
  if (word != "graph") throw ParseError(lineno, "header must start with 'graph'");
  std::uint64_t n = 0, m = 0;
  if (!detail::read_field(hs, n) || !detail::read_field(hs, m))
    throw ParseError(lineno, "header needs <n> <m>");
  Annotation kind = Annotation::plain;
  std::uint32_t q = 0;
  if (hs >> word) {
    if (word == "plain") {
      kind = Annotation::plain;
    } else if (word == "e2lin" || word == "ulc") {
      kind = word == "e2lin" ? Annotation::e2lin : Annotation::ulc;
      if (!detail::read_field(hs, q) || q < 1) throw ParseError(lineno, "annotation needs q >= 1");
    } else {
      throw ParseError(lineno, "unknown annotation '" + word + "'");
    }
  }
  if (hs >> word) throw ParseError(lineno, "trailing tokens in header");

  std::vector<EdgeSpec> edges;
  edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    if (!detail::next_content_line(in, line, lineno))
      throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, got " + std::to_string(k));
    std::istringstream ss(line);
    EdgeSpec e;
    if (!detail::read_field(ss, e.u) || !detail::read_field(ss, e.v))
      throw ParseError(lineno, "edge needs two vertex ids");
    if (e.u >= n || e.v >= n) throw ParseError(lineno, "invalid vertex");
    if (kind == Annotation::e2lin) {
      if (!detail::read_field(ss, e.offset)) throw ParseError(lineno, "missing offset");
    } else if (kind == Annotation::ulc) {
      e.perm.resize(q);
      std::vector<bool> seen(q, false);
      for (std::uint32_t i = 0; i < q; ++i) {
        if (!detail::read_field(ss, e.perm[i])) throw ParseError(lineno, "permutation too short");
        if (e.perm[i] >= q || seen[e.perm[i]]) throw ParseError(lineno, "not a permutation");
        seen[e.perm[i]] = true;
      }
    }
    std::string extra;
    if (ss >> extra) throw ParseError(lineno, "trailing tokens");
    edges.push_back(std::move(e));
  }
  if (detail::next_content_line(in, line, lineno)) throw ParseError(lineno, "more edges than declared");
  try {
    return Graph(n, edges, kind, q);
  } catch (const ParameterError& e) {
    throw ParseError(lineno, e.what());
  }
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open graph file " + path);
  return read_graph(in);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << "graph " << g.n() << ' ' << g.m();
  if (g.kind() != Annotation::plain) out << ' ' << to_string(g.kind()) << ' ' << g.q();
  out << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (g.kind() == Annotation::e2lin) out << ' ' << g.shift(e.slot);
    if (g.kind() == Annotation::ulc)
      for (auto x : g.perm(e.slot)) out << ' ' << x;
    out << '\n';
  }
}

inline void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_graph(out, g);
}

// FNV-1a digest of the canonical text form.
inline std::string graph_digest(const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

}  // namespace sublin
