#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

struct Literal {
  std::uint32_t var = 0;
  bool negated = false;
  bool operator==(const Literal&) const = default;
};

using Clause = std::array<Literal, 3>;

struct Cnf3 {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  bool satisfied_by(std::uint64_t assignment) const {
    for (const auto& c : clauses) {
      bool ok = false;
      for (const auto& l : c) {
        const bool val = (assignment >> l.var) & 1U;
        if (val != l.negated) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  // Largest number of clauses any single literal appears in.
  std::uint32_t max_literal_occurrences() const {
    std::vector<std::uint32_t> occ(2 * num_vars, 0);
    std::uint32_t best = 0;
    for (const auto& c : clauses)
      for (const auto& l : c) best = std::max(best, ++occ[2 * l.var + (l.negated ? 1 : 0)]);
    return best;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      if (i) s += " & ";
      s += "(";
      for (int j = 0; j < 3; ++j) {
        if (j) s += "|";
        if (clauses[i][j].negated) s += "~";
        s += "x" + std::to_string(clauses[i][j].var);
      }
      s += ")";
    }
    return s;
  }
};

// DIMACS "p cnf V C" with exactly three literals per clause.
inline Cnf3 read_dimacs(std::istream& in) {
  Cnf3 f;
  bool header = false;
  std::string line;
  std::vector<long> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      long vars = 0, clauses = 0;
      if (!(ls >> p >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 1 || vars > 64)
        throw ParameterError("malformed CNF header");
      f.num_vars = static_cast<std::uint32_t>(vars);
      header = true;
      continue;
    }
    if (!header) throw ParameterError("malformed CNF: missing header");
    long lit = 0;
    while (ls >> lit) {
      if (lit != 0) {
        pending.push_back(lit);
        continue;
      }
      if (pending.size() != 3) throw ParameterError("malformed CNF: clauses must have exactly 3 literals");
      Clause c;
      for (int j = 0; j < 3; ++j) {
        const long v = std::labs(pending[j]);
        if (v < 1 || v > static_cast<long>(f.num_vars)) throw ParameterError("malformed CNF: variable out of range");
        c[j] = {static_cast<std::uint32_t>(v - 1), pending[j] < 0};
      }
      f.clauses.push_back(c);
      pending.clear();
    }
  }
  if (!header) throw ParameterError("malformed CNF: missing header");
  if (!pending.empty()) throw ParameterError("malformed CNF: unterminated clause");
  return f;
}

inline std::string to_dimacs(const Cnf3& f) {
  std::string s = "p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (const auto& l : c) s += (l.negated ? "-" : "") + std::to_string(l.var + 1) + " ";
    s += "0\n";
  }
  return s;
}

}  // namespace sublin
