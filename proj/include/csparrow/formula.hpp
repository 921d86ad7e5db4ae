#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csparrow/error.hpp"

namespace csparrow {

// Variable indices are 0-based everywhere inside the library. The DIMACS
// boundary (parse_dimacs / emit_dimacs) and all user-facing reports are
// 1-based; the conversion happens there and nowhere else.

struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Clause width is 1..3. Width-2 clauses arise from the equality cycles of
// the clustering transform; wider clauses are rejected on input.
struct Clause {
  std::array<Literal, 3> lits{};
  int width = 0;

  const Literal* begin() const { return lits.data(); }
  const Literal* end() const { return lits.data() + width; }

  friend bool operator==(const Clause&, const Clause&) = default;
};

inline Clause make_clause(std::initializer_list<Literal> lits) {
  Clause c;
  for (const Literal& l : lits) {
    if (c.width == 3)
      throw Error(ErrorCode::ClauseTooWide, "clause wider than 3 literals");
    c.lits[c.width++] = l;
  }
  return c;
}

struct Occurrence {
  int clause = 0;
  bool negated = false;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

using Assignment = std::vector<std::uint8_t>;  // one 0/1 entry per variable

class CnfFormula {
 public:
  CnfFormula() = default;

  // Validates every clause and builds the occurrence index. Rejects empty
  // and too-wide clauses, out-of-range variables, repeated literals, and
  // tautologies (x together with !x).
  static CnfFormula from_clauses(int num_vars, std::vector<Clause> clauses) {
    if (num_vars < 0)
      throw Error(ErrorCode::InvalidConfig, "negative variable count");
    CnfFormula f;
    f.num_vars_ = num_vars;
    f.clauses_ = std::move(clauses);
    f.occ_.assign(static_cast<std::size_t>(num_vars), {});
    for (std::size_t ci = 0; ci < f.clauses_.size(); ++ci) {
      const Clause& c = f.clauses_[ci];
      if (c.width == 0)
        throw Error(ErrorCode::EmptyClause,
                    "clause " + std::to_string(ci + 1) + " is empty");
      if (c.width > 3)
        throw Error(ErrorCode::ClauseTooWide,
                    "clause " + std::to_string(ci + 1) + " wider than 3");
      for (int i = 0; i < c.width; ++i) {
        const Literal& l = c.lits[i];
        if (l.var < 0 || l.var >= num_vars)
          throw Error(ErrorCode::VarOutOfRange,
                      "variable " + std::to_string(l.var + 1) + " out of range in clause " +
                          std::to_string(ci + 1));
        for (int j = 0; j < i; ++j) {
          if (c.lits[j].var == l.var) {
            if (c.lits[j].negated != l.negated)
              throw Error(ErrorCode::TautologicalClause,
                          "clause " + std::to_string(ci + 1) + " contains a variable and its negation");
            throw Error(ErrorCode::DuplicateLiteral,
                        "clause " + std::to_string(ci + 1) + " repeats a literal");
          }
        }
        f.occ_[static_cast<std::size_t>(l.var)].push_back(
            Occurrence{static_cast<int>(ci), l.negated});
      }
    }
    return f;
  }

  int num_vars() const { return num_vars_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(int ci) const { return clauses_[static_cast<std::size_t>(ci)]; }

  // All (clause, polarity) occurrences of variable v, in clause-scan order.
  const std::vector<Occurrence>& occurrences(int v) const {
    return occ_[static_cast<std::size_t>(v)];
  }

  int total_literals() const {
    int n = 0;
    for (const Clause& c : clauses_) n += c.width;
    return n;
  }

  friend bool operator==(const CnfFormula& a, const CnfFormula& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<Occurrence>> occ_;
};

inline bool literal_true(const Literal& l, const Assignment& a) {
  return (a[static_cast<std::size_t>(l.var)] != 0) != l.negated;
}

inline bool clause_satisfied(const Clause& c, const Assignment& a) {
  for (const Literal& l : c)
    if (literal_true(l, a)) return true;
  return false;
}

inline void check_assignment_length(const CnfFormula& f, const Assignment& a) {
  if (static_cast<int>(a.size()) != f.num_vars())
    throw Error(ErrorCode::LengthMismatch,
                "assignment has " + std::to_string(a.size()) + " values, formula has " +
                    std::to_string(f.num_vars()) + " variables");
}

struct EvalResult {
  int satisfied_count = 0;
  bool is_model = false;
};

inline EvalResult evaluate(const CnfFormula& f, const Assignment& a) {
  check_assignment_length(f, a);
  int sat = 0;
  for (const Clause& c : f.clauses())
    if (clause_satisfied(c, a)) ++sat;
  return EvalResult{sat, sat == f.num_clauses()};
}

// Indices of falsified clauses, ascending.
inline std::vector<int> unsatisfied_clauses(const CnfFormula& f, const Assignment& a) {
  check_assignment_length(f, a);
  std::vector<int> out;
  for (int ci = 0; ci < f.num_clauses(); ++ci)
    if (!clause_satisfied(f.clause(ci), a)) out.push_back(ci);
  return out;
}

// ---------------------------------------------------------------------------
// DIMACS CNF I/O. Accepted input: 'c' comment lines, one "p cnf <vars>
// <clauses>" header, then zero-terminated clauses; LF or CRLF line endings.
// Output is canonical: LF endings, one clause per line.

inline CnfFormula parse_dimacs(std::istream& in) {
  int num_vars = -1;
  long declared_clauses = -1;
  std::vector<Clause> clauses;
  Clause current;
  bool in_clause = false;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == 'c') continue;
    if (line[0] == 'p') {
      if (num_vars >= 0)
        throw Error(ErrorCode::InvalidToken, "duplicate problem line");
      std::istringstream hs(line);
      std::string p, fmt;
      hs >> p >> fmt >> num_vars >> declared_clauses;
      if (hs.fail() || fmt != "cnf" || num_vars < 0 || declared_clauses < 0)
        throw Error(ErrorCode::MissingHeader, "malformed problem line: " + line);
      continue;
    }
    if (num_vars < 0)
      throw Error(ErrorCode::MissingHeader, "clause data before 'p cnf' header");
    std::istringstream ls(line);
    long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (!in_clause)
          throw Error(ErrorCode::EmptyClause, "empty clause in input");
        clauses.push_back(current);
        current = Clause{};
        in_clause = false;
        continue;
      }
      long v = lit > 0 ? lit : -lit;
      if (v > num_vars)
        throw Error(ErrorCode::VarOutOfRange,
                    "literal " + std::to_string(lit) + " exceeds declared " +
                        std::to_string(num_vars) + " variables");
      if (current.width == 3)
        throw Error(ErrorCode::ClauseTooWide, "clause wider than 3 literals");
      current.lits[current.width++] = Literal{static_cast<int>(v - 1), lit < 0};
      in_clause = true;
    }
    if (!ls.eof())
      throw Error(ErrorCode::InvalidToken, "unexpected token in line: " + line);
  }
  if (num_vars < 0)
    throw Error(ErrorCode::MissingHeader, "no 'p cnf' header found");
  if (in_clause)
    throw Error(ErrorCode::InvalidToken, "last clause not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared_clauses)
    throw Error(ErrorCode::ClauseCountMismatch,
                "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                    std::to_string(clauses.size()));
  return CnfFormula::from_clauses(num_vars, std::move(clauses));
}

inline CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

inline void emit_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c) out << (l.negated ? -(l.var + 1) : l.var + 1) << ' ';
    out << "0\n";
  }
}

inline std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  emit_dimacs(f, out);
  return out.str();
}

}  // namespace csparrow
