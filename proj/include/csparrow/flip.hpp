#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csparrow/error.hpp"
#include "csparrow/exhaustive.hpp"
#include "csparrow/formula.hpp"

namespace csparrow {

// Make/break accounting for single-variable flips. "make" counts clauses
// turning unsatisfied -> satisfied, "break" the reverse; only clauses
// containing the flipped variable can change.

struct FlipDelta {
  int make = 0;
  int brk = 0;
  int delta = 0;  // make - brk
};

enum class FlipClass { Positive, Null, Negative };

inline FlipClass classify_flip(const FlipDelta& d) {
  if (d.delta > 0) return FlipClass::Positive;
  if (d.delta < 0) return FlipClass::Negative;
  return FlipClass::Null;
}

inline const char* to_string(FlipClass c) {
  switch (c) {
    case FlipClass::Positive: return "positive";
    case FlipClass::Null: return "null";
    case FlipClass::Negative: return "negative";
  }
  return "?";
}

inline FlipDelta make_break(const CnfFormula& f, const Assignment& a, int v) {
  check_assignment_length(f, a);
  if (v < 0 || v >= f.num_vars())
    throw Error(ErrorCode::VarOutOfRange, "variable " + std::to_string(v + 1));
  FlipDelta d;
  for (const Occurrence& o : f.occurrences(v)) {
    const Clause& c = f.clause(o.clause);
    int true_now = 0;
    for (const Literal& l : c)
      if (literal_true(l, a)) ++true_now;
    // The flipped literal changes truth value; the clause flips satisfaction
    // exactly when that literal was the lone support or becomes the first.
    const bool lit_true_now = (a[static_cast<std::size_t>(v)] != 0) != o.negated;
    if (lit_true_now && true_now == 1)
      ++d.brk;
    else if (!lit_true_now && true_now == 0)
      ++d.make;
  }
  d.delta = d.make - d.brk;
  return d;
}

// Variables occurring in at least one unsatisfied clause: the only
// variables the solver may flip. Sorted ascending, no duplicates.
inline std::vector<int> candidate_variables(const CnfFormula& f, const Assignment& a) {
  check_assignment_length(f, a);
  std::vector<int> out;
  for (int ci = 0; ci < f.num_clauses(); ++ci) {
    const Clause& c = f.clause(ci);
    if (clause_satisfied(c, a)) continue;
    for (const Literal& l : c) out.push_back(l.var);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

enum class StateKind { Positive, NonPositive, Solved };

struct StateClassification {
  std::vector<int> positive_vars;
  std::vector<int> null_vars;
  std::vector<int> negative_vars;
  StateKind state_kind = StateKind::Solved;

  int candidate_count() const {
    return static_cast<int>(positive_vars.size() + null_vars.size() + negative_vars.size());
  }
};

inline StateClassification classify_state(const CnfFormula& f, const Assignment& a) {
  StateClassification sc;
  const std::vector<int> cands = candidate_variables(f, a);
  for (int v : cands) {
    switch (classify_flip(make_break(f, a, v))) {
      case FlipClass::Positive: sc.positive_vars.push_back(v); break;
      case FlipClass::Null: sc.null_vars.push_back(v); break;
      case FlipClass::Negative: sc.negative_vars.push_back(v); break;
    }
  }
  sc.state_kind = cands.empty()           ? StateKind::Solved
                  : sc.positive_vars.empty() ? StateKind::NonPositive
                                             : StateKind::Positive;
  return sc;
}

// ---------------------------------------------------------------------------
// Exhaustive flip table for a small pattern formula: one row per assignment,
// with per-clause truth values and the make/break outcome of flipping the
// primary variable. Row order is the binary count with variable 1 as the
// least significant bit.

inline constexpr int kMaxFlipTableVars = 5;

struct FlipTableRow {
  std::uint32_t bits = 0;         // bit v = value of variable v
  std::uint32_t clause_bits = 0;  // bit ci = clause ci satisfied
  FlipDelta flip;
  bool satisfying = false;
};

struct FlipTable {
  int num_vars = 0;
  int num_clauses = 0;
  int primary_var = 0;
  std::vector<FlipTableRow> rows;
};

inline FlipTable flip_table(const CnfFormula& pattern, int primary_var) {
  if (pattern.num_vars() > kMaxFlipTableVars)
    throw Error(ErrorCode::TooManyVariables,
                "flip table limited to " + std::to_string(kMaxFlipTableVars) + " variables");
  if (primary_var < 0 || primary_var >= pattern.num_vars())
    throw Error(ErrorCode::VarOutOfRange, "primary variable " + std::to_string(primary_var + 1));
  FlipTable t;
  t.num_vars = pattern.num_vars();
  t.num_clauses = pattern.num_clauses();
  t.primary_var = primary_var;
  const std::uint32_t states = std::uint32_t{1} << pattern.num_vars();
  for (std::uint32_t s = 0; s < states; ++s) {
    FlipTableRow row;
    row.bits = s;
    const Assignment a = assignment_from_state(s, pattern.num_vars());
    int sat = 0;
    for (int ci = 0; ci < pattern.num_clauses(); ++ci) {
      if (clause_satisfied(pattern.clause(ci), a)) {
        row.clause_bits |= std::uint32_t{1} << ci;
        ++sat;
      }
    }
    row.satisfying = sat == pattern.num_clauses();
    row.flip = make_break(pattern, a, primary_var);
    t.rows.push_back(row);
  }
  return t;
}

// Text rendering used by the CLI: assignment bits, clause truth values,
// make, break, delta (blank on satisfying rows, where no flip is taken),
// and a '*' marker on satisfying rows.
inline std::string format_flip_table(const FlipTable& t) {
  std::string out;
  out += "row ";
  for (int v = 0; v < t.num_vars; ++v) {
    out += 'x' + std::to_string(v + 1);
    out += (v == t.primary_var) ? "* " : "  ";
  }
  out += "| clauses ";
  for (int c = 0; c < t.num_clauses; ++c) out += std::to_string(c + 1) + " ";
  out += "| make break delta\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const FlipTableRow& r = t.rows[i];
    std::string line = std::to_string(i + 1);
    if (r.satisfying) line += '*';
    while (line.size() < 4) line += ' ';
    for (int v = 0; v < t.num_vars; ++v) {
      line += ' ';
      line += ((r.bits >> v) & 1u) ? '1' : '0';
      line += "  ";
    }
    line += "|         ";
    for (int c = 0; c < t.num_clauses; ++c) {
      line += ((r.clause_bits >> c) & 1u) ? '1' : '0';
      line += ' ';
    }
    line += "| ";
    if (r.satisfying) {
      line += "-    -     -";
    } else {
      line += std::to_string(r.flip.make) + "    " + std::to_string(r.flip.brk) + "     ";
      if (r.flip.delta > 0) line += '+';
      line += std::to_string(r.flip.delta);
    }
    out += line;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Incremental flip bookkeeping for the solvers. Keeps the per-clause count
// of satisfied literals plus the unsatisfied-clause set, so make_break and
// flip both cost O(occurrences of v). One solver run owns one instance.

class SearchState {
 public:
  SearchState(const CnfFormula& f, Assignment a) : f_(&f) { reset(std::move(a)); }

  void reset(Assignment a) {
    check_assignment_length(*f_, a);
    a_ = std::move(a);
    true_count_.assign(static_cast<std::size_t>(f_->num_clauses()), 0);
    unsat_.clear();
    unsat_pos_.assign(static_cast<std::size_t>(f_->num_clauses()), -1);
    for (int ci = 0; ci < f_->num_clauses(); ++ci) {
      int n = 0;
      for (const Literal& l : f_->clause(ci))
        if (literal_true(l, a_)) ++n;
      true_count_[static_cast<std::size_t>(ci)] = n;
      if (n == 0) push_unsat(ci);
    }
  }

  const CnfFormula& formula() const { return *f_; }
  const Assignment& assignment() const { return a_; }
  const std::vector<int>& unsatisfied() const { return unsat_; }
  int satisfied_count() const { return f_->num_clauses() - static_cast<int>(unsat_.size()); }
  bool is_model() const { return unsat_.empty(); }

  FlipDelta make_break(int v) const {
    FlipDelta d;
    for (const Occurrence& o : f_->occurrences(v)) {
      const int n = true_count_[static_cast<std::size_t>(o.clause)];
      const bool lit_true = (a_[static_cast<std::size_t>(v)] != 0) != o.negated;
      if (lit_true && n == 1)
        ++d.brk;
      else if (!lit_true && n == 0)
        ++d.make;
    }
    d.delta = d.make - d.brk;
    return d;
  }

  void flip(int v) {
    const bool was_true_var = a_[static_cast<std::size_t>(v)] != 0;
    a_[static_cast<std::size_t>(v)] = was_true_var ? 0 : 1;
    for (const Occurrence& o : f_->occurrences(v)) {
      int& n = true_count_[static_cast<std::size_t>(o.clause)];
      const bool lit_was_true = was_true_var != o.negated;
      if (lit_was_true) {
        if (--n == 0) push_unsat(o.clause);
      } else {
        if (n++ == 0) pop_unsat(o.clause);
      }
    }
  }

  // Candidate variables of the current state, sorted ascending.
  void collect_candidates(std::vector<int>& out) const {
    out.clear();
    for (int ci : unsat_)
      for (const Literal& l : f_->clause(ci)) out.push_back(l.var);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  StateClassification classify() const {
    StateClassification sc;
    std::vector<int> cands;
    collect_candidates(cands);
    for (int v : cands) {
      switch (classify_flip(make_break(v))) {
        case FlipClass::Positive: sc.positive_vars.push_back(v); break;
        case FlipClass::Null: sc.null_vars.push_back(v); break;
        case FlipClass::Negative: sc.negative_vars.push_back(v); break;
      }
    }
    sc.state_kind = cands.empty()           ? StateKind::Solved
                    : sc.positive_vars.empty() ? StateKind::NonPositive
                                               : StateKind::Positive;
    return sc;
  }

 private:
  void push_unsat(int ci) {
    unsat_pos_[static_cast<std::size_t>(ci)] = static_cast<int>(unsat_.size());
    unsat_.push_back(ci);
  }

  void pop_unsat(int ci) {
    const int pos = unsat_pos_[static_cast<std::size_t>(ci)];
    const int last = unsat_.back();
    unsat_[static_cast<std::size_t>(pos)] = last;
    unsat_pos_[static_cast<std::size_t>(last)] = pos;
    unsat_.pop_back();
    unsat_pos_[static_cast<std::size_t>(ci)] = -1;
  }

  const CnfFormula* f_;
  Assignment a_;
  std::vector<int> true_count_;
  std::vector<int> unsat_;      // unordered stack of unsatisfied clauses
  std::vector<int> unsat_pos_;  // clause -> position in unsat_, -1 if satisfied
};

// Falsification search for "a state with no positive flip always has a null
// flip" over all assignments of a (clustered) formula. Returns the first
// non-solved state whose candidates are all negative, or nullopt.
inline std::optional<Assignment> null_availability_counterexample(const CnfFormula& f) {
  if (f.num_vars() > 20)
    throw Error(ErrorCode::TooManyVariables, "exhaustive scan limited to 20 variables");
  const std::uint64_t states = std::uint64_t{1} << f.num_vars();
  for (std::uint64_t s = 0; s < states; ++s) {
    const Assignment a = assignment_from_state(s, f.num_vars());
    const StateClassification sc = classify_state(f, a);
    if (sc.state_kind == StateKind::NonPositive && sc.null_vars.empty()) return a;
  }
  return std::nullopt;
}

}  // namespace csparrow
