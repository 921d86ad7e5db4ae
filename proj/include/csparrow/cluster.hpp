#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csparrow/error.hpp"
#include "csparrow/formula.hpp"

namespace csparrow {

// The clustering transform: every occurrence of a variable gets its own
// fresh copy, and the copies of one variable are chained together by an
// equality cycle of width-2 clauses
//
//   (x_1 v !x_2) (x_2 v !x_3) ... (x_m v !x_1)
//
// which is satisfied exactly when all copies agree. In the result each
// variable occurs in at most three clauses and each literal at most twice.

struct VarMap {
  // original variable -> its copies, in occurrence (clause-scan) order.
  // A variable with no occurrences has an empty copy list.
  std::vector<std::vector<int>> forward;
  // copy -> (original variable, occurrence index)
  std::vector<std::pair<int, int>> backward;

  int original_vars() const { return static_cast<int>(forward.size()); }
  int clustered_vars() const { return static_cast<int>(backward.size()); }
};

struct ClusterizeResult {
  CnfFormula formula;
  VarMap map;
};

inline ClusterizeResult clusterize(const CnfFormula& e) {
  VarMap map;
  map.forward.assign(static_cast<std::size_t>(e.num_vars()), {});

  // Copies are numbered contiguously in original-variable order, so the
  // map is a pure function of the input formula.
  for (int v = 0; v < e.num_vars(); ++v) {
    for (std::size_t i = 0; i < e.occurrences(v).size(); ++i) {
      map.forward[static_cast<std::size_t>(v)].push_back(map.clustered_vars());
      map.backward.emplace_back(v, static_cast<int>(i));
    }
  }

  // Rewrite the original clauses copy-by-copy, keeping polarities.
  std::vector<int> next_copy(static_cast<std::size_t>(e.num_vars()), 0);
  std::vector<Clause> clauses;
  clauses.reserve(e.clauses().size());
  for (const Clause& c : e.clauses()) {
    Clause out;
    for (const Literal& l : c) {
      const int idx = next_copy[static_cast<std::size_t>(l.var)]++;
      out.lits[out.width++] =
          Literal{map.forward[static_cast<std::size_t>(l.var)][static_cast<std::size_t>(idx)],
                  l.negated};
    }
    clauses.push_back(out);
  }

  // Equality cycles. A single-occurrence variable needs none (its 1-cycle
  // would be the tautology (x v !x)).
  for (int v = 0; v < e.num_vars(); ++v) {
    const auto& copies = map.forward[static_cast<std::size_t>(v)];
    const std::size_t m = copies.size();
    if (m < 2) continue;
    for (std::size_t i = 0; i < m; ++i) {
      clauses.push_back(make_clause(
          {Literal{copies[i], false}, Literal{copies[(i + 1) % m], true}}));
    }
  }

  return ClusterizeResult{CnfFormula::from_clauses(map.clustered_vars(), std::move(clauses)),
                          std::move(map)};
}

// Projects a clustered assignment back to the original variables by reading
// each variable's first copy. Under any model of the clustered formula all
// copies agree, so the projection of a model is a model. Variables with no
// occurrences default to false.
inline Assignment recover_assignment(const VarMap& map, const Assignment& a_star) {
  if (static_cast<int>(a_star.size()) != map.clustered_vars())
    throw Error(ErrorCode::LengthMismatch,
                "clustered assignment has " + std::to_string(a_star.size()) +
                    " values, map expects " + std::to_string(map.clustered_vars()));
  Assignment a(static_cast<std::size_t>(map.original_vars()), 0);
  for (std::size_t v = 0; v < map.forward.size(); ++v)
    if (!map.forward[v].empty())
      a[v] = a_star[static_cast<std::size_t>(map.forward[v][0])];
  return a;
}

// Extends an original assignment to the clustered variables, all copies
// taking the original value. Maps models of E to models of E*.
inline Assignment lift_assignment(const VarMap& map, const Assignment& a) {
  if (static_cast<int>(a.size()) != map.original_vars())
    throw Error(ErrorCode::LengthMismatch,
                "assignment has " + std::to_string(a.size()) + " values, map expects " +
                    std::to_string(map.original_vars()));
  Assignment out(static_cast<std::size_t>(map.clustered_vars()), 0);
  for (std::size_t cv = 0; cv < map.backward.size(); ++cv)
    out[cv] = a[static_cast<std::size_t>(map.backward[cv].first)];
  return out;
}

struct ClusterShapeReport {
  int max_clauses_per_var = 0;
  int max_occurrences_per_literal = 0;
  // (variable, offending count): clause count when a variable is in more
  // than three clauses, literal count when one polarity occurs more than
  // twice.
  std::vector<std::pair<int, int>> violations;

  bool ok() const { return violations.empty(); }
};

inline ClusterShapeReport verify_cluster_shape(const CnfFormula& f) {
  ClusterShapeReport r;
  for (int v = 0; v < f.num_vars(); ++v) {
    const auto& occ = f.occurrences(v);
    int pos = 0, neg = 0;
    for (const Occurrence& o : occ) (o.negated ? neg : pos)++;
    const int clauses_with_v = static_cast<int>(occ.size());
    const int per_literal = pos > neg ? pos : neg;
    if (clauses_with_v > r.max_clauses_per_var) r.max_clauses_per_var = clauses_with_v;
    if (per_literal > r.max_occurrences_per_literal)
      r.max_occurrences_per_literal = per_literal;
    if (clauses_with_v > 3)
      r.violations.emplace_back(v, clauses_with_v);
    else if (per_literal > 2)
      r.violations.emplace_back(v, per_literal);
  }
  return r;
}

// Sidecar map file: one line per clustered variable,
// "<clustered_var> <original_var> <copy_index>", all 1-based.
inline std::string emit_var_map(const VarMap& map) {
  std::string out;
  for (std::size_t cv = 0; cv < map.backward.size(); ++cv) {
    out += std::to_string(cv + 1);
    out += ' ';
    out += std::to_string(map.backward[cv].first + 1);
    out += ' ';
    out += std::to_string(map.backward[cv].second + 1);
    out += '\n';
  }
  return out;
}

}  // namespace csparrow
