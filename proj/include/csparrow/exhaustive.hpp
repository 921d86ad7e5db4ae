#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csparrow/error.hpp"
#include "csparrow/formula.hpp"

namespace csparrow {

// Brute-force satisfiability over all 2^n assignments, n capped at 26.
// States are encoded as bit vectors: bit v of the state word is the value
// of variable v. Clause tests reduce to two mask operations.

inline constexpr int kMaxExhaustiveVars = 26;

struct ClauseMasks {
  std::vector<std::uint64_t> pos;  // variables appearing positively
  std::vector<std::uint64_t> neg;  // variables appearing negatively
};

inline ClauseMasks build_clause_masks(const CnfFormula& f) {
  if (f.num_vars() > kMaxExhaustiveVars)
    throw Error(ErrorCode::TooManyVariables,
                "exhaustive enumeration limited to " + std::to_string(kMaxExhaustiveVars) +
                    " variables, got " + std::to_string(f.num_vars()));
  ClauseMasks m;
  m.pos.reserve(f.clauses().size());
  m.neg.reserve(f.clauses().size());
  for (const Clause& c : f.clauses()) {
    std::uint64_t pos = 0, neg = 0;
    for (const Literal& l : c)
      (l.negated ? neg : pos) |= std::uint64_t{1} << l.var;
    m.pos.push_back(pos);
    m.neg.push_back(neg);
  }
  return m;
}

inline bool state_satisfies(const ClauseMasks& m, std::uint64_t state) {
  for (std::size_t i = 0; i < m.pos.size(); ++i)
    if ((state & m.pos[i]) == 0 && (~state & m.neg[i]) == 0) return false;
  return true;
}

inline Assignment assignment_from_state(std::uint64_t state, int num_vars) {
  Assignment a(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) a[static_cast<std::size_t>(v)] = (state >> v) & 1u;
  return a;
}

inline std::uint64_t state_from_assignment(const Assignment& a) {
  std::uint64_t s = 0;
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v]) s |= std::uint64_t{1} << v;
  return s;
}

inline std::optional<Assignment> find_model(const CnfFormula& f) {
  const ClauseMasks m = build_clause_masks(f);
  const std::uint64_t states = std::uint64_t{1} << f.num_vars();
  for (std::uint64_t s = 0; s < states; ++s)
    if (state_satisfies(m, s)) return assignment_from_state(s, f.num_vars());
  return std::nullopt;
}

inline bool brute_force_satisfiable(const CnfFormula& f) {
  return find_model(f).has_value();
}

inline std::uint64_t count_models(const CnfFormula& f) {
  const ClauseMasks m = build_clause_masks(f);
  const std::uint64_t states = std::uint64_t{1} << f.num_vars();
  std::uint64_t n = 0;
  for (std::uint64_t s = 0; s < states; ++s)
    if (state_satisfies(m, s)) ++n;
  return n;
}

}  // namespace csparrow
