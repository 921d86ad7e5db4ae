#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "csparrow/cluster.hpp"
#include "csparrow/error.hpp"
#include "csparrow/flip.hpp"
#include "csparrow/formula.hpp"
#include "csparrow/rng.hpp"

namespace csparrow {

// Stochastic local search drivers. Both solvers draw from one Rng stream
// per run, in a fixed order, so identical (formula, params, seed) triples
// reproduce byte-identical results. Draw order per step of the clustered
// solver:
//
//   1. jump coin (one real, only when epsilon > 0)
//   2. on a jump: one bool per variable, in index order
//   3. class coin (one real, only when two or more flip classes are
//      available)
//   4. uniform index into the selected class (one bounded draw)
//
// The initial assignment is one bool per variable, in index order.

struct SparrowParams {
  double alpha = 0.75;               // preference for the higher flip class
  std::uint64_t budget_multiplier = 9;  // step budget = multiplier * m^2
  double epsilon = 0.0;              // per-step random-jump probability
  std::uint64_t seed = 0;
  bool capture_trajectory = false;   // satisfied-clause count per step
  bool capture_flip_log = false;     // per-step flip class record
};

enum class RunStatus { Solved, BudgetExhausted };

struct FlipEvent {
  std::uint64_t step = 0;
  int var = -1;  // -1 on a random jump
  FlipClass cls = FlipClass::Null;
  bool random_jump = false;
};

struct RunResult {
  RunStatus status = RunStatus::BudgetExhausted;
  std::optional<Assignment> model;
  std::uint64_t steps_used = 0;
  std::optional<std::vector<int>> trajectory;  // length steps_used + 1 when captured
  std::optional<std::vector<FlipEvent>> flip_log;
};

namespace detail {

inline Assignment random_assignment(int num_vars, Rng& rng) {
  Assignment a(static_cast<std::size_t>(num_vars));
  for (int v = 0; v < num_vars; ++v) a[static_cast<std::size_t>(v)] = rng.next_bool() ? 1 : 0;
  return a;
}

}  // namespace detail

// One flip decision. Classes are ranked positive > null > negative. With a
// single non-empty class the choice is uniform inside it (no coin). With
// two or more, the coin prefers the highest class with probability alpha;
// otherwise the choice is uniform over the union of the remaining classes,
// concatenated in rank order.
inline int select_flip(const StateClassification& sc, double alpha, Rng& rng) {
  const std::vector<int>* classes[3] = {&sc.positive_vars, &sc.null_vars, &sc.negative_vars};
  int non_empty = 0;
  for (const auto* c : classes)
    if (!c->empty()) ++non_empty;
  if (non_empty == 0)
    throw Error(ErrorCode::NoCandidates, "no candidate flips in this state");

  int top = 0;
  while (classes[top]->empty()) ++top;

  if (non_empty == 1) {
    return (*classes[top])[rng.next_below(classes[top]->size())];
  }
  if (rng.next_real01() < alpha) {
    return (*classes[top])[rng.next_below(classes[top]->size())];
  }
  std::size_t rest = 0;
  for (int i = top + 1; i < 3; ++i) rest += classes[i]->size();
  std::uint64_t k = rng.next_below(rest);
  for (int i = top + 1; i < 3; ++i) {
    if (k < classes[i]->size()) return (*classes[i])[k];
    k -= classes[i]->size();
  }
  throw Error(ErrorCode::NoCandidates, "unreachable");  // LCOV_EXCL_LINE
}

// Local search over the clustered formula: repeat up to
// budget_multiplier * m^2 times (m clauses), each step either jumping to a
// fresh random assignment (probability epsilon) or flipping the variable
// chosen by select_flip.
inline RunResult clustered_sparrow(const CnfFormula& f, const SparrowParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
  if (!(p.epsilon >= 0.0 && p.epsilon < 1.0))
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1)");
  if (p.budget_multiplier < 1)
    throw Error(ErrorCode::InvalidConfig, "budget multiplier must be at least 1");

  const std::uint64_t m = static_cast<std::uint64_t>(f.num_clauses());
  const std::uint64_t budget = p.budget_multiplier * m * m;

  Rng rng(p.seed);
  SearchState state(f, detail::random_assignment(f.num_vars(), rng));

  RunResult res;
  if (p.capture_trajectory) res.trajectory.emplace();
  if (p.capture_flip_log) res.flip_log.emplace();
  if (res.trajectory) res.trajectory->push_back(state.satisfied_count());

  for (std::uint64_t step = 0; step < budget; ++step) {
    if (state.is_model()) {
      res.status = RunStatus::Solved;
      res.model = state.assignment();
      res.steps_used = step;
      return res;
    }
    if (p.epsilon > 0.0 && rng.next_real01() < p.epsilon) {
      state.reset(detail::random_assignment(f.num_vars(), rng));
      if (res.flip_log)
        res.flip_log->push_back(FlipEvent{step, -1, FlipClass::Null, true});
    } else {
      const StateClassification sc = state.classify();
      const int v = select_flip(sc, p.alpha, rng);
      const FlipClass cls = classify_flip(state.make_break(v));
      state.flip(v);
      if (res.flip_log) res.flip_log->push_back(FlipEvent{step, v, cls, false});
    }
    if (res.trajectory) res.trajectory->push_back(state.satisfied_count());
  }

  if (state.is_model()) {
    // The budget is exhausted in checks, not flips: a model reached by the
    // final flip is only reported if a check observes it, so run one last.
    res.status = RunStatus::Solved;
    res.model = state.assignment();
  }
  res.steps_used = budget;
  return res;
}

// Random-walk baseline: per restart, a fresh uniform assignment followed by
// 3n steps of "pick a random unsatisfied clause, flip a random literal in
// it". Draw order per restart: one bool per variable, then per step one
// bounded draw for the clause and one for the literal.
inline RunResult schoening_walk(const CnfFormula& f, std::uint64_t restarts,
                                std::uint64_t seed, bool capture_trajectory = false) {
  if (restarts < 1)
    throw Error(ErrorCode::InvalidConfig, "at least one restart required");

  const std::uint64_t steps_per_restart = 3 * static_cast<std::uint64_t>(f.num_vars());
  Rng rng(seed);
  RunResult res;
  if (capture_trajectory) res.trajectory.emplace();

  std::uint64_t flips = 0;
  for (std::uint64_t r = 0; r < restarts; ++r) {
    SearchState state(f, detail::random_assignment(f.num_vars(), rng));
    if (res.trajectory) res.trajectory->push_back(state.satisfied_count());
    for (std::uint64_t t = 0;; ++t) {
      if (state.is_model()) {
        res.status = RunStatus::Solved;
        res.model = state.assignment();
        res.steps_used = flips;
        return res;
      }
      if (t == steps_per_restart) break;
      const std::vector<int>& unsat = state.unsatisfied();
      const int ci = unsat[rng.next_below(unsat.size())];
      const Clause& c = f.clause(ci);
      const int v = c.lits[rng.next_below(static_cast<std::uint64_t>(c.width))].var;
      state.flip(v);
      ++flips;
      if (res.trajectory) res.trajectory->push_back(state.satisfied_count());
    }
  }
  res.status = RunStatus::BudgetExhausted;
  res.steps_used = flips;
  return res;
}

// Full pipeline: clusterize, run the clustered solver on the transformed
// formula (budget computed from its clause count), project any model back.
inline RunResult solve_end_to_end(const CnfFormula& e, const SparrowParams& p) {
  const ClusterizeResult cr = clusterize(e);
  RunResult res = clustered_sparrow(cr.formula, p);
  if (res.model) res.model = recover_assignment(cr.map, *res.model);
  return res;
}

}  // namespace csparrow
