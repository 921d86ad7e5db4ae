#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "csparrow/cluster.hpp"
#include "csparrow/error.hpp"
#include "csparrow/formula.hpp"
#include "csparrow/markov.hpp"

namespace csparrow {

// End-to-end exact analysis of a formula's solver chain, feeding the
// `analyze` subcommand. The measured class payoffs and mass thresholds
// are claim checks: the report records whether they hold, it never
// enforces them.

struct AnalysisOptions {
  double alpha = 0.75;
  double epsilon = 1e-3;  // must be positive: the jump makes the chain ergodic
  int max_vars = kMaxChainVars;
  bool clusterize_input = false;
};

struct BoundCheck {
  std::string name;
  double value = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  bool holds = false;
  // States whose own expected payoff already breaks the corresponding
  // per-state bound; informative even when the aggregate bound holds.
  std::vector<int> witness_states;
};

struct AnalysisReport {
  int num_states = 0;
  double model_mass = 0.0;
  double W_plus = 0.0;   // raw stationary mass of the positive class
  double W_minus = 0.0;  // raw stationary mass of the non-positive class
  Lumped2Chain lumped;
  PayoffEstimate payoff;
  bool w1_at_least_one_fifth = false;
  std::vector<BoundCheck> bound_checks;
  // Kept for programmatic callers; not part of the JSON report.
  StationaryDist stationary;
  Partition partition;
};

namespace detail {

inline BoundCheck check_bound(std::string name, double value, std::optional<double> lower,
                              std::optional<double> upper, std::vector<int> witnesses = {}) {
  BoundCheck c;
  c.name = std::move(name);
  c.value = value;
  c.lower = lower;
  c.upper = upper;
  c.holds = (!lower || value >= *lower) && (!upper || value <= *upper);
  c.witness_states = std::move(witnesses);
  return c;
}

}  // namespace detail

inline AnalysisReport run_analysis(const CnfFormula& input, const AnalysisOptions& opt) {
  if (!(opt.epsilon > 0.0))
    throw Error(ErrorCode::EpsilonRequired,
                "analysis needs a positive epsilon to make the chain ergodic");

  CnfFormula f = opt.clusterize_input ? clusterize(input).formula : input;
  if (f.num_vars() > opt.max_vars)
    throw Error(ErrorCode::TooManyVariables,
                "formula exceeds the configured analysis limit of " +
                    std::to_string(opt.max_vars) + " variables");

  const TransitionMatrix chain = build_chain(f, opt.alpha, opt.epsilon);
  AnalysisReport rep;
  rep.num_states = chain.num_states;
  rep.stationary = stationary(chain);
  rep.partition = partition_states(f);

  long double model_mass = 0.0L, plus_mass = 0.0L, minus_mass = 0.0L;
  for (int s : rep.partition.models) model_mass += rep.stationary.w[static_cast<std::size_t>(s)];
  for (int s : rep.partition.s_plus) plus_mass += rep.stationary.w[static_cast<std::size_t>(s)];
  for (int s : rep.partition.s_minus) minus_mass += rep.stationary.w[static_cast<std::size_t>(s)];
  rep.model_mass = static_cast<double>(model_mass);
  rep.W_plus = static_cast<double>(plus_mass);
  rep.W_minus = static_cast<double>(minus_mass);

  rep.lumped = lump_two_state(chain, rep.stationary, rep.partition);
  rep.payoff = measure_class_payoffs(chain, rep.stationary, rep.partition, f, opt.alpha);

  const double w1 = rep.lumped.w2state[0];
  rep.w1_at_least_one_fifth = w1 >= 0.2;

  // Per-state payoff outliers: positive states are claimed to gain in
  // [1/2, 1] per step, non-positive states to lose at most 1/4.
  const std::vector<double> delta = per_state_expected_delta(f, opt.alpha);
  std::vector<int> plus_witnesses, minus_witnesses;
  for (int s : rep.partition.s_plus)
    if (delta[static_cast<std::size_t>(s)] < 0.5 || delta[static_cast<std::size_t>(s)] > 1.0)
      plus_witnesses.push_back(s);
  for (int s : rep.partition.s_minus)
    if (delta[static_cast<std::size_t>(s)] < -0.25 || delta[static_cast<std::size_t>(s)] > 0.0)
      minus_witnesses.push_back(s);

  rep.bound_checks.push_back(detail::check_bound("w1_at_least_one_fifth", w1, 0.2, std::nullopt));
  rep.bound_checks.push_back(
      detail::check_bound("f1_in_half_one", rep.payoff.f1, 0.5, 1.0, std::move(plus_witnesses)));
  rep.bound_checks.push_back(detail::check_bound("f2_in_minus_quarter_zero", rep.payoff.f2,
                                                 -0.25, 0.0, std::move(minus_witnesses)));
  rep.bound_checks.push_back(detail::check_bound("gain_at_least_affine_bound",
                                                 rep.payoff.E_per_step, expected_gain(w1),
                                                 std::nullopt));
  return rep;
}

inline nlohmann::ordered_json to_json(const AnalysisReport& rep) {
  nlohmann::ordered_json j;
  j["num_states"] = rep.num_states;
  j["model_mass"] = rep.model_mass;
  j["W_plus"] = rep.W_plus;
  j["W_minus"] = rep.W_minus;
  j["a"] = rep.lumped.a;
  j["b"] = rep.lumped.b;
  j["w2state"] = {rep.lumped.w2state[0], rep.lumped.w2state[1]};
  j["Z"] = {{rep.lumped.Z[0][0], rep.lumped.Z[0][1]}, {rep.lumped.Z[1][0], rep.lumped.Z[1][1]}};
  j["sigma_sq"] = {rep.lumped.sigma_sq[0], rep.lumped.sigma_sq[1]};
  j["f1"] = rep.payoff.f1;
  j["f2"] = rep.payoff.f2;
  j["E_per_step"] = rep.payoff.E_per_step;
  j["eq6_holds"] = rep.w1_at_least_one_fifth;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const BoundCheck& c : rep.bound_checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["lower"] = c.lower ? nlohmann::ordered_json(*c.lower) : nlohmann::ordered_json(nullptr);
    cj["upper"] = c.upper ? nlohmann::ordered_json(*c.upper) : nlohmann::ordered_json(nullptr);
    cj["holds"] = c.holds;
    cj["witness_states"] = c.witness_states;
    checks.push_back(std::move(cj));
  }
  j["bound_checks"] = std::move(checks);
  return j;
}

}  // namespace csparrow
