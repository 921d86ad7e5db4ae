#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "csparrow/error.hpp"
#include "csparrow/exhaustive.hpp"
#include "csparrow/flip.hpp"
#include "csparrow/formula.hpp"
#include "csparrow/linalg.hpp"
#include "csparrow/rng.hpp"

namespace csparrow {

// Exact finite-chain machinery for the solver dynamics. State s encodes an
// assignment via its bits (bit v = value of variable v), so a formula with
// N variables yields a chain on 2^N states.

inline constexpr int kMaxChainVars = 16;
inline constexpr int kMaxStationaryDirectStates = 4096;
inline constexpr int kMaxFundamentalStates = 1024;
inline constexpr int kMaxSimulationStates = 4096;

struct TransitionMatrix {
  int num_states = 0;
  int num_vars = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::vector<double> p;  // row-major, num_states x num_states

  double at(int i, int j) const {
    return p[static_cast<std::size_t>(i) * num_states + j];
  }
  double& at(int i, int j) { return p[static_cast<std::size_t>(i) * num_states + j]; }
  const double* row(int i) const {
    return p.data() + static_cast<std::size_t>(i) * num_states;
  }
};

// One-step law of the clustered solver from every assignment: epsilon mass
// spread uniformly over all states (the random jump), with the remaining
// mass split over candidate flips by the class-selection law. Model states
// keep the remaining mass as a self-loop so the analysis chain keeps
// moving where the solver would halt.
inline TransitionMatrix build_chain(const CnfFormula& f, double alpha, double epsilon) {
  if (f.num_vars() > kMaxChainVars)
    throw Error(ErrorCode::TooManyVariables,
                "chain limited to " + std::to_string(kMaxChainVars) + " variables");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1)");

  TransitionMatrix m;
  m.num_states = 1 << f.num_vars();
  m.num_vars = f.num_vars();
  m.alpha = alpha;
  m.epsilon = epsilon;
  m.p.assign(static_cast<std::size_t>(m.num_states) * m.num_states,
             epsilon / m.num_states);

  const double flip_mass = 1.0 - epsilon;
  for (int s = 0; s < m.num_states; ++s) {
    const Assignment a = assignment_from_state(static_cast<std::uint64_t>(s), f.num_vars());
    const StateClassification sc = classify_state(f, a);
    if (sc.state_kind == StateKind::Solved) {
      m.at(s, s) += flip_mass;
      continue;
    }
    const std::vector<int>* classes[3] = {&sc.positive_vars, &sc.null_vars,
                                          &sc.negative_vars};
    int non_empty = 0;
    for (const auto* c : classes)
      if (!c->empty()) ++non_empty;
    int top = 0;
    while (classes[top]->empty()) ++top;

    const auto add_flip = [&](int v, double mass) {
      m.at(s, s ^ (1 << v)) += mass;
    };
    if (non_empty == 1) {
      const double each = flip_mass / static_cast<double>(classes[top]->size());
      for (int v : *classes[top]) add_flip(v, each);
    } else {
      const double each_top = flip_mass * alpha / static_cast<double>(classes[top]->size());
      for (int v : *classes[top]) add_flip(v, each_top);
      std::size_t rest = 0;
      for (int i = top + 1; i < 3; ++i) rest += classes[i]->size();
      const double each_rest = flip_mass * (1.0 - alpha) / static_cast<double>(rest);
      for (int i = top + 1; i < 3; ++i)
        for (int v : *classes[i]) add_flip(v, each_rest);
    }
  }
  return m;
}

struct StationaryDist {
  std::vector<double> w;
  double residual = 0.0;  // max_j |(wM)_j - w_j|
};

namespace detail {

inline double stationary_residual(const TransitionMatrix& m, const std::vector<double>& w) {
  double res = 0.0;
  for (int j = 0; j < m.num_states; ++j) {
    long double acc = 0.0L;
    for (int i = 0; i < m.num_states; ++i)
      acc += static_cast<long double>(w[static_cast<std::size_t>(i)]) * m.at(i, j);
    const double diff = std::fabs(static_cast<double>(acc) - w[static_cast<std::size_t>(j)]);
    if (diff > res) res = diff;
  }
  return res;
}

inline std::vector<double> stationary_power_iteration(const TransitionMatrix& m,
                                                      double tol, std::uint64_t max_iters) {
  const int n = m.num_states;
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> next(static_cast<std::size_t>(n));
  for (std::uint64_t it = 0; it < max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double wi = w[static_cast<std::size_t>(i)];
      if (wi == 0.0) continue;
      const double* row = m.row(i);
      for (int j = 0; j < n; ++j) next[static_cast<std::size_t>(j)] += wi * row[j];
    }
    double sum = 0.0;
    for (double x : next) sum += x;
    for (double& x : next) x /= sum;
    double delta = 0.0;
    for (int j = 0; j < n; ++j)
      delta = std::max(delta, std::fabs(next[static_cast<std::size_t>(j)] - w[static_cast<std::size_t>(j)]));
    w.swap(next);
    if (delta <= tol) return w;
  }
  throw Error(ErrorCode::NotConverged, "power iteration exceeded max iterations");
}

}  // namespace detail

// Invariant distribution w with wM = w. Direct solve of the transposed
// system with one equation replaced by the normalization row for small
// chains; power iteration (tol 1e-12, at most 1e6 sweeps) beyond.
inline StationaryDist stationary(const TransitionMatrix& m) {
  const int n = m.num_states;
  std::vector<double> w;
  if (n <= kMaxStationaryDirectStates) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) = m.at(j, i) - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) a.at(n - 1, j) = 1.0;
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    b[static_cast<std::size_t>(n - 1)] = 1.0;
    w = lu_solve_refined(a, b);
  } else {
    w = detail::stationary_power_iteration(m, 1e-12, 1000000);
  }

  double sum = 0.0;
  for (double& x : w) {
    if (x < 0.0) x = 0.0;  // solver noise at the 1e-18 level
    sum += x;
  }
  for (double& x : w) x /= sum;

  StationaryDist d{std::move(w), 0.0};
  d.residual = detail::stationary_residual(m, d.w);
  if (d.residual > 1e-10)
    throw Error(ErrorCode::NotConverged,
                "stationary residual " + std::to_string(d.residual) + " above 1e-10");
  return d;
}

// ---------------------------------------------------------------------------
// Two-state coarse-graining over positive / non-positive states.

struct Partition {
  std::vector<int> s_plus;   // states allowing a positive flip
  std::vector<int> s_minus;  // non-solved states allowing none
  std::vector<int> models;   // solved states, excluded from the lumping
};

inline Partition partition_states(const CnfFormula& f) {
  if (f.num_vars() > kMaxChainVars)
    throw Error(ErrorCode::TooManyVariables, "partition limited to chain sizes");
  Partition p;
  const int states = 1 << f.num_vars();
  for (int s = 0; s < states; ++s) {
    const StateClassification sc =
        classify_state(f, assignment_from_state(static_cast<std::uint64_t>(s), f.num_vars()));
    switch (sc.state_kind) {
      case StateKind::Solved: p.models.push_back(s); break;
      case StateKind::Positive: p.s_plus.push_back(s); break;
      case StateKind::NonPositive: p.s_minus.push_back(s); break;
    }
  }
  return p;
}

struct Lumped2Chain {
  double a = 0.0;  // transition rate out of the positive class
  double b = 0.0;  // transition rate out of the non-positive class
  std::array<double, 2> w2state{};                 // (b, a) / (a + b)
  std::array<std::array<double, 2>, 2> W{};        // rows equal to w2state
  std::array<std::array<double, 2>, 2> Z{};        // fundamental matrix
  std::array<double, 2> sigma_sq{};                // asymptotic visit variances
};

// Closed forms for the 2-state chain P = [[1-a, a], [b, 1-b]]: invariant
// vector, invariant matrix W, fundamental matrix Z = (I - P + W)^{-1}, and
// the visit-count variances sigma_j^2 = 2 w_j z_jj - w_j - w_j^2, which
// collapse to ab(2-a-b)/(a+b)^3 for both states.
inline Lumped2Chain two_state_quantities(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw Error(ErrorCode::InvalidProbabilities, "a and b must lie in [0, 1]");
  if (a + b <= 0.0)
    throw Error(ErrorCode::DegenerateChain, "a + b must be positive");

  Lumped2Chain c;
  c.a = a;
  c.b = b;
  const double s = a + b;
  c.w2state = {b / s, a / s};
  c.W = {{{c.w2state[0], c.w2state[1]}, {c.w2state[0], c.w2state[1]}}};
  const double s2 = s * s;
  c.Z = {{{(b * b + a * b + a) / s2, (a * a + a * b - a) / s2},
          {(b * b + a * b - b) / s2, (a * a + a * b + b) / s2}}};
  for (int j = 0; j < 2; ++j) {
    const double wj = c.w2state[static_cast<std::size_t>(j)];
    c.sigma_sq[static_cast<std::size_t>(j)] =
        2.0 * wj * c.Z[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] - wj - wj * wj;
  }
  return c;
}

// Stationary-flow-weighted class transition rates
//
//   a = (1 / sum_{i in S+} w_i) * sum_{i in S+} w_i * sum_{j in S-} p_ij
//
// and symmetrically for b, then the closed-form 2-state quantities.
inline Lumped2Chain lump_two_state(const TransitionMatrix& m, const StationaryDist& w,
                                   const Partition& part) {
  long double mass_plus = 0.0L, mass_minus = 0.0L;
  for (int i : part.s_plus) mass_plus += w.w[static_cast<std::size_t>(i)];
  for (int i : part.s_minus) mass_minus += w.w[static_cast<std::size_t>(i)];
  if (part.s_plus.empty() || mass_plus <= 0.0L)
    throw Error(ErrorCode::EmptyClass, "positive class has zero stationary mass");
  if (part.s_minus.empty() || mass_minus <= 0.0L)
    throw Error(ErrorCode::EmptyClass, "non-positive class has zero stationary mass");

  std::vector<char> in_minus(static_cast<std::size_t>(m.num_states), 0);
  std::vector<char> in_plus(static_cast<std::size_t>(m.num_states), 0);
  for (int i : part.s_minus) in_minus[static_cast<std::size_t>(i)] = 1;
  for (int i : part.s_plus) in_plus[static_cast<std::size_t>(i)] = 1;

  long double flow_pm = 0.0L, flow_mp = 0.0L;
  for (int i : part.s_plus) {
    const double* row = m.row(i);
    long double out = 0.0L;
    for (int j = 0; j < m.num_states; ++j)
      if (in_minus[static_cast<std::size_t>(j)]) out += row[j];
    flow_pm += static_cast<long double>(w.w[static_cast<std::size_t>(i)]) * out;
  }
  for (int i : part.s_minus) {
    const double* row = m.row(i);
    long double out = 0.0L;
    for (int j = 0; j < m.num_states; ++j)
      if (in_plus[static_cast<std::size_t>(j)]) out += row[j];
    flow_mp += static_cast<long double>(w.w[static_cast<std::size_t>(i)]) * out;
  }

  return two_state_quantities(static_cast<double>(flow_pm / mass_plus),
                              static_cast<double>(flow_mp / mass_minus));
}

// Lower bound on the expected per-step gain in satisfied clauses as a
// function of the positive-class mass: w1/2 - (1 - w1)/4.
inline double expected_gain(double w1) {
  if (!(w1 >= 0.0 && w1 <= 1.0))
    throw Error(ErrorCode::InvalidProbabilities, "w1 must lie in [0, 1]");
  return 0.75 * w1 - 0.25;
}

// ---------------------------------------------------------------------------
// Per-state flip payoffs.

// Expected change in satisfied clauses for one solver step from each
// state, under the class-selection law alone (the epsilon jump is not a
// flip and is excluded). NaN for model states.
inline std::vector<double> per_state_expected_delta(const CnfFormula& f, double alpha) {
  if (f.num_vars() > kMaxChainVars)
    throw Error(ErrorCode::TooManyVariables, "payoff scan limited to chain sizes");
  const int states = 1 << f.num_vars();
  std::vector<double> out(static_cast<std::size_t>(states),
                          std::numeric_limits<double>::quiet_NaN());
  for (int s = 0; s < states; ++s) {
    const Assignment a = assignment_from_state(static_cast<std::uint64_t>(s), f.num_vars());
    const StateClassification sc = classify_state(f, a);
    if (sc.state_kind == StateKind::Solved) continue;
    const std::vector<int>* classes[3] = {&sc.positive_vars, &sc.null_vars,
                                          &sc.negative_vars};
    double mean[3] = {0.0, 0.0, 0.0};
    int non_empty = 0;
    for (int k = 0; k < 3; ++k) {
      if (classes[k]->empty()) continue;
      ++non_empty;
      long double acc = 0.0L;
      for (int v : *classes[k]) acc += make_break(f, a, v).delta;
      mean[k] = static_cast<double>(acc) / static_cast<double>(classes[k]->size());
    }
    int top = 0;
    while (classes[top]->empty()) ++top;
    if (non_empty == 1) {
      out[static_cast<std::size_t>(s)] = mean[top];
    } else {
      long double rest_acc = 0.0L;
      std::size_t rest_n = 0;
      for (int k = top + 1; k < 3; ++k) {
        rest_acc += static_cast<long double>(mean[k]) * static_cast<double>(classes[k]->size());
        rest_n += classes[k]->size();
      }
      out[static_cast<std::size_t>(s)] =
          alpha * mean[top] +
          (1.0 - alpha) * static_cast<double>(rest_acc / static_cast<long double>(rest_n));
    }
  }
  return out;
}

struct PayoffEstimate {
  double f1 = 0.0;          // expected per-step gain over positive states
  double f2 = 0.0;          // expected per-step gain over non-positive states
  double E_per_step = 0.0;  // w1 * f1 + w2 * f2
};

inline PayoffEstimate measure_class_payoffs(const TransitionMatrix& m,
                                            const StationaryDist& w, const Partition& part,
                                            const CnfFormula& f, double alpha) {
  (void)m;
  const std::vector<double> delta = per_state_expected_delta(f, alpha);
  long double mass_plus = 0.0L, mass_minus = 0.0L, acc_plus = 0.0L, acc_minus = 0.0L;
  for (int i : part.s_plus) {
    mass_plus += w.w[static_cast<std::size_t>(i)];
    acc_plus += static_cast<long double>(w.w[static_cast<std::size_t>(i)]) * delta[static_cast<std::size_t>(i)];
  }
  for (int i : part.s_minus) {
    mass_minus += w.w[static_cast<std::size_t>(i)];
    acc_minus += static_cast<long double>(w.w[static_cast<std::size_t>(i)]) * delta[static_cast<std::size_t>(i)];
  }
  if (part.s_plus.empty() || mass_plus <= 0.0L)
    throw Error(ErrorCode::EmptyClass, "positive class has zero stationary mass");
  if (part.s_minus.empty() || mass_minus <= 0.0L)
    throw Error(ErrorCode::EmptyClass, "non-positive class has zero stationary mass");

  PayoffEstimate pe;
  pe.f1 = static_cast<double>(acc_plus / mass_plus);
  pe.f2 = static_cast<double>(acc_minus / mass_minus);
  const long double total = mass_plus + mass_minus;
  pe.E_per_step = static_cast<double>(mass_plus / total) * pe.f1 +
                  static_cast<double>(mass_minus / total) * pe.f2;
  return pe;
}

// ---------------------------------------------------------------------------
// Fundamental matrix and visit-count statistics for the full chain.

inline Matrix fundamental_matrix(const TransitionMatrix& m, const StationaryDist& w,
                                 int max_states = kMaxFundamentalStates) {
  if (m.num_states > max_states)
    throw Error(ErrorCode::TooManyVariables,
                "fundamental matrix limited to " + std::to_string(max_states) + " states");
  const int n = m.num_states;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a.at(i, j) = (i == j ? 1.0 : 0.0) - m.at(i, j) + w.w[static_cast<std::size_t>(j)];
  return invert(a);
}

// sigma_j^2 = 2 w_j z_jj - w_j - w_j^2 for every state.
inline std::vector<double> visit_sigma_sq(const StationaryDist& w, const Matrix& z) {
  std::vector<double> out(w.w.size());
  for (std::size_t j = 0; j < w.w.size(); ++j)
    out[j] = 2.0 * w.w[j] * z.at(static_cast<int>(j), static_cast<int>(j)) - w.w[j] - w.w[j] * w.w[j];
  return out;
}

struct VisitStats {
  int state = 0;
  std::uint64_t n = 0;
  std::uint64_t visits = 0;
  double frac = 0.0;
  double standardized = 0.0;  // (V - n w_j) / sqrt(n sigma_j^2)
};

// Simulates independent trajectories of the chain and reports the visit
// count of state j per run. Each run starts from a uniformly random state
// and observes n states (the start plus n-1 transitions). Run r draws from
// the derived stream (seed, r).
inline std::vector<VisitStats> visit_count_stats(const TransitionMatrix& m,
                                                 const StationaryDist& w,
                                                 const std::vector<double>& sigma_sq, int j,
                                                 std::uint64_t n, std::uint64_t runs,
                                                 std::uint64_t seed,
                                                 int max_states = kMaxSimulationStates) {
  if (m.num_states > max_states)
    throw Error(ErrorCode::TooManyVariables, "trajectory simulation limited to " +
                                                 std::to_string(max_states) + " states");
  if (j < 0 || j >= m.num_states)
    throw Error(ErrorCode::InvalidConfig, "state index out of range");
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "need at least one step");

  const int sn = m.num_states;
  std::vector<double> cdf(static_cast<std::size_t>(sn) * sn);
  for (int i = 0; i < sn; ++i) {
    long double acc = 0.0L;
    for (int k = 0; k < sn; ++k) {
      acc += m.at(i, k);
      cdf[static_cast<std::size_t>(i) * sn + k] = static_cast<double>(acc);
    }
    cdf[static_cast<std::size_t>(i) * sn + (sn - 1)] = 1.0;
  }

  const double wj = w.w[static_cast<std::size_t>(j)];
  const double sj = sigma_sq[static_cast<std::size_t>(j)];
  std::vector<VisitStats> out;
  out.reserve(runs);
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng(Rng::derive_stream(seed, r));
    int state = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sn)));
    std::uint64_t visits = state == j ? 1 : 0;
    for (std::uint64_t t = 1; t < n; ++t) {
      const double u = rng.next_real01();
      const double* row_cdf = cdf.data() + static_cast<std::size_t>(state) * sn;
      state = static_cast<int>(std::upper_bound(row_cdf, row_cdf + sn, u) - row_cdf);
      if (state >= sn) state = sn - 1;
      if (state == j) ++visits;
    }
    VisitStats vs;
    vs.state = j;
    vs.n = n;
    vs.visits = visits;
    vs.frac = static_cast<double>(visits) / static_cast<double>(n);
    vs.standardized = (static_cast<double>(visits) - static_cast<double>(n) * wj) /
                      std::sqrt(static_cast<double>(n) * sj);
    out.push_back(vs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Birth-death chain on {0..m} with upward drift: p(i, i+1) = p_up,
// p(i, i) = p_stay for 0 < i < m, and a reflecting barrier p(0, 1) = 1.
// Expected hitting times of the top state solve the triangular recurrence
// E_i = 1/p_up + E_{i+1}, E_0 = 1 + E_1.
inline std::vector<double> birth_death_hit_times(int m, double p_up, double p_stay) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "top state must be at least 1");
  if (!(p_up > 0.0 && p_up <= 1.0) || p_stay < 0.0 ||
      std::fabs(p_up + p_stay - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidProbabilities, "need p_up + p_stay = 1 with p_up > 0");
  std::vector<double> e(static_cast<std::size_t>(m) + 1);
  const long double inv = 1.0L / static_cast<long double>(p_up);
  long double acc = 0.0L;
  e[static_cast<std::size_t>(m)] = 0.0;
  for (int i = m - 1; i >= 1; --i) {
    acc += inv;
    e[static_cast<std::size_t>(i)] = static_cast<double>(acc);
  }
  e[0] = static_cast<double>(1.0L + acc);
  return e;
}

}  // namespace csparrow
