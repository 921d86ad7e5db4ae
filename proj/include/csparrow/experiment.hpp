#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "csparrow/cluster.hpp"
#include "csparrow/error.hpp"
#include "csparrow/exhaustive.hpp"
#include "csparrow/formula.hpp"
#include "csparrow/rng.hpp"
#include "csparrow/solver.hpp"

namespace csparrow {

// Instance generation and the benchmark experiments behind the `gen` and
// `bench` subcommands. Everything here is replayable: a row is a pure
// function of (config, seed), with per-size and per-trial RNG streams
// derived from the master seed.

struct GeneratorConfig {
  int n = 0;          // variable count
  int c = 0;          // clause count
  bool planted = false;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  CnfFormula formula;
  std::optional<Assignment> hidden;  // the planted model, when requested
};

// Uniform random 3-CNF: each clause draws 3 distinct variables by
// rejection and uniform polarities. Planted mode first draws a hidden
// assignment, then redraws each clause's three polarities until the
// hidden assignment satisfies the clause.
//
// Draw order: [planted: n bools for the hidden assignment], then per
// clause: variables by rejection in slot order, then polarity triples.
inline GeneratedInstance generate_random_3sat(const GeneratorConfig& cfg) {
  if (cfg.n < 3) throw Error(ErrorCode::InvalidConfig, "need at least 3 variables");
  if (cfg.c < 1) throw Error(ErrorCode::InvalidConfig, "need at least 1 clause");

  Rng rng(cfg.seed);
  std::optional<Assignment> hidden;
  if (cfg.planted) {
    Assignment h(static_cast<std::size_t>(cfg.n));
    for (int v = 0; v < cfg.n; ++v) h[static_cast<std::size_t>(v)] = rng.next_bool() ? 1 : 0;
    hidden = std::move(h);
  }

  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(cfg.c));
  for (int k = 0; k < cfg.c; ++k) {
    int vars[3];
    for (int slot = 0; slot < 3; ++slot) {
      int v;
      bool fresh;
      do {
        v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.n)));
        fresh = true;
        for (int s = 0; s < slot; ++s)
          if (vars[s] == v) fresh = false;
      } while (!fresh);
      vars[slot] = v;
    }
    bool neg[3];
    for (;;) {
      for (bool& b : neg) b = rng.next_bool();
      if (!hidden) break;
      bool sat = false;
      for (int slot = 0; slot < 3; ++slot) {
        const bool value = (*hidden)[static_cast<std::size_t>(vars[slot])] != 0;
        if (value != neg[slot]) sat = true;
      }
      if (sat) break;
    }
    clauses.push_back(make_clause({Literal{vars[0], neg[0]}, Literal{vars[1], neg[1]},
                                   Literal{vars[2], neg[2]}}));
  }
  return GeneratedInstance{CnfFormula::from_clauses(cfg.n, std::move(clauses)),
                           std::move(hidden)};
}

// Random 3-CNF where every variable occurs in exactly two clauses: the
// 3c literal slots are a shuffled multiset with each of the 3c/2
// variables appearing twice, repaired locally where a shuffle lands a
// variable twice in one clause. Requires an even clause count. Such
// formulas are always satisfiable (width 3, occurrences <= 3), and
// clustering maps them to exactly 4c clauses.
inline GeneratedInstance generate_bounded_occurrence_3sat(int c, std::uint64_t seed) {
  if (c < 2 || c % 2 != 0)
    throw Error(ErrorCode::InvalidConfig, "bounded-occurrence generator needs an even clause count >= 2");
  const int n = 3 * c / 2;

  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Rng rng(Rng::derive_stream(seed, attempt));
    std::vector<int> slots;
    slots.reserve(static_cast<std::size_t>(3) * c);
    for (int v = 0; v < n; ++v) {
      slots.push_back(v);
      slots.push_back(v);
    }
    for (std::size_t i = slots.size() - 1; i > 0; --i) {
      const std::size_t j = rng.next_below(i + 1);
      std::swap(slots[i], slots[j]);
    }

    bool stuck = false;
    for (int k = 0; k < c && !stuck; ++k) {
      int* triple = slots.data() + static_cast<std::size_t>(3) * k;
      for (;;) {
        int dup = -1;
        for (int p = 1; p < 3 && dup < 0; ++p)
          for (int q = 0; q < p; ++q)
            if (triple[p] == triple[q]) dup = p;
        if (dup < 0) break;
        std::size_t swap_at = slots.size();
        for (std::size_t q = static_cast<std::size_t>(3) * (k + 1); q < slots.size(); ++q) {
          if (slots[q] != triple[0] && slots[q] != triple[1] && slots[q] != triple[2]) {
            swap_at = q;
            break;
          }
        }
        if (swap_at == slots.size()) {
          stuck = true;  // tail of the shuffle cannot fix this clause; reshuffle
          break;
        }
        std::swap(triple[dup], slots[swap_at]);
      }
    }
    if (stuck) continue;

    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(c));
    for (int k = 0; k < c; ++k) {
      const int* triple = slots.data() + static_cast<std::size_t>(3) * k;
      clauses.push_back(make_clause({Literal{triple[0], rng.next_bool()},
                                     Literal{triple[1], rng.next_bool()},
                                     Literal{triple[2], rng.next_bool()}}));
    }
    return GeneratedInstance{CnfFormula::from_clauses(n, std::move(clauses)), std::nullopt};
  }
  throw Error(ErrorCode::InvalidConfig, "could not shuffle a valid bounded-occurrence instance");
}

// ---------------------------------------------------------------------------
// Statistics helpers.

// Wilson score interval at 95% (z = 1.96), clamped to [0, 1].
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                                 double z = 1.96) {
  if (trials == 0 || successes > trials)
    throw Error(ErrorCode::InvalidConfig, "need 0 <= successes <= trials with trials > 0");
  const double t = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  // At the degenerate rates the matching endpoint is exactly 0 or 1;
  // computing it would round off by an ulp and exclude phat itself.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

inline double median_of(std::vector<double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InvalidConfig, "median of empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[h];
  return 0.5 * (xs[h - 1] + xs[h]);
}

// Least-squares slope/intercept of y against x.
inline std::pair<double, double> least_squares(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidConfig, "need at least two points to fit");
  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
  const long double n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double det = n * sxx - sx * sx;
  if (det == 0.0L) throw Error(ErrorCode::InvalidConfig, "degenerate abscissae");
  const double slope = static_cast<double>((n * sxy - sx * sy) / det);
  const double intercept = static_cast<double>((sy * sxx - sx * sxy) / det);
  return {slope, intercept};
}

// ---------------------------------------------------------------------------
// Experiment rows and CSV emission.

struct ExperimentRow {
  std::uint64_t m = 0;       // clustered clause count
  std::uint64_t n_star = 0;  // clustered variable count
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  double median_steps = 0.0;
  std::uint64_t budget = 0;
};

inline constexpr const char* kCsvSchemaComment = "# csparrow-csv v1";
inline constexpr const char* kCsvHeader =
    "m,n_star,trials,successes,success_rate,wilson_low,wilson_high,median_steps,budget";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_row_fields(std::ostream& out, const ExperimentRow& r) {
  out << r.m << ',' << r.n_star << ',' << r.trials << ',' << r.successes << ','
      << format_double(r.success_rate) << ',' << format_double(r.wilson_low) << ','
      << format_double(r.wilson_high) << ',' << format_double(r.median_steps) << ','
      << r.budget << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvSchemaComment << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) write_row_fields(out, r);
}

struct BaselineRow {
  std::string algorithm;  // "sparrow" or "schoening"
  ExperimentRow row;
};

inline void write_baseline_csv(std::ostream& out, const std::vector<BaselineRow>& rows) {
  out << kCsvSchemaComment << '\n' << "algorithm," << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.algorithm << ',';
    write_row_fields(out, r.row);
  }
}

// ---------------------------------------------------------------------------
// Experiments.

struct SizeSpec {
  int n = 0;
  int c = 0;
};

namespace detail {

// One satisfiable source instance per size: planted instances are
// satisfiable by construction; otherwise small instances are screened by
// enumeration, retrying a few derived seeds before giving up.
inline GeneratedInstance satisfiable_instance(const SizeSpec& size, bool planted,
                                              std::uint64_t size_seed) {
  if (planted) {
    return generate_random_3sat(
        GeneratorConfig{size.n, size.c, true, Rng::derive_stream(size_seed, 0)});
  }
  if (size.n > kMaxExhaustiveVars)
    throw Error(ErrorCode::InvalidConfig,
                "non-planted instances above the enumeration limit cannot be screened");
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    GeneratedInstance inst = generate_random_3sat(
        GeneratorConfig{size.n, size.c, false, Rng::derive_stream(size_seed, attempt)});
    if (brute_force_satisfiable(inst.formula)) return inst;
  }
  throw Error(ErrorCode::UnsatInstance, "no satisfiable instance found after 200 attempts");
}

}  // namespace detail

// Success-rate table: one screened (or planted) instance per size,
// `trials` independent end-to-end runs on it with per-trial derived
// seeds. median_steps is the median of steps_used across all trials
// (exhausted trials contribute their full budget).
inline std::vector<ExperimentRow> success_rate_experiment(const std::vector<SizeSpec>& sizes,
                                                          int trials,
                                                          const SparrowParams& params,
                                                          bool planted = true,
                                                          std::ostream* csv = nullptr) {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "need at least one trial");
  std::vector<ExperimentRow> rows;
  rows.reserve(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::uint64_t size_seed = Rng::derive_stream(params.seed, si);
    GeneratedInstance inst = detail::satisfiable_instance(sizes[si], planted, size_seed);
    ClusterizeResult cl = clusterize(inst.formula);

    ExperimentRow row;
    row.m = static_cast<std::uint64_t>(cl.formula.num_clauses());
    row.n_star = static_cast<std::uint64_t>(cl.formula.num_vars());
    row.trials = static_cast<std::uint64_t>(trials);
    row.budget = params.budget_multiplier * row.m * row.m;

    std::vector<double> steps;
    steps.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
      SparrowParams p = params;
      p.seed = Rng::derive_stream(size_seed, 1000000 + static_cast<std::uint64_t>(t));
      const RunResult res = clustered_sparrow(cl.formula, p);
      if (res.status == RunStatus::Solved) ++row.successes;
      steps.push_back(static_cast<double>(res.steps_used));
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    const auto [lo, hi] = wilson_interval(row.successes, row.trials);
    row.wilson_low = lo;
    row.wilson_high = hi;
    row.median_steps = median_of(std::move(steps));
    rows.push_back(row);
  }
  if (csv) write_csv(*csv, rows);
  return rows;
}

struct Prop3Result {
  std::vector<ExperimentRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  std::uint64_t negative_flips = 0;  // across every logged run
};

// Scaling of median solve cost on exactly-two-occurrence sources. Each
// size c gets `trials` fresh instances (one run each, flip log captured);
// the fit regresses log(median steps) on log(clustered clause count).
inline Prop3Result prop3_scaling_experiment(const std::vector<int>& c_values, int trials,
                                            std::uint64_t seed, std::ostream* csv = nullptr) {
  if (c_values.size() < 2)
    throw Error(ErrorCode::InvalidConfig, "need at least two sizes for a slope");
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "need at least one trial");

  Prop3Result result;
  std::vector<double> log_m, log_steps;
  for (std::size_t si = 0; si < c_values.size(); ++si) {
    const std::uint64_t size_seed = Rng::derive_stream(seed, si);
    ExperimentRow row;
    row.trials = static_cast<std::uint64_t>(trials);
    std::vector<double> steps;
    steps.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
      GeneratedInstance inst = generate_bounded_occurrence_3sat(
          c_values[si], Rng::derive_stream(size_seed, static_cast<std::uint64_t>(t)));
      ClusterizeResult cl = clusterize(inst.formula);
      SparrowParams p;
      p.seed = Rng::derive_stream(size_seed, 1000000 + static_cast<std::uint64_t>(t));
      p.capture_flip_log = true;
      const RunResult res = clustered_sparrow(cl.formula, p);
      if (res.status == RunStatus::Solved) ++row.successes;
      steps.push_back(static_cast<double>(res.steps_used));
      for (const FlipEvent& ev : *res.flip_log)
        if (!ev.random_jump && ev.cls == FlipClass::Negative) ++result.negative_flips;
      row.m = static_cast<std::uint64_t>(cl.formula.num_clauses());
      row.n_star = static_cast<std::uint64_t>(cl.formula.num_vars());
      row.budget = p.budget_multiplier * row.m * row.m;
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    const auto [lo, hi] = wilson_interval(row.successes, row.trials);
    row.wilson_low = lo;
    row.wilson_high = hi;
    row.median_steps = median_of(std::move(steps));
    result.rows.push_back(row);
    log_m.push_back(std::log(static_cast<double>(row.m)));
    log_steps.push_back(std::log(std::max(row.median_steps, 1.0)));
  }
  const auto [slope, intercept] = least_squares(log_m, log_steps);
  result.slope = slope;
  result.intercept = intercept;
  if (csv) write_csv(*csv, result.rows);
  return result;
}

// Head-to-head on shared source instances: the clustered solver runs end
// to end on E*, the baseline walk runs on E with a restart budget sized
// to a comparable number of total flips. Two rows per size.
inline std::vector<BaselineRow> baseline_comparison(const std::vector<SizeSpec>& sizes,
                                                    int trials, std::uint64_t seed,
                                                    bool planted = true,
                                                    std::ostream* csv = nullptr) {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "need at least one trial");
  std::vector<BaselineRow> rows;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const std::uint64_t size_seed = Rng::derive_stream(seed, si);
    GeneratedInstance inst = detail::satisfiable_instance(sizes[si], planted, size_seed);
    ClusterizeResult cl = clusterize(inst.formula);

    SparrowParams base;
    const std::uint64_t m = static_cast<std::uint64_t>(cl.formula.num_clauses());
    const std::uint64_t sparrow_budget = base.budget_multiplier * m * m;
    const std::uint64_t walk_len = static_cast<std::uint64_t>(3) * sizes[si].n;
    const std::uint64_t restarts = std::max<std::uint64_t>(1, sparrow_budget / walk_len);

    ExperimentRow srow, wrow;
    srow.m = m;
    srow.n_star = static_cast<std::uint64_t>(cl.formula.num_vars());
    srow.trials = wrow.trials = static_cast<std::uint64_t>(trials);
    srow.budget = sparrow_budget;
    wrow.m = static_cast<std::uint64_t>(inst.formula.num_clauses());
    wrow.n_star = static_cast<std::uint64_t>(inst.formula.num_vars());
    wrow.budget = restarts * walk_len;

    std::vector<double> s_steps, w_steps;
    for (int t = 0; t < trials; ++t) {
      SparrowParams p = base;
      p.seed = Rng::derive_stream(size_seed, 1000000 + static_cast<std::uint64_t>(t));
      const RunResult sres = clustered_sparrow(cl.formula, p);
      if (sres.status == RunStatus::Solved) ++srow.successes;
      s_steps.push_back(static_cast<double>(sres.steps_used));

      const RunResult wres = schoening_walk(
          inst.formula, restarts,
          Rng::derive_stream(size_seed, 2000000 + static_cast<std::uint64_t>(t)));
      if (wres.status == RunStatus::Solved) ++wrow.successes;
      w_steps.push_back(static_cast<double>(wres.steps_used));
    }
    const auto finish = [](ExperimentRow& row, std::vector<double> steps) {
      row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
      const auto [lo, hi] = wilson_interval(row.successes, row.trials);
      row.wilson_low = lo;
      row.wilson_high = hi;
      row.median_steps = median_of(std::move(steps));
    };
    finish(srow, std::move(s_steps));
    finish(wrow, std::move(w_steps));
    rows.push_back(BaselineRow{"sparrow", srow});
    rows.push_back(BaselineRow{"schoening", wrow});
  }
  if (csv) write_baseline_csv(*csv, rows);
  return rows;
}

}  // namespace csparrow
