// Acceptance gate for the toolkit: eleven end-to-end checks, one printed
// pass/fail line each, exit status 0 only if every one of them holds.
// Unlike the unit suites this binary exercises the shipped CLI as well
// (path injected via CSPARROW_CLI_PATH), so it must be run from a build
// tree. Informational findings are printed indented under their check;
// "reported" figures there are measurements, not assertions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "csparrow/csparrow.hpp"
#include "support/oracles.hpp"

namespace {

using namespace csparrow;

struct CheckFailure {
  std::string message;
};

void expect(bool ok, const std::string& message) {
  if (!ok) throw CheckFailure{message};
}

// std::system returns a wait(2) status word; unpack the child's exit code.
int exit_code(int status) {
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Shared instance schedule: a deterministic mix of uniform, planted and
// mixed-width formulas with n <= 10 and c <= 40, used by checks 2 and 3.

CnfFormula mixed_width_formula(int n, int c, Rng& rng) {
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(c));
  for (int k = 0; k < c; ++k) {
    const int width = 1 + static_cast<int>(rng.next_below(3));
    Clause cl;
    while (cl.width < width) {
      const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      bool fresh = true;
      for (int i = 0; i < cl.width; ++i)
        if (cl.lits[i].var == v) fresh = false;
      if (!fresh) continue;
      cl.lits[cl.width++] = Literal{v, rng.next_bool()};
    }
    clauses.push_back(cl);
  }
  return CnfFormula::from_clauses(n, std::move(clauses));
}

void for_each_scheduled_instance(int count, const std::function<void(const CnfFormula&)>& fn) {
  Rng rng(0x5EED5C4EDULL);
  for (int made = 0; made < count; ++made) {
    const int n = 3 + static_cast<int>(rng.next_below(8));   // 3..10
    const int c = 1 + static_cast<int>(rng.next_below(40));  // 1..40
    switch (made % 3) {
      case 0:
        fn(generate_random_3sat(GeneratorConfig{n, c, false, rng.next_u64()}).formula);
        break;
      case 1:
        fn(generate_random_3sat(GeneratorConfig{n, c, true, rng.next_u64()}).formula);
        break;
      default:
        fn(mixed_width_formula(n, c, rng));
        break;
    }
  }
}

// A small unsatisfiable formula whose chain has both state classes
// populated; screened by enumeration over derived seeds.
CnfFormula screened_unsat(int n, int c, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 500; ++attempt) {
    CnfFormula f =
        generate_random_3sat(GeneratorConfig{n, c, false, Rng::derive_stream(seed, attempt)})
            .formula;
    if (brute_force_satisfiable(f)) continue;
    const Partition part = partition_states(f);
    if (part.s_plus.empty() || part.s_minus.empty()) continue;
    return f;
  }
  throw CheckFailure{"no unsatisfiable instance with both classes at n=" + std::to_string(n)};
}

// ---------------------------------------------------------------------------
// 1. The eight-row flip table of the canonical three-clause cluster.

void c01_flip_table(std::vector<std::string>& notes) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<Clause> cs;
  cs.push_back(make_clause({Literal{0, false}, Literal{1, false}}));
  cs.push_back(make_clause({Literal{0, false}, Literal{2, true}}));
  cs.push_back(make_clause({Literal{0, true}, Literal{2, false}}));
  const CnfFormula pattern = CnfFormula::from_clauses(3, std::move(cs));

  const FlipTable t = flip_table(pattern, 0);
  expect(t.rows.size() == 8, "expected eight rows");

  struct Golden {
    int make, brk, delta;
    bool satisfying;
  };
  const Golden want[8] = {{1, 1, 0, false}, {1, 1, 0, false}, {0, 1, -1, true},
                          {1, 0, 1, false}, {2, 0, 2, false}, {0, 2, -2, true},
                          {1, 0, 1, false}, {0, 1, -1, true}};
  for (int i = 0; i < 8; ++i) {
    const FlipTableRow& r = t.rows[static_cast<std::size_t>(i)];
    expect(r.flip.make == want[i].make && r.flip.brk == want[i].brk &&
               r.flip.delta == want[i].delta && r.satisfying == want[i].satisfying,
           "row " + std::to_string(i) + " disagrees with the hand-derived table");
  }
  expect(t.rows[0].clause_bits == 0b110u, "clause truth bits wrong in row 0");

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(secs < 1.0, "took " + fmt(secs) + " s, limit is 1 s");
  notes.push_back("8/8 rows match; " + fmt(secs * 1000.0) + " ms");
}

// ---------------------------------------------------------------------------
// 2. Clustering preserves satisfiability, and models recovered from the
//    clustered formula satisfy the source. Zero tolerance.

void c02_equisatisfiable(std::vector<std::string>& notes) {
  int checked = 0, sat = 0, unsat = 0;
  for_each_scheduled_instance(1000, [&](const CnfFormula& f) {
    const ClusterizeResult cr = clusterize(f);
    const bool source_sat = brute_force_satisfiable(f);
    oracle::Dpll dpll(cr.formula);
    const std::optional<Assignment> star_model = dpll.find_model();
    expect(source_sat == star_model.has_value(),
           "satisfiability changed under clustering (instance " + std::to_string(checked) + ")");
    if (star_model) {
      expect(evaluate(cr.formula, *star_model).is_model,
             "search oracle returned a non-model");
      const Assignment recovered = recover_assignment(cr.map, *star_model);
      expect(evaluate(f, recovered).is_model,
             "recovered assignment fails the source formula (instance " +
                 std::to_string(checked) + ")");
      ++sat;
    } else {
      ++unsat;
    }
    ++checked;
  });
  expect(checked == 1000, "schedule short");
  expect(sat >= 100 && unsat >= 100, "instance mix too one-sided: " + std::to_string(sat) +
                                         " sat / " + std::to_string(unsat) + " unsat");
  notes.push_back(std::to_string(checked) + " instances: " + std::to_string(sat) + " sat, " +
                  std::to_string(unsat) + " unsat, every recovered model valid");
}

// ---------------------------------------------------------------------------
// 3. Every clusterized output respects the occurrence bounds:
//    <= 3 clauses per variable, <= 2 per literal.

void c03_cluster_shape(std::vector<std::string>& notes) {
  std::size_t outputs = 0, violations = 0;
  const auto check = [&](const CnfFormula& f) {
    const ClusterizeResult cr = clusterize(f);
    violations += verify_cluster_shape(cr.formula).violations.size();
    ++outputs;
  };
  for_each_scheduled_instance(1000, check);
  Rng rng(0xB0C5);
  for (int c : {2, 4, 8, 20, 40, 160})
    check(generate_bounded_occurrence_3sat(c, rng.next_u64()).formula);
  expect(violations == 0,
         std::to_string(violations) + " shape violations across " + std::to_string(outputs));
  notes.push_back(std::to_string(outputs) + " clusterized formulas, zero violations");
}

// ---------------------------------------------------------------------------
// 4. Two-state chain closed forms over 10^4 random (a, b) pairs: the
//    invariant vector, the fundamental matrix, and the two variance
//    expressions all agree.

void c04_two_state_forms(std::vector<std::string>& notes) {
  Rng rng(0xAB12);
  double max_w = 0.0, max_z = 0.0, max_s = 0.0;
  for (int k = 0; k < 10000; ++k) {
    double a, b;
    do a = rng.next_real01();
    while (a <= 0.0);
    do b = rng.next_real01();
    while (b <= 0.0);

    const Lumped2Chain c = two_state_quantities(a, b);
    const double p[2][2] = {{1.0 - a, a}, {b, 1.0 - b}};

    for (int j = 0; j < 2; ++j) {
      const double wp = c.w2state[0] * p[0][j] + c.w2state[1] * p[1][j];
      max_w = std::max(max_w, std::fabs(wp - c.w2state[j]));
    }

    double m[2][2];  // I - P + W
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        m[i][j] = (i == j ? 1.0 : 0.0) - p[i][j] + c.w2state[j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double r = c.Z[i][0] * m[0][j] + c.Z[i][1] * m[1][j];
        max_z = std::max(max_z, std::fabs(r - (i == j ? 1.0 : 0.0)));
      }

    const double s = a + b;
    const double closed = a * b * (2.0 - s) / (s * s * s);
    max_s = std::max(max_s, std::fabs(c.sigma_sq[0] - closed));
    max_s = std::max(max_s, std::fabs(c.sigma_sq[1] - closed));
    max_s = std::max(max_s, std::fabs(c.sigma_sq[0] - c.sigma_sq[1]));
  }
  expect(max_w <= 1e-12, "invariant-vector residual " + fmt(max_w));
  expect(max_z <= 1e-10, "fundamental-matrix residual " + fmt(max_z));
  expect(max_s <= 1e-10, "variance-form disagreement " + fmt(max_s));
  notes.push_back("10000 pairs; residuals w=" + fmt(max_w) + " Z=" + fmt(max_z) +
                  " sigma=" + fmt(max_s));
}

// ---------------------------------------------------------------------------
// 5. Lumping exactness on exhaustively built chains. The identities are
//    exact only when no state is a model (models sit outside both
//    classes), so the instances are screened to be unsatisfiable.

void c05_lumping(std::vector<std::string>& notes) {
  std::vector<CnfFormula> cases;
  Rng seeds(0x10F7);
  for (int rep = 0; rep < 6; ++rep) {
    cases.push_back(screened_unsat(4, 30, seeds.next_u64()));
    cases.push_back(screened_unsat(5, 40, seeds.next_u64()));
    cases.push_back(screened_unsat(6, 50, seeds.next_u64()));
  }
  cases.push_back(screened_unsat(8, 70, seeds.next_u64()));
  cases.push_back(screened_unsat(10, 90, seeds.next_u64()));

  double max_mass_dev = 0.0, max_flow_dev = 0.0;
  for (const CnfFormula& f : cases) {
    const TransitionMatrix m = build_chain(f, 0.75, 1e-3);
    const StationaryDist w = stationary(m);
    const Partition part = partition_states(f);
    expect(part.models.empty(), "screening let a satisfiable instance through");

    long double plus = 0.0L, minus = 0.0L;
    for (int i : part.s_plus) plus += w.w[static_cast<std::size_t>(i)];
    for (int i : part.s_minus) minus += w.w[static_cast<std::size_t>(i)];
    const long double total = plus + minus;

    const Lumped2Chain lump = lump_two_state(m, w, part);
    max_mass_dev = std::max(
        max_mass_dev, std::fabs(lump.w2state[0] - static_cast<double>(plus / total)));
    max_mass_dev = std::max(
        max_mass_dev, std::fabs(lump.w2state[1] - static_cast<double>(minus / total)));
    max_flow_dev = std::max(
        max_flow_dev,
        std::fabs(static_cast<double>(plus * lump.a - minus * lump.b)));
  }
  expect(max_mass_dev <= 1e-10, "class-mass deviation " + fmt(max_mass_dev));
  expect(max_flow_dev <= 1e-12, "flow-balance deviation " + fmt(max_flow_dev));
  notes.push_back(std::to_string(cases.size()) +
                  " chains (4<=n<=10); mass dev " + fmt(max_mass_dev) + ", flow dev " +
                  fmt(max_flow_dev));
}

// ---------------------------------------------------------------------------
// 6. Long-run visit frequencies: one 10^6-step trajectory of a 64-state
//    built chain, compared to the exact stationary mass of every state
//    that carries at least 0.001.

void c06_visit_frequencies(std::vector<std::string>& notes) {
  const CnfFormula f = screened_unsat(6, 50, 0x600D);
  const TransitionMatrix m = build_chain(f, 0.75, 0.05);
  const StationaryDist w = stationary(m);
  const Matrix z = fundamental_matrix(m, w);
  const std::vector<double> sig = visit_sigma_sq(w, z);

  const std::uint64_t n = 1000000;
  const std::uint64_t seed = 0x20260823ULL;
  int states_checked = 0;
  double max_err = 0.0;
  for (int j = 0; j < m.num_states; ++j) {
    if (w.w[static_cast<std::size_t>(j)] < 0.001) continue;
    // Same seed for every state: each call replays the one trajectory.
    const std::vector<VisitStats> vs = visit_count_stats(m, w, sig, j, n, 1, seed);
    const double err = std::fabs(vs[0].frac - w.w[static_cast<std::size_t>(j)]);
    expect(err <= 0.01, "state " + std::to_string(j) + " off by " + fmt(err));
    max_err = std::max(max_err, err);
    ++states_checked;
  }
  expect(states_checked >= 10, "only " + std::to_string(states_checked) +
                                   " states carry visible mass; chain too concentrated");
  notes.push_back(std::to_string(states_checked) + " states with mass >= 0.001; max |frac - w| = " +
                  fmt(max_err));
}

// ---------------------------------------------------------------------------
// 7. Standardized visit counts on the symmetric two-state chain: across
//    10^3 independent 10^5-step runs the mean must sit near 0 and the
//    variance near 1. The seed is pinned; with it the check is exact.

void c07_standardized_counts(std::vector<std::string>& notes) {
  TransitionMatrix m;
  m.num_states = 2;
  m.num_vars = 1;
  m.alpha = 0.0;
  m.epsilon = 0.0;
  m.p = {0.5, 0.5, 0.5, 0.5};
  StationaryDist w;
  w.w = {0.5, 0.5};
  w.residual = 0.0;
  const std::vector<double> sig = {0.25, 0.25};

  const std::vector<VisitStats> runs = visit_count_stats(m, w, sig, 0, 100000, 1000, 1402);
  long double acc = 0.0L, acc2 = 0.0L;
  for (const VisitStats& r : runs) {
    acc += r.standardized;
    acc2 += static_cast<long double>(r.standardized) * r.standardized;
  }
  const double mean = static_cast<double>(acc / 1000.0L);
  const double var =
      static_cast<double>((acc2 - acc * acc / 1000.0L) / 999.0L);
  expect(std::fabs(mean) <= 0.05, "sample mean " + fmt(mean));
  expect(var >= 0.9 && var <= 1.1, "sample variance " + fmt(var));
  notes.push_back("mean " + fmt(mean) + ", variance " + fmt(var) + " over 1000 runs");
}

// ---------------------------------------------------------------------------
// 8. Birth-death hitting times against the closed form, for ladders up
//    to 10^4 states, at relative tolerance 1e-12. Linearity in the
//    ladder height follows from the same exact values.

void c08_birth_death(std::vector<std::string>& notes) {
  const int ms[] = {1, 2, 3, 10, 100, 1000, 10000};
  double max_rel = 0.0;
  for (double p_up : {0.5, 0.75, 1.0}) {
    for (int m : ms) {
      const std::vector<double> e = birth_death_hit_times(m, p_up, 1.0 - p_up);
      expect(static_cast<int>(e.size()) == m + 1, "unexpected vector length");
      for (int i = 0; i <= m; ++i) {
        const double closed =
            i == 0 ? 1.0 + static_cast<double>(m - 1) / p_up
                   : static_cast<double>(m - i) / p_up;
        const double dev = std::fabs(e[static_cast<std::size_t>(i)] - closed) /
                           std::max(1.0, std::fabs(closed));
        expect(dev <= 1e-12, "m=" + std::to_string(m) + " i=" + std::to_string(i) +
                                 " relative deviation " + fmt(dev));
        max_rel = std::max(max_rel, dev);
      }
    }
    // Linearity: the start-state time grows by exactly (m' - m)/p_up.
    for (std::size_t k = 1; k < std::size(ms); ++k) {
      const double e0a = birth_death_hit_times(ms[k - 1], p_up, 1.0 - p_up)[0];
      const double e0b = birth_death_hit_times(ms[k], p_up, 1.0 - p_up)[0];
      const double gap = static_cast<double>(ms[k] - ms[k - 1]) / p_up;
      expect(std::fabs((e0b - e0a) - gap) <= 1e-12 * std::max(1.0, gap),
             "start-state times not linear in the ladder height");
    }
  }
  notes.push_back("ladders up to 10000, three drift values; max relative dev " + fmt(max_rel));
}

// ---------------------------------------------------------------------------
// 9. Scaling on exactly-two-occurrence sources: log-log slope of median
//    steps against clustered size within [0.5, 1.5], and not a single
//    negative flip anywhere in the logs.

void c09_scaling(std::vector<std::string>& notes) {
  const Prop3Result res = prop3_scaling_experiment({20, 40, 80, 160}, 100, 0xB1D5);
  expect(res.negative_flips == 0,
         std::to_string(res.negative_flips) + " negative flips logged");
  expect(res.slope >= 0.5 && res.slope <= 1.5, "slope " + fmt(res.slope) + " outside [0.5, 1.5]");
  std::string medians;
  for (const ExperimentRow& r : res.rows)
    medians += " m=" + std::to_string(r.m) + ":" + fmt(r.median_steps);
  notes.push_back("slope " + fmt(res.slope) + "; medians" + medians);
}

// ---------------------------------------------------------------------------
// 10. Claim-check reports. Nothing here asserts agreement with the
//     reference figures; the check passes when the reports are produced
//     with valid, internally consistent fields. Findings are printed.

void validate_report(const AnalysisReport& rep, const std::string& label) {
  expect(rep.num_states >= 2 && (rep.num_states & (rep.num_states - 1)) == 0,
         label + ": state count not a power of two");
  expect(rep.model_mass >= 0.0 && rep.model_mass <= 1.0, label + ": model mass out of range");
  expect(rep.W_plus >= 0.0 && rep.W_minus >= 0.0, label + ": negative class mass");
  expect(std::fabs(rep.model_mass + rep.W_plus + rep.W_minus - 1.0) <= 1e-9,
         label + ": masses do not sum to 1");
  expect(rep.lumped.a >= 0.0 && rep.lumped.a <= 1.0 && rep.lumped.b >= 0.0 &&
             rep.lumped.b <= 1.0,
         label + ": lumped rates out of range");
  expect(std::fabs(rep.lumped.w2state[0] + rep.lumped.w2state[1] - 1.0) <= 1e-12,
         label + ": lumped masses do not sum to 1");
  expect(rep.bound_checks.size() == 4, label + ": expected four bound checks");
  const char* names[4] = {"w1_at_least_one_fifth", "f1_in_half_one", "f2_in_minus_quarter_zero",
                          "gain_at_least_affine_bound"};
  for (int i = 0; i < 4; ++i) {
    const BoundCheck& c = rep.bound_checks[static_cast<std::size_t>(i)];
    expect(c.name == names[i], label + ": bound check " + std::to_string(i) + " misnamed");
    const bool holds = (!c.lower || c.value >= *c.lower) && (!c.upper || c.value <= *c.upper);
    expect(c.holds == holds, label + ": holds flag inconsistent for " + c.name);
    expect(std::isfinite(c.value), label + ": non-finite value for " + c.name);
  }
  const nlohmann::ordered_json j = to_json(rep);
  for (const char* key : {"num_states", "model_mass", "W_plus", "W_minus", "a", "b", "w2state",
                          "Z", "sigma_sq", "f1", "f2", "E_per_step", "eq6_holds", "bound_checks"})
    expect(j.contains(key), label + ": JSON missing key " + key);
}

void c10_claim_reports(std::vector<std::string>& notes) {
  // Measured success rates on planted sizes, next to the 0.15 reference
  // figure. The reference is reported for comparison, never asserted.
  SparrowParams params;
  params.seed = 0xC1A0;
  params.epsilon = 1e-3;
  const auto rows =
      success_rate_experiment({SizeSpec{6, 12}, SizeSpec{8, 20}, SizeSpec{10, 30}}, 100, params);
  expect(rows.size() == 3, "missing success-rate rows");
  for (const ExperimentRow& r : rows) {
    expect(r.trials == 100 && r.successes <= r.trials, "row counts inconsistent");
    expect(0.0 <= r.wilson_low && r.wilson_low <= r.success_rate &&
               r.success_rate <= r.wilson_high && r.wilson_high <= 1.0,
           "confidence interval invalid");
    expect(r.budget == 9 * r.m * r.m, "budget field inconsistent");
    notes.push_back("success rate m=" + std::to_string(r.m) + ": " + fmt(r.success_rate) + " [" +
                    fmt(r.wilson_low) + ", " + fmt(r.wilson_high) +
                    "] vs reference 0.15 (reported, not asserted)");
  }

  // Exact chain reports on exhaustively analyzable instances: two
  // clusterized unsatisfiable patterns, one screened unsatisfiable draw,
  // and one clusterized satisfiable source.
  struct Case {
    std::string label;
    CnfFormula formula;
    bool clusterize_input;
  };
  std::vector<Case> cases;
  {
    std::vector<Clause> cs;
    cs.push_back(make_clause({Literal{0, false}}));
    cs.push_back(make_clause({Literal{0, true}}));
    cases.push_back({"contradiction", CnfFormula::from_clauses(1, std::move(cs)), true});
  }
  {
    std::vector<Clause> cs;
    cs.push_back(make_clause({Literal{0, false}}));
    cs.push_back(make_clause({Literal{0, false}}));
    cs.push_back(make_clause({Literal{0, true}}));
    cases.push_back({"triple", CnfFormula::from_clauses(1, std::move(cs)), true});
  }
  cases.push_back({"screened-n5", screened_unsat(5, 40, 0xF1AD), false});
  {
    std::vector<Clause> cs;
    cs.push_back(make_clause({Literal{0, false}, Literal{1, false}}));
    cs.push_back(make_clause({Literal{0, true}, Literal{1, false}}));
    cases.push_back({"satisfiable-pair", CnfFormula::from_clauses(2, std::move(cs)), true});
  }

  int produced = 0;
  for (const Case& c : cases) {
    AnalysisOptions opt;
    opt.epsilon = 1e-3;
    opt.clusterize_input = c.clusterize_input;
    const AnalysisReport rep = run_analysis(c.formula, opt);
    validate_report(rep, c.label);
    ++produced;
    for (const BoundCheck& bc : rep.bound_checks)
      notes.push_back(c.label + ": " + bc.name + " = " + fmt(bc.value) +
                      (bc.holds ? " (within bound)" : " (outside bound; recorded as finding)"));
  }
  expect(produced == static_cast<int>(cases.size()), "some reports missing");
}

// ---------------------------------------------------------------------------
// 11. Reruns with identical configuration and seed are byte-identical:
//     library-level CSV/JSON writers and the installed CLI both.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  expect(static_cast<bool>(in), "missing output file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void c11_determinism(std::vector<std::string>& notes) {
  // Library level.
  {
    SparrowParams p;
    p.seed = 77;
    std::ostringstream a1, a2;
    success_rate_experiment({SizeSpec{6, 12}}, 10, p, true, &a1);
    success_rate_experiment({SizeSpec{6, 12}}, 10, p, true, &a2);
    expect(a1.str() == a2.str() && !a1.str().empty(), "success-rate CSV differs between runs");

    std::ostringstream b1, b2;
    prop3_scaling_experiment({4, 8}, 4, 9, &b1);
    prop3_scaling_experiment({4, 8}, 4, 9, &b2);
    expect(b1.str() == b2.str(), "scaling CSV differs between runs");

    std::ostringstream d1, d2;
    baseline_comparison({SizeSpec{5, 10}}, 5, 11, true, &d1);
    baseline_comparison({SizeSpec{5, 10}}, 5, 11, true, &d2);
    expect(d1.str() == d2.str(), "baseline CSV differs between runs");

    std::vector<Clause> cs;
    cs.push_back(make_clause({Literal{0, false}}));
    cs.push_back(make_clause({Literal{0, true}}));
    const CnfFormula pair = CnfFormula::from_clauses(1, std::move(cs));
    AnalysisOptions opt;
    opt.clusterize_input = true;
    const std::string j1 = to_json(run_analysis(pair, opt)).dump(2);
    const std::string j2 = to_json(run_analysis(pair, opt)).dump(2);
    expect(j1 == j2, "analysis JSON differs between runs");

    const CnfFormula inst =
        generate_random_3sat(GeneratorConfig{8, 20, true, 12345}).formula;
    SparrowParams sp;
    sp.seed = 99;
    sp.epsilon = 1e-3;
    const RunResult r1 = solve_end_to_end(inst, sp);
    const RunResult r2 = solve_end_to_end(inst, sp);
    expect(r1.status == r2.status && r1.steps_used == r2.steps_used && r1.model == r2.model,
           "solver reruns disagree");
  }

  // CLI level.
  namespace fs = std::filesystem;
  const std::string cli = std::string("\"") + CSPARROW_CLI_PATH + "\"";
  const fs::path dir = fs::temp_directory_path() / "csparrow-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto at = [&](const char* name) { return (dir / name).string(); };
  const auto run = [&](const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    expect(st != -1, "could not launch: " + cmd);
    return st;
  };

  run(cli + " gen --n 8 --c 20 --planted --seed 5 --out " + at("g1.cnf"));
  run(cli + " gen --n 8 --c 20 --planted --seed 5 --out " + at("g2.cnf"));
  expect(slurp(at("g1.cnf")) == slurp(at("g2.cnf")) && !slurp(at("g1.cnf")).empty(),
         "gen output differs between runs");

  const int s1 = run(cli + " solve " + at("g1.cnf") + " --seed 9 --epsilon 0.001 --trace " +
                     at("t1.csv") + " > " + at("s1.txt"));
  const int s2 = run(cli + " solve " + at("g1.cnf") + " --seed 9 --epsilon 0.001 --trace " +
                     at("t2.csv") + " > " + at("s2.txt"));
  expect(s1 == s2, "solve exit status differs between runs");
  expect(slurp(at("t1.csv")) == slurp(at("t2.csv")), "solve trace differs between runs");
  expect(slurp(at("s1.txt")) == slurp(at("s2.txt")), "solve stdout differs between runs");
  expect(exit_code(s1) == 10, "solved planted instance should exit 10, got " +
                                  std::to_string(exit_code(s1)));

  run(cli + " bench success-rate --sizes 6:12 --trials 5 --seed 3 --out " + at("r1.csv") +
      " --json > " + at("j1.json"));
  run(cli + " bench success-rate --sizes 6:12 --trials 5 --seed 3 --out " + at("r2.csv") +
      " --json > " + at("j2.json"));
  expect(slurp(at("r1.csv")) == slurp(at("r2.csv")), "bench CSV differs between runs");
  expect(slurp(at("j1.json")) == slurp(at("j2.json")), "bench JSON differs between runs");

  {
    std::ofstream pat(dir / "pair.cnf", std::ios::binary);
    pat << "p cnf 1 2\n1 0\n-1 0\n";
  }
  run(cli + " transform " + at("pair.cnf") + " --out " + at("e1.cnf") + " --map " + at("m1.map"));
  run(cli + " transform " + at("pair.cnf") + " --out " + at("e2.cnf") + " --map " + at("m2.map"));
  expect(slurp(at("e1.cnf")) == slurp(at("e2.cnf")), "transform output differs between runs");
  expect(slurp(at("m1.map")) == slurp(at("m2.map")), "variable map differs between runs");

  run(cli + " analyze --clusterize " + at("pair.cnf") + " --out " + at("a1.json"));
  run(cli + " analyze --clusterize " + at("pair.cnf") + " --out " + at("a2.json"));
  expect(slurp(at("a1.json")) == slurp(at("a2.json")) && !slurp(at("a1.json")).empty(),
         "analyze JSON differs between runs");

  const int sx = run(cli + " solve " + at("pair.cnf") + " --seed 9 --budget-mult 1 > " +
                     at("sx.txt") + " 2>&1");
  expect(exit_code(sx) == 20, "unsatisfiable pair should exhaust with exit 20, got " +
                                  std::to_string(exit_code(sx)));

  {
    std::ofstream bad(dir / "bad.cnf", std::ios::binary);
    bad << "p cnf oops\n";
  }
  const int sb = run(cli + " solve " + at("bad.cnf") + " > " + at("sb.txt") + " 2>&1");
  expect(exit_code(sb) == 3, "malformed input should exit 3, got " +
                                 std::to_string(exit_code(sb)));

  run(cli + " fliptable > " + at("f1.txt"));
  run(cli + " fliptable > " + at("f2.txt"));
  expect(slurp(at("f1.txt")) == slurp(at("f2.txt")) && !slurp(at("f1.txt")).empty(),
         "fliptable output differs between runs");

  notes.push_back("library writers and seven CLI invocations byte-identical on rerun");
  notes.push_back("exit codes pinned: solved=10, exhausted=20, parse error=3");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*fn)(std::vector<std::string>&);
  };
  const Criterion criteria[] = {
      {"flip table reproduces the hand-checked values", c01_flip_table},
      {"clustering preserves satisfiability and recovered models", c02_equisatisfiable},
      {"clusterized outputs satisfy the occurrence bounds", c03_cluster_shape},
      {"two-state closed forms are self-consistent", c04_two_state_forms},
      {"lumped rates agree with stationary class masses", c05_lumping},
      {"visit frequencies converge to the stationary distribution", c06_visit_frequencies},
      {"standardized visit counts are near-normal", c07_standardized_counts},
      {"birth-death hitting times match the closed form", c08_birth_death},
      {"median-step scaling stays in the expected band", c09_scaling},
      {"claim-check reports are produced with valid fields", c10_claim_reports},
      {"reruns are byte-identical", c11_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::vector<std::string> notes;
    try {
      c.fn(notes);
      std::printf("PASS %2d  %s\n", index, c.name);
    } catch (const CheckFailure& f) {
      ++failures;
      std::printf("FAIL %2d  %s: %s\n", index, c.name, f.message.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL %2d  %s: unexpected error: %s\n", index, c.name, e.what());
    }
    for (const std::string& n : notes) std::printf("         %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
