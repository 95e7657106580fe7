// Property-test harness: numeric validation of the inequality toolkit and
// the proof chains behind every embedding condition, on randomized desk-scale
// instances with brute-force/exhaustive cross-checks, plus the experimental
// extremal-function search for the open necessity question.
//
// Reports are deterministic: per-trial randomness derives from (master seed,
// trial index), and aggregation uses only order-independent statistics, so
// serial and parallel runs produce bit-identical reports.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "varembed/embeddings.hpp"
#include "varembed/functions.hpp"
#include "varembed/gauges.hpp"

namespace varembed::verify {

// Finite positive sequence with a declared, exactly-validated direction.
struct PositiveMonotoneSequence {
  enum class Direction { nonincreasing, nondecreasing };
  std::vector<double> values;
  Direction direction;

  static PositiveMonotoneSequence nonincreasing(std::vector<double> values);
  static PositiveMonotoneSequence nondecreasing(std::vector<double> values);
};

struct CheckReport {
  std::string suite;
  long long trials = 0;
  long long violations = 0;
  // min over trials of the relative slack (RHS - LHS)/max(1, RHS); negative
  // values below -tol are violations.
  double worst_slack = 0.0;
  double max_ratio = 0.0;  // sharpness statistic where applicable (LHS/RHS)
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string params;  // sampling-distribution description
  std::vector<long long> violating_trials;
  bool experimental = false;
};

// --- single-instance checks -------------------------------------------------

// (sum x_j^q z_j)^{1/q} <= (sum x_j y_j) * max_k (sum_{j<=k} z_j)^{1/q} /
// (sum_{j<=k} y_j), for q >= 1 and positive nonincreasing x, y, z.
// Returns the relative slack (RHS - LHS)/max(1, RHS).
double prefix_ratio_slack(const PositiveMonotoneSequence& x, const PositiveMonotoneSequence& y,
                          const PositiveMonotoneSequence& z, double q);

// The 0 < q < 1 variant: sum x_j^q z_j <= (sum x_j y_j)^q * max_k
// (sum z)(sum y)^{-q}, valid when the prefix ratio (sum z)/(sum y) is
// nondecreasing; throws HypothesisViolated otherwise.
double prefix_ratio_sub_one_slack(const PositiveMonotoneSequence& x,
                                  const PositiveMonotoneSequence& y,
                                  const PositiveMonotoneSequence& z, double q);

// Summation by parts: sum x_k y_k = sum_{k<=s-1} D(x_k) Y_k + x_s Y_s.
// Returns the discrepancy relative to the l1 mass of either side's terms.
double abel_identity_discrepancy(std::span<const double> x, std::span<const double> y);

// One trial of the variation power-sum bound: increments of a random size-k
// family, exhaustive permutation hypothesis, conclusion
// (sum x_j^q)^{1/q} <= 16 (1 + V_{Phi,h}(f)) max_m m^{1/q} Phi_m^{-1}(h(k)).
struct VariationBoundTrial {
  double slack = 0.0;         // relative slack of the conclusion
  double ratio = 0.0;         // LHS/RHS sharpness
  bool hypothesis_ok = true;  // exhaustive/sampled permutation check
};
VariationBoundTrial variation_bound_trial(const SampledFunction& f, const SchrammSequence& phi,
                                          const VariationModulus& h, long long k, double q,
                                          const IntervalFamily& family);

// --- suites ------------------------------------------------------------------

CheckReport run_prefix_ratio_suite(long long trials, std::uint64_t seed, double tol, int threads);
CheckReport run_prefix_ratio_sub_one_suite(long long trials, std::uint64_t seed, double tol,
                                           int threads);
CheckReport run_abel_suite(long long trials, std::uint64_t seed, double tol, int threads);
CheckReport run_variation_bound_suite(long long trials, std::uint64_t seed, double tol,
                                      int threads);
CheckReport run_rearrangement_suite(long long trials, std::uint64_t seed, double tol, int threads);
CheckReport run_witness_suite(long long trials_per_condition, std::uint64_t seed, double tol,
                              int threads);

// --- proof-chain witnesses ----------------------------------------------------

struct WitnessLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // (rhs - lhs)/max(1, rhs); equality links use |lhs-rhs|
};

struct WitnessReport {
  std::string condition;
  std::vector<WitnessLink> links;
  long long violations = 0;
};

// Evaluates every intermediate inequality of the proof chain behind the
// verdict's condition on the worst witness family found by the variation
// engine. Requires verdict.outcome == holds_by_condition and f within the
// exact-mode budget.
WitnessReport membership_witness(const SampledFunction& f, const ClassSpec& source,
                                 const ClassSpec& target, const EmbeddingVerdict& verdict,
                                 double tol = 1e-9);

// --- extremal-function search (experimental; never a pass/fail gate) ----------

struct SearchEntry {
  int teeth = 0;
  double waterman_variation = 0.0;
  double max_ratio = 0.0;  // max_n v(n, f)/h(n)
  long long arg_n = 0;
};

struct SearchReport {
  bool applicable = false;
  std::string reason;
  std::vector<SearchEntry> entries;
  // Successive max_ratio quotients between doubling sizes; > 1 indicates the
  // ratio keeps growing, evidence (not proof) for unboundedness.
  std::vector<double> growth_trend;
};

// Staircase candidates with jump sizes shaped by 1/lambda_j; applicable only
// when sup n/(Lambda(n) h(n)) is certified unbounded.
SearchReport conjecture_search(const WeightSequence& lambda, const VariationModulus& h,
                               int max_teeth, std::uint64_t seed);

}  // namespace varembed::verify
