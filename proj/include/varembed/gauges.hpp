// Sequence-valued and gauge-valued class parameters: weight sequences with a
// certified divergent reciprocal sum, moduli of variation, convex gauges and
// Schramm sequences, together with their partial sums, inverses and growth
// rates.
//
// Infinite sequences are represented by parametric families (plus optional
// explicit prefixes) whose divergence/monotonicity/growth behaviour is known
// in closed form; only such families are admitted, so every certificate
// emitted downstream is decidable. All values are immutable after
// construction and safe to share across threads; the memoized partial-sum
// caches extend under an internal lock.
#pragma once

#include <memory>
#include <vector>

#include "varembed/asymptotics.hpp"
#include "varembed/errors.hpp"

namespace varembed {

inline constexpr double kDefaultInverseTol = 1e-10;
inline constexpr int kBracketDoublingBudget = 200;

// Nondecreasing positive weights lambda_j whose reciprocals sum to infinity.
// The canonical parametric family is lambda_j = j^alpha * ln(j+e)^beta, which
// diverges iff alpha < 1, or alpha = 1 and beta <= 1; construction rejects
// parameters outside that region and non-monotone parameter combinations.
class WeightSequence {
public:
  enum class Family { constant, power_log, explicit_prefix };

  static WeightSequence constant(double c);
  static WeightSequence power_log(double alpha, double beta);
  // Explicit positive nondecreasing prefix; the tail family supplies
  // lambda_j for j > prefix length, evaluated at the global index j.
  static WeightSequence explicit_prefix(std::vector<double> values, WeightSequence tail);

  double lambda(long long j) const;      // j >= 1
  double reciprocal(long long j) const;  // 1/lambda_j, cached
  double partial_sum(long long n) const; // Lambda(n) = sum_{j<=n} 1/lambda_j
  double forward_difference(long long k) const;  // 1/lambda_k - 1/lambda_{k+1} >= 0

  Family family() const;
  double const_value() const;
  double alpha() const;
  double beta() const;
  const std::vector<double>& prefix_values() const;
  WeightSequence tail() const;

  GrowthRate growth() const;              // of lambda_j itself
  GrowthRate partial_sum_growth() const;  // of Lambda(n)
  // True when the forward differences vanish identically beyond a finite
  // prefix (constant families); then every difference-weighted series is a
  // finite sum.
  bool difference_eventually_zero() const;
  GrowthRate difference_growth() const;   // only meaningful when not eventually zero

  bool operator==(const WeightSequence& other) const;

private:
  struct Impl;
  explicit WeightSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Nondecreasing positive sequence h(n) gauging the growth of moduli of
// variation. Concavity is required only for use as a Chanturiya modulus; a
// construction flag records whether it was verified (analytically for the
// closed-form families, on a finite prefix for ratio/explicit ones).
class VariationModulus {
public:
  enum class Family { power, log, ratio, constant_one, explicit_prefix };

  static VariationModulus power(double gamma);  // n^gamma, gamma in (0, 1]
  static VariationModulus log();                // ln(n + 1)
  static VariationModulus ratio(WeightSequence lambda);  // n / Lambda(n)
  static VariationModulus constant_one();
  // Positive nondecreasing prefix, extended constantly beyond its length.
  static VariationModulus explicit_prefix(std::vector<double> values);

  double value(long long n) const;  // h(n), n >= 1

  Family family() const;
  double gamma() const;
  const WeightSequence& lambda() const;
  const std::vector<double>& prefix_values() const;

  bool concavity_verified() const;
  // 0 means verified analytically for the whole sequence.
  long long concavity_checked_prefix() const;

  GrowthRate growth() const;
  bool bounded() const { return stays_bounded(growth()); }

  bool operator==(const VariationModulus& other) const;

private:
  struct Impl;
  explicit VariationModulus(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Strictly increasing convex gauge phi on [0, inf) with phi(0) = 0.
class ConvexGauge {
public:
  enum class Family { power, exp_minus_one, piecewise_linear };

  static ConvexGauge power(double p);  // x^p, p >= 1
  static ConvexGauge exp_minus_one();  // e^x - 1
  // Convex piecewise-linear gauge through (0,0) and the given breakpoints
  // (strictly increasing x and y, nondecreasing positive slopes); extended
  // with the final slope beyond the last breakpoint.
  static ConvexGauge piecewise_linear(std::vector<double> xs, std::vector<double> ys);

  double value(double x) const;
  double inverse(double y) const;  // exact: closed form or segment search

  Family family() const;
  bool is_power() const { return family() == Family::power; }
  double power_exponent() const;
  const std::vector<double>& breakpoints_x() const;
  const std::vector<double>& breakpoints_y() const;

  // s0 with phi^{-1}(u) = Theta(u^{s0}) as u -> 0+ (power: 1/p, others: 1).
  double inverse_growth_exponent() const;

  bool operator==(const ConvexGauge& other) const;

private:
  struct Impl;
  explicit ConvexGauge(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Sequence of convex gauges phi_j, pointwise nonincreasing in j. Scaled and
// uniform rules factorize: Phi_k(x) = phi(x) * W(k) with W the weight partial
// sums (W(k) = k for the uniform rule). Explicit lists are admitted for
// adversarial tests; they are extended with their last gauge beyond the list
// and must pass sampled pointwise-ordering and difference-monotonicity
// checks, which is exactly the domain on which descending-sorted gauge
// assignment is optimal.
class SchrammSequence {
public:
  enum class Rule { scaled, uniform, explicit_list };
  enum class Certificate { certified, refuted, unknown };

  static SchrammSequence scaled(ConvexGauge phi, WeightSequence lambda);
  static SchrammSequence uniform(ConvexGauge phi);
  static SchrammSequence explicit_list(std::vector<ConvexGauge> gauges);

  double gauge_value(long long j, double x) const;  // phi_j(x)
  double capital_phi(long long k, double x) const;  // Phi_k(x) = sum_{j<=k} phi_j(x)

  // Inverse of Phi_k by bisection on an exponentially grown bracket:
  // |Phi_k(x*) - y| <= rel_tol * max(1, y). Throws BracketFailure if no upper
  // bracket is found within the doubling budget.
  double capital_phi_inverse(long long k, double y, double rel_tol = kDefaultInverseTol) const;

  // Closed-form inverse for factorized rules, bisection fallback otherwise.
  double inverse(long long k, double y) const;

  Rule rule() const;
  bool factorizes() const { return rule() != Rule::explicit_list; }
  // All phi_j identical (uniform rule, constant-weight scaled rule, or an
  // explicit list of equal gauges): unlocks the exact dynamic program.
  bool uniform_gauges() const;
  double weight_partial_sum(long long k) const;  // W(k), factorized rules only
  GrowthRate weight_partial_sum_growth() const;  // factorized rules only
  const ConvexGauge& base_gauge() const;         // factorized rules only
  const WeightSequence& scale_weights() const;   // scaled rule only
  const std::vector<ConvexGauge>& gauges() const;  // explicit rule only

  // Schramm condition relative to h: Phi_n(x)/h(n) -> infinity for each
  // x > 0. Decided analytically for factorized rules, unknown for explicit
  // lists.
  Certificate schramm_certificate(const VariationModulus& h) const;

  bool operator==(const SchrammSequence& other) const;

private:
  struct Impl;
  explicit SchrammSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace varembed
