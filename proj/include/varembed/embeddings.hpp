// Sufficient-condition evaluators for embeddings between generalized
// bounded-variation classes, each returning a trichotomous verdict with a
// numeric certificate.
//
// A verdict of holds_by_condition is emitted only when the analytic tail or
// boundedness certificate is conclusive for recognized parametric families
// and every theorem hypothesis check passed; partial-sum smallness alone is
// never sufficient. Certified divergence/unboundedness yields
// condition_fails; everything else is inconclusive.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varembed/gauges.hpp"
#include "varembed/variation.hpp"

namespace varembed {

enum class Outcome { holds_by_condition, condition_fails, inconclusive };

std::string to_string(Outcome o);

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string note;
};

struct ConditionCertificate {
  std::string condition;        // which evaluator produced the verdict
  double value = 0.0;           // partial sum S_K or running sup
  long long truncation = 0;     // K actually evaluated
  double last_term = 0.0;
  std::optional<double> tail_estimate;  // convergent certified series only
  std::string tail_class;       // growth of the summand/expression, or "eventually_zero"/"unrecognized"
  std::vector<TracePoint> trace;  // checkpointed partial sums / running sups
  std::vector<HypothesisCheck> hypothesis_checks;
  std::string note;
};

struct EmbeddingVerdict {
  Outcome outcome = Outcome::inconclusive;
  ConditionCertificate certificate;
};

struct EvalOptions {
  long long truncation = 1'000'000;
  long long n_max = 40;  // outer levels for the two-sided Wiener condition
  double tol = 1e-10;
};

// The series' inner maxima M(k) = max_{m<=k} m * (Phi_m^{-1}(h(k)))^p for
// k = 1..K. Exact O(K) for factorized rules with power gauges (the max
// factorizes) and for bounded h (candidates become index-independent);
// otherwise the maximizer is tracked locally with a full rescan every 2^10
// steps.
std::vector<double> inner_max_sequence(const SchrammSequence& phi, const VariationModulus& h,
                                       double p, long long K);

// Series condition for Schramm class into weighted p-variation class:
// sum_k D(1/lambda_k) * max_{m<=k} m * (Phi_m^{-1}(h(k)))^p, D the forward
// difference.
EmbeddingVerdict check_embedding_schramm_to_shiba(const SchrammSequence& phi,
                                                  const VariationModulus& h,
                                                  const WeightSequence& lambda, double p,
                                                  const EvalOptions& opts = {});

// Specialization h == 1, p = 1; the inner max collapses to n * Phi_n^{-1}(1).
EmbeddingVerdict check_embedding_phibv_to_waterman(const SchrammSequence& phi,
                                                   const WeightSequence& lambda,
                                                   const EvalOptions& opts = {});

// Specialization to identity gauges: sum_n D(1/lambda_n) * h(n).
EmbeddingVerdict check_embedding_chanturiya_to_waterman(const VariationModulus& h,
                                                        const WeightSequence& lambda,
                                                        const EvalOptions& opts = {});

// Sup condition for weighted-modulus class pairs:
// sup_n (Gamma(n)/h2(n))^{1/q} * (h1(n)/Lambda(n))^{1/p}, requiring p <= q
// and one of {Gamma^{1/q}/Lambda^{1/p}}, {h2^{1/q}/h1^{1/p}} nondecreasing.
EmbeddingVerdict check_embedding_weighted_modulus_pair(const WeightSequence& lambda,
                                                       const VariationModulus& h1, double p,
                                                       const WeightSequence& gamma,
                                                       const VariationModulus& h2, double q,
                                                       const EvalOptions& opts = {});

// Specialization: sup_n n/(Lambda(n) h(n)).
EmbeddingVerdict check_embedding_waterman_to_chanturiya(const WeightSequence& lambda,
                                                        const VariationModulus& h,
                                                        const EvalOptions& opts = {});

// Specialization: sup_n Gamma(n)^{1/q} / Lambda(n)^{1/p}.
EmbeddingVerdict check_embedding_shiba_pair(const WeightSequence& lambda, double p,
                                            const WeightSequence& gamma, double q,
                                            const EvalOptions& opts = {});

// Specialization: sup_n h1(n)/h2(n).
EmbeddingVerdict check_embedding_chanturiya_pair(const VariationModulus& h1,
                                                 const VariationModulus& h2,
                                                 const EvalOptions& opts = {});

// Two-sided length-constrained condition:
// sup_{n <= n_max} sum_k D(1/gamma_k) * max_{m<=k} m * Lambda(m)^{-q_n/p_n}.
// Exponent sequences are extended by their last entry; the tail is certified
// at the minimal exponent ratio, which is the binding case.
EmbeddingVerdict check_embedding_wiener_pair(const WeightSequence& lambda,
                                             const std::vector<double>& p_seq,
                                             const WeightSequence& gamma,
                                             const std::vector<double>& q_seq,
                                             const EvalOptions& opts = {});

// Constant-exponent series specialization:
// sum_n D(1/gamma_n) * max_{k<=n} k * Lambda(k)^{-q/p} (valid without p <= q).
EmbeddingVerdict check_embedding_shiba_pair_series(const WeightSequence& lambda, double p,
                                                   const WeightSequence& gamma, double q,
                                                   const EvalOptions& opts = {});

// ---------------------------------------------------------------------------
// Class descriptions and the dispatcher.
// ---------------------------------------------------------------------------

struct ClassSpec {
  enum class Kind { schramm, waterman_shiba, chanturiya, waterman, wiener, phi_bv };

  Kind kind = Kind::waterman;
  std::optional<SchrammSequence> phi;   // schramm, phi_bv
  std::optional<VariationModulus> h;    // schramm, chanturiya
  std::optional<WeightSequence> lambda; // waterman(_shiba), wiener
  double p = 1.0;                       // waterman_shiba
  std::vector<double> p_seq;            // wiener

  static ClassSpec schramm(SchrammSequence phi, VariationModulus h);
  static ClassSpec waterman_shiba(WeightSequence lambda, double p);
  static ClassSpec chanturiya(VariationModulus h);
  static ClassSpec waterman(WeightSequence lambda);
  static ClassSpec wiener(WeightSequence lambda, std::vector<double> p_seq);
  static ClassSpec phi_bv(SchrammSequence phi);
};

std::string to_string(ClassSpec::Kind k);

// Scaled-power normal form (Lambda, h, p) shared by the weighted-modulus
// classes; empty when the class does not normalize (explicit gauge lists,
// non-power base gauges, Wiener classes).
struct WeightedModulusForm {
  WeightSequence lambda;
  VariationModulus h;
  double p;
};
std::optional<WeightedModulusForm> normalize_weighted_modulus(const ClassSpec& spec);

// Gauge-sequence / modulus view of a Schramm-like source class (schramm,
// phi_bv, chanturiya; identity gauges for a Chanturiya class). Throws
// NotApplicable for other kinds.
SchrammSequence source_gauge_view(const ClassSpec& spec);
VariationModulus source_modulus_view(const ClassSpec& spec);

struct DispatchResult {
  std::string condition;  // evaluator tag actually applied
  EmbeddingVerdict verdict;
};

// Selects the applicable condition for the (source, target) pair (most
// specific first) and evaluates it. `forced` names an evaluator tag to use
// instead of the table. Throws NotApplicable when nothing covers the pair.
DispatchResult evaluate_embedding(const ClassSpec& source, const ClassSpec& target,
                                  const EvalOptions& opts = {}, const std::string& forced = "");

}  // namespace varembed
