// Variation functionals over sampled functions: the gauge-weighted modulus
// v(n, Phi, f), Schramm variation and norm, weighted p-variation, the
// length-constrained (Wiener-type) variation, and an exhaustive brute-force
// oracle.
//
// The supremum over interval families is a rank-dependent selection problem:
// increments are sorted descending and matched to the pointwise-nonincreasing
// gauges in index order. Exact evaluation uses a dynamic program when all
// gauges coincide (exact at any size) and exhaustive enumeration over
// extremum endpoints otherwise, inside a declared budget; the heuristic
// search is greedy seeding plus endpoint-exchange local search and its
// results are structurally marked as lower bounds.
#pragma once

#include <cstdint>
#include <vector>

#include "varembed/functions.hpp"
#include "varembed/gauges.hpp"

namespace varembed {

enum class SearchMode { exact, heuristic };
enum class ResultMode { exact, lower_bound };

// Declared affordability boundary for exact search.
struct ExactBudget {
  int max_extrema = 16;             // enumeration over extremum endpoints
  int max_constrained_points = 16;  // enumeration over all points under a length constraint
};

struct ModulusResult {
  long long n = 0;
  double value = 0.0;
  IntervalFamily witness;
  ResultMode mode = ResultMode::exact;
};

// One row of a per-n trace; the meaning of scale/ratio depends on the
// operation (h(n) and v(n)/h(n) for Schramm variation, the exponent and the
// rooted value for the length-constrained variation, partial sums for
// condition series).
struct TracePoint {
  long long n = 0;
  double value = 0.0;
  double scale = 0.0;
  double ratio = 0.0;
};

struct VariationResult {
  double value = 0.0;
  long long arg_n = 0;
  IntervalFamily witness;
  std::vector<TracePoint> trace;
  ResultMode mode = ResultMode::exact;
  bool unbounded = false;  // always false for sampled inputs; kept in the schema
};

// Supremum of sum_j phi_j(x_(j)) over families of at most n nonoverlapping
// grid intervals, x_(j) the increments sorted descending.
ModulusResult phi_modulus(const SampledFunction& f, long long n, const SchrammSequence& phi,
                          SearchMode mode = SearchMode::exact, const ExactBudget& budget = {},
                          std::uint64_t seed = 0);

// phi_modulus with uniform identity gauges; exact at any size.
ModulusResult chanturiya_modulus(const SampledFunction& f, long long n);

// v(n, Phi, f) for every n = 0..min(n_max, feasible family size) from a
// single exact search pass; index n holds v(n).
std::vector<double> modulus_profile(const SampledFunction& f, long long n_max,
                                    const SchrammSequence& phi, const ExactBudget& budget = {});

// Exhaustive enumeration over all grid endpoints; the ground-truth oracle.
// Requires at most 14 grid points.
ModulusResult brute_force_modulus(const SampledFunction& f, long long n, const SchrammSequence& phi);

// V_{Phi,h}(f) = max over 1 <= n <= n* of v(n, Phi, f)/h(n); n* is the
// alternation count of f, beyond which v is constant and h nondecreasing,
// so the finite max equals the sup. n_max > 0 caps the trace depth below
// n*. Throws InvalidParams when the Schramm condition is analytically
// refuted for (phi, h).
VariationResult schramm_variation(const SampledFunction& f, const SchrammSequence& phi,
                                  const VariationModulus& h, SearchMode mode = SearchMode::exact,
                                  const ExactBudget& budget = {}, std::uint64_t seed = 0,
                                  long long n_max = 0);

// sup over families of sum_j |f(I_j)|^p / lambda_j.
VariationResult lambda_p_variation(const SampledFunction& f, const WeightSequence& lambda, double p,
                                   SearchMode mode = SearchMode::exact,
                                   const ExactBudget& budget = {}, std::uint64_t seed = 0,
                                   long long n_max = 0);

// max over levels n <= p_seq.size() of the length-constrained supremum
// (sum_j |f(I_j)|^{p_n} / lambda_j)^{1/p_n} over families with
// inf |I_j| >= 2^-n. The level count must not exceed the first level whose
// constraint admits every family of the grid.
VariationResult wiener_variation(const SampledFunction& f, const WeightSequence& lambda,
                                 const std::vector<double>& p_seq,
                                 SearchMode mode = SearchMode::exact, const ExactBudget& budget = {},
                                 std::uint64_t seed = 0);

// |f(0)| + inf{c > 0 : V_{Phi,h}((f - f(0))/c) <= 1}, located by bisection on
// the nonincreasing map c -> V((f - f(0))/c).
double schramm_norm(const SampledFunction& f, const SchrammSequence& phi, const VariationModulus& h,
                    double rel_tol = 1e-10, const ExactBudget& budget = {});

}  // namespace varembed
