// Sampled real functions on [0, 1], nonoverlapping grid-interval families,
// and deterministic test-function generators. A sampled function stands for
// its piecewise-linear interpolant; every variation supremum downstream is
// taken over families with grid endpoints.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "varembed/errors.hpp"

namespace varembed {

struct SampledFunction {
  std::vector<double> grid;    // strictly increasing, grid.front() = 0, grid.back() = 1
  std::vector<double> values;  // finite, same length as grid

  SampledFunction(std::vector<double> grid_in, std::vector<double> values_in);

  int point_count() const { return static_cast<int>(grid.size()); }
  int last_index() const { return point_count() - 1; }
};

// Ordered nonoverlapping family of grid intervals (index pairs a < b with
// b_i <= a_{i+1}; sharing an endpoint is allowed). Index validity against a
// concrete grid is checked by the operations that take both.
struct IntervalFamily {
  std::vector<std::pair<int, int>> pairs;

  static IntervalFamily from_pairs(std::vector<std::pair<int, int>> pairs);

  int size() const { return static_cast<int>(pairs.size()); }
  bool empty() const { return pairs.empty(); }
};

// Minimum interval length 2^-level on the normalized domain.
struct MinLengthConstraint {
  int level;
  double min_length() const;
};

// |f(sup I) - f(inf I)| per interval, in family order.
std::vector<double> increments(const SampledFunction& f, const IntervalFamily& fam);

// Indices of strict or plateau-boundary local extrema, always including the
// endpoints. Any interval family can be moved onto these endpoints without
// decreasing any single increment.
std::vector<int> local_extrema(const SampledFunction& f);

// Number of maximal monotone runs of the (plateau-collapsed) sample sequence;
// v(n) is constant for n at or beyond this count. At least 1.
int alternation_count(const SampledFunction& f);

// --- generators (deterministic given parameters and seed) ------------------

// Piecewise-constant function on a uniform grid with the given signed jump
// sizes placed at the given gaps (gap g sits between grid points g and g+1).
SampledFunction generate_step(int points, const std::vector<double>& jump_sizes,
                              const std::vector<int>& gap_sites);

// Same, with distinct gap sites drawn from the seed.
SampledFunction generate_step_random_sites(int points, const std::vector<double>& jump_sizes,
                                           std::uint64_t seed);

// x^a * sin(x^-b) sampled on a uniform grid, with f(0) = 0.
SampledFunction generate_oscillator(double a, double b, int points);

// Uniform grid with independent values uniform in [-amplitude, amplitude].
SampledFunction generate_random_piecewise_linear(int points, double amplitude, std::uint64_t seed);

}  // namespace varembed
