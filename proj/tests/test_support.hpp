// Shared helpers for the unit and acceptance suites: independent oracles and
// deterministic samplers. Oracles here re-derive expected values with naive
// loops so they stay independent of the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "varembed/functions.hpp"
#include "varembed/gauges.hpp"
#include "varembed/rng.hpp"

namespace test_support {

using namespace varembed;

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// --- samplers ---------------------------------------------------------------

inline WeightSequence sample_weights(Rng& rng) {
  switch (rng.uniform_int(4)) {
    case 0:
      return WeightSequence::constant(rng.log_uniform(0.5, 4.0));
    case 1:
      return WeightSequence::power_log(rng.uniform(0.0, 1.0), 0.0);
    case 2:
      return WeightSequence::power_log(1.0, rng.uniform(0.0, 1.0));
    default: {
      auto tail = WeightSequence::power_log(rng.uniform(0.5, 1.0), 0.0);
      double hi = tail.lambda(3);
      std::vector<double> prefix{hi * rng.uniform(0.2, 0.5), hi * rng.uniform(0.5, 0.9), hi};
      std::sort(prefix.begin(), prefix.end());
      return WeightSequence::explicit_prefix(std::move(prefix), std::move(tail));
    }
  }
}

inline VariationModulus sample_modulus(Rng& rng) {
  switch (rng.uniform_int(5)) {
    case 0:
      return VariationModulus::power(rng.uniform(0.2, 1.0));
    case 1:
      return VariationModulus::log();
    case 2:
      return VariationModulus::constant_one();
    case 3:
      return VariationModulus::ratio(WeightSequence::power_log(rng.uniform(0.3, 1.0), 0.0));
    default: {
      std::vector<double> vals{rng.log_uniform(0.5, 2.0)};
      double step = rng.log_uniform(0.05, 0.5);
      for (int i = 0; i < 4; ++i) {
        vals.push_back(vals.back() + step);
        step *= rng.uniform(0.5, 1.0);  // concave: shrinking increments
      }
      return VariationModulus::explicit_prefix(std::move(vals));
    }
  }
}

inline ConvexGauge sample_pl_gauge(Rng& rng) {
  int segs = 2 + static_cast<int>(rng.uniform_int(3));
  std::vector<double> xs{0.0}, ys{0.0};
  double slope = rng.log_uniform(0.05, 0.5);
  for (int s = 0; s < segs; ++s) {
    xs.push_back(xs.back() + rng.log_uniform(0.1, 2.0));
    ys.push_back(ys.back() + slope * (xs.back() - xs[xs.size() - 2]));
    slope *= rng.uniform(1.0, 3.0);
  }
  return ConvexGauge::piecewise_linear(std::move(xs), std::move(ys));
}

inline SchrammSequence sample_schramm(Rng& rng) {
  switch (rng.uniform_int(5)) {
    case 0:
      return SchrammSequence::uniform(ConvexGauge::power(rng.uniform(1.0, 3.0)));
    case 1:
      return SchrammSequence::uniform(ConvexGauge::exp_minus_one());
    case 2:
      return SchrammSequence::scaled(ConvexGauge::power(rng.uniform(1.0, 3.0)),
                                     sample_weights(rng));
    case 3:
      return SchrammSequence::scaled(ConvexGauge::exp_minus_one(), sample_weights(rng));
    default: {
      auto base = sample_pl_gauge(rng);
      int count = 3 + static_cast<int>(rng.uniform_int(4));
      double mult = 1.0;
      std::vector<ConvexGauge> list;
      for (int j = 0; j < count; ++j) {
        std::vector<double> ys = base.breakpoints_y();
        for (auto& v : ys) v *= mult;
        list.push_back(ConvexGauge::piecewise_linear(base.breakpoints_x(), std::move(ys)));
        mult *= rng.uniform(0.4, 1.0);
      }
      return SchrammSequence::explicit_list(std::move(list));
    }
  }
}

inline SampledFunction sample_function(Rng& rng, int max_points) {
  int points = 4 + static_cast<int>(rng.uniform_int(max_points - 3));
  return generate_random_piecewise_linear(points, rng.log_uniform(0.2, 3.0), rng.next_u64());
}

// --- oracles -----------------------------------------------------------------

// Objective of a family under the sorted-matching semantics, recomputed
// naively.
inline double naive_objective(const SchrammSequence& phi, std::vector<double> incs) {
  std::sort(incs.begin(), incs.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t j = 0; j < incs.size(); ++j)
    s += phi.gauge_value(static_cast<long long>(j) + 1, incs[j]);
  return s;
}

// Exhaustive supremum over families of at most n nonoverlapping intervals
// with endpoints anywhere on the grid, optional minimum interval length.
// Independent recursive enumeration (no shared code with the library engine).
inline double exhaustive_modulus(const SampledFunction& f, long long n, const SchrammSequence& phi,
                                 double min_len = 0.0) {
  const int m = f.last_index();
  double best = 0.0;
  std::vector<double> incs;
  auto rec = [&](auto&& self, int start, long long left) -> void {
    best = std::max(best, naive_objective(phi, incs));
    if (left == 0) return;
    for (int a = start; a < m; ++a) {
      for (int b = a + 1; b <= m; ++b) {
        if (min_len > 0.0 && f.grid[b] - f.grid[a] < min_len) continue;
        incs.push_back(std::abs(f.values[b] - f.values[a]));
        self(self, b, left - 1);
        incs.pop_back();
      }
    }
  };
  rec(rec, 0, n);
  return best;
}

}  // namespace test_support
