#include "varembed/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varembed/rng.hpp"

namespace varembed {
namespace {

constexpr double kWitnessRecomputeTol = 1e-12;

// Objective of a family given its increments: sort descending, match gauges
// in index order. Optimal by the equimonotone alignment on the admitted
// gauge domain.
double sorted_objective(const SchrammSequence& phi, std::vector<double> incs) {
  std::sort(incs.begin(), incs.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t j = 0; j < incs.size(); ++j)
    s += phi.gauge_value(static_cast<long long>(j) + 1, incs[j]);
  return s;
}

// Best value and witness per family size s = 0..n_cap.
struct Profile {
  std::vector<double> best;                  // best[s]
  std::vector<IntervalFamily> witness;       // witness[s]
  ResultMode mode = ResultMode::exact;

  explicit Profile(long long n_cap)
      : best(static_cast<std::size_t>(n_cap) + 1, 0.0),
        witness(static_cast<std::size_t>(n_cap) + 1) {}

  // v(n) = max over s <= n (phi_j(0) = 0 pads shorter families).
  void to_prefix_max() {
    for (std::size_t s = 1; s < best.size(); ++s) {
      if (best[s] < best[s - 1]) {
        best[s] = best[s - 1];
        witness[s] = witness[s - 1];
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Exact dynamic program (all gauges equal). Endpoints restricted to pts;
// intervals may share endpoints; optional minimum interval length.
// ---------------------------------------------------------------------------
Profile dp_profile(const SampledFunction& f, const std::vector<int>& pts, long long n_cap,
                   const SchrammSequence& phi, double min_len) {
  const int e = static_cast<int>(pts.size());
  n_cap = std::min<long long>(n_cap, e - 1);
  Profile prof(n_cap);
  auto gauge = [&](double x) { return phi.gauge_value(1, x); };

  // dp[j][i]: best with <= j intervals among the first i+1 endpoints.
  std::vector<std::vector<double>> dp(n_cap + 1, std::vector<double>(e, 0.0));
  // parent choice: -2 none, -1 skip endpoint i, else start index a.
  std::vector<std::vector<int>> choice(n_cap + 1, std::vector<int>(e, -2));

  for (long long j = 1; j <= n_cap; ++j) {
    for (int i = 1; i < e; ++i) {
      double bestv = dp[j][i - 1];
      int bestc = -1;
      for (int a = 0; a < i; ++a) {
        if (min_len > 0.0 && f.grid[pts[i]] - f.grid[pts[a]] < min_len) continue;
        double cand = dp[j - 1][a] + gauge(std::abs(f.values[pts[i]] - f.values[pts[a]]));
        if (cand > bestv) {
          bestv = cand;
          bestc = a;
        }
      }
      dp[j][i] = bestv;
      choice[j][i] = bestc;
    }
  }

  for (long long j = 1; j <= n_cap; ++j) {
    prof.best[j] = dp[j][e - 1];
    std::vector<std::pair<int, int>> fam;
    long long jj = j;
    int i = e - 1;
    while (jj > 0 && i > 0) {
      int c = choice[jj][i];
      if (c == -1 || c == -2) {
        --i;
      } else {
        fam.emplace_back(pts[c], pts[i]);
        i = c;
        --jj;
      }
    }
    std::reverse(fam.begin(), fam.end());
    prof.witness[j] = IntervalFamily::from_pairs(std::move(fam));
  }
  prof.to_prefix_max();
  return prof;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration in lexicographic family order; first-found strict
// maximizer per size, so witnesses are the lexicographically smallest.
// ---------------------------------------------------------------------------
Profile enum_profile(const SampledFunction& f, const std::vector<int>& pts, long long n_cap,
                     const SchrammSequence& phi, double min_len) {
  const int e = static_cast<int>(pts.size());
  n_cap = std::min<long long>(n_cap, e - 1);
  Profile prof(n_cap);

  std::vector<std::pair<int, int>> cur;
  std::vector<double> incs;  // kept descending

  auto rec = [&](auto&& self, int start) -> void {
    const auto s = static_cast<long long>(cur.size());
    if (s > 0) {
      double val = 0.0;
      for (std::size_t j = 0; j < incs.size(); ++j)
        val += phi.gauge_value(static_cast<long long>(j) + 1, incs[j]);
      if (val > prof.best[s]) {
        prof.best[s] = val;
        prof.witness[s] = IntervalFamily{cur};
      }
    }
    if (s == n_cap) return;
    for (int a = start; a < e; ++a) {
      for (int b = a + 1; b < e; ++b) {
        if (min_len > 0.0 && f.grid[pts[b]] - f.grid[pts[a]] < min_len) continue;
        double inc = std::abs(f.values[pts[b]] - f.values[pts[a]]);
        auto pos = std::upper_bound(incs.begin(), incs.end(), inc, std::greater<double>());
        pos = incs.insert(pos, inc);
        cur.emplace_back(pts[a], pts[b]);
        self(self, b);
        cur.pop_back();
        incs.erase(std::lower_bound(incs.begin(), incs.end(), inc, std::greater<double>()));
      }
    }
  };
  rec(rec, 0);
  prof.to_prefix_max();
  return prof;
}

// ---------------------------------------------------------------------------
// Heuristic: greedy seeding by marginal gain over the largest increments,
// endpoint-exchange local search, seeded restarts. Lower-bound semantics.
// ---------------------------------------------------------------------------
struct Candidate {
  int a, b;  // positions within pts
  double inc;
};

double family_objective(const SchrammSequence& phi, const SampledFunction& f,
                        const std::vector<int>& pts,
                        const std::vector<std::pair<int, int>>& fam_pts) {
  std::vector<double> incs;
  incs.reserve(fam_pts.size());
  for (auto [a, b] : fam_pts) incs.push_back(std::abs(f.values[pts[b]] - f.values[pts[a]]));
  std::sort(incs.begin(), incs.end(), std::greater<double>());
  double s = 0.0;
  for (std::size_t j = 0; j < incs.size(); ++j)
    s += phi.gauge_value(static_cast<long long>(j) + 1, incs[j]);
  return s;
}

bool compatible(const std::vector<std::pair<int, int>>& fam, int a, int b, int skip = -1) {
  for (int i = 0; i < static_cast<int>(fam.size()); ++i) {
    if (i == skip) continue;
    if (a < fam[i].second && fam[i].first < b) return false;  // interior overlap
  }
  return true;
}

Profile heuristic_profile(const SampledFunction& f, const std::vector<int>& pts, long long n_cap,
                          const SchrammSequence& phi, double min_len, std::uint64_t seed) {
  const int e = static_cast<int>(pts.size());
  n_cap = std::min<long long>(n_cap, e - 1);
  Profile prof(n_cap);
  prof.mode = ResultMode::lower_bound;

  std::vector<Candidate> cands;
  for (int a = 0; a < e; ++a)
    for (int b = a + 1; b < e; ++b) {
      if (min_len > 0.0 && f.grid[pts[b]] - f.grid[pts[a]] < min_len) continue;
      cands.push_back({a, b, std::abs(f.values[pts[b]] - f.values[pts[a]])});
    }
  std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) {
    if (l.inc != r.inc) return l.inc > r.inc;
    if (l.a != r.a) return l.a < r.a;
    return l.b < r.b;
  });

  std::vector<std::pair<int, int>> best_fam;
  double best_val = 0.0;

  constexpr int kRestarts = 4;
  for (int restart = 0; restart < kRestarts; ++restart) {
    Rng rng(seed + 0x51ed2701u * static_cast<std::uint64_t>(restart));
    std::vector<std::pair<int, int>> fam;
    double val = 0.0;

    // Greedy: walk candidates by decreasing increment; on restarts > 0 pick
    // randomly among the top few compatible ones.
    std::vector<char> used(cands.size(), 0);
    while (static_cast<long long>(fam.size()) < n_cap) {
      std::vector<std::size_t> options;
      for (std::size_t ci = 0; ci < cands.size() && options.size() < 3; ++ci) {
        if (used[ci]) continue;
        if (compatible(fam, cands[ci].a, cands[ci].b)) options.push_back(ci);
        if (restart == 0 && !options.empty()) break;  // plain greedy on first pass
      }
      if (options.empty()) break;
      std::size_t pick = options[restart == 0 ? 0 : static_cast<std::size_t>(rng.uniform_int(
                                                        static_cast<std::int64_t>(options.size())))];
      used[pick] = 1;
      auto trial = fam;
      auto it = std::upper_bound(trial.begin(), trial.end(),
                                 std::make_pair(cands[pick].a, cands[pick].b));
      trial.insert(it, {cands[pick].a, cands[pick].b});
      double tv = family_objective(phi, f, pts, trial);
      if (tv > val) {
        fam = std::move(trial);
        val = tv;
      }
    }

    // Endpoint-exchange local search: move either endpoint of any interval
    // anywhere compatible; best-improvement passes until stable. Pass budget
    // shrinks on large endpoint sets where a pass is quadratic.
    const int pass_budget = e > 64 ? 4 : 50;
    bool improved = true;
    int passes = 0;
    while (improved && passes++ < pass_budget) {
      improved = false;
      for (int i = 0; i < static_cast<int>(fam.size()); ++i) {
        auto base = fam;
        double local_best = val;
        std::pair<int, int> local_pair = fam[i];
        for (int a = 0; a < e; ++a) {
          for (int b = a + 1; b < e; ++b) {
            if (min_len > 0.0 && f.grid[pts[b]] - f.grid[pts[a]] < min_len) continue;
            if (!compatible(base, a, b, i)) continue;
            base[i] = {a, b};
            double tv = family_objective(phi, f, pts, base);
            if (tv > local_best) {
              local_best = tv;
              local_pair = {a, b};
            }
            base[i] = fam[i];
          }
        }
        if (local_best > val) {
          fam[i] = local_pair;
          std::sort(fam.begin(), fam.end());
          val = local_best;
          improved = true;
        }
      }
    }

    if (val > best_val) {
      best_val = val;
      best_fam = fam;
    }
  }

  // Trace lower bounds for smaller sizes from the prefix of the sorted
  // increments of the best family (a subfamily is itself a valid family).
  std::vector<std::pair<double, std::pair<int, int>>> ranked;
  for (auto [a, b] : best_fam)
    ranked.push_back({std::abs(f.values[pts[b]] - f.values[pts[a]]), {a, b}});
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& l, const auto& r) { return l.first > r.first; });
  for (long long s = 1; s <= n_cap && s <= static_cast<long long>(ranked.size()); ++s) {
    std::vector<std::pair<int, int>> sub;
    for (long long j = 0; j < s; ++j) sub.push_back(ranked[j].second);
    std::sort(sub.begin(), sub.end());
    std::vector<std::pair<int, int>> grid_pairs;
    for (auto [a, b] : sub) grid_pairs.emplace_back(pts[a], pts[b]);
    prof.best[s] = family_objective(phi, f, pts, sub);
    prof.witness[s] = IntervalFamily::from_pairs(std::move(grid_pairs));
  }
  prof.to_prefix_max();
  return prof;
}

std::vector<int> all_indices(const SampledFunction& f) {
  std::vector<int> idx(f.point_count());
  for (int i = 0; i < f.point_count(); ++i) idx[i] = i;
  return idx;
}

Profile compute_profile(const SampledFunction& f, long long n_cap, const SchrammSequence& phi,
                        SearchMode mode, const ExactBudget& budget, std::uint64_t seed,
                        double min_len, bool constrained) {
  if (mode == SearchMode::heuristic) {
    auto pts = constrained ? all_indices(f) : local_extrema(f);
    return heuristic_profile(f, pts, n_cap, phi, min_len, seed);
  }
  if (phi.uniform_gauges()) {
    auto pts = constrained ? all_indices(f) : local_extrema(f);
    return dp_profile(f, pts, n_cap, phi, min_len);
  }
  if (constrained) {
    if (f.point_count() > budget.max_constrained_points)
      throw BudgetExceeded("exact constrained search needs <= " +
                           std::to_string(budget.max_constrained_points) + " grid points, got " +
                           std::to_string(f.point_count()));
    return enum_profile(f, all_indices(f), n_cap, phi, min_len);
  }
  auto pts = local_extrema(f);
  if (static_cast<int>(pts.size()) > budget.max_extrema)
    throw BudgetExceeded("exact search needs <= " + std::to_string(budget.max_extrema) +
                         " extremum endpoints, got " + std::to_string(pts.size()));
  return enum_profile(f, pts, n_cap, phi, min_len);
}

ModulusResult make_result(const SampledFunction& f, const SchrammSequence& phi, long long n,
                          double value, IntervalFamily witness, ResultMode mode) {
  double recomputed = sorted_objective(phi, increments(f, witness));
  if (std::abs(recomputed - value) > kWitnessRecomputeTol * std::max(1.0, std::abs(value)))
    throw Error("internal: witness does not reproduce the reported modulus value");
  return ModulusResult{n, value, std::move(witness), mode};
}

}  // namespace

ModulusResult phi_modulus(const SampledFunction& f, long long n, const SchrammSequence& phi,
                          SearchMode mode, const ExactBudget& budget, std::uint64_t seed) {
  if (n < 1) throw InvalidParams("phi modulus: n must be >= 1");
  auto prof = compute_profile(f, n, phi, mode, budget, seed, 0.0, false);
  long long idx = std::min<long long>(n, static_cast<long long>(prof.best.size()) - 1);
  return make_result(f, phi, n, prof.best[idx], prof.witness[idx], prof.mode);
}

ModulusResult chanturiya_modulus(const SampledFunction& f, long long n) {
  return phi_modulus(f, n, SchrammSequence::uniform(ConvexGauge::power(1.0)));
}

std::vector<double> modulus_profile(const SampledFunction& f, long long n_max,
                                    const SchrammSequence& phi, const ExactBudget& budget) {
  if (n_max < 1) throw InvalidParams("modulus profile: n_max must be >= 1");
  auto prof = compute_profile(f, n_max, phi, SearchMode::exact, budget, 0, 0.0, false);
  return prof.best;
}

ModulusResult brute_force_modulus(const SampledFunction& f, long long n,
                                  const SchrammSequence& phi) {
  if (n < 1) throw InvalidParams("brute force: n must be >= 1");
  if (f.point_count() > 14)
    throw BudgetExceeded("brute force enumeration capped at 14 grid points, got " +
                         std::to_string(f.point_count()));
  auto prof = enum_profile(f, all_indices(f), n, phi, 0.0);
  long long idx = std::min<long long>(n, static_cast<long long>(prof.best.size()) - 1);
  return make_result(f, phi, n, prof.best[idx], prof.witness[idx], ResultMode::exact);
}

VariationResult schramm_variation(const SampledFunction& f, const SchrammSequence& phi,
                                  const VariationModulus& h, SearchMode mode,
                                  const ExactBudget& budget, std::uint64_t seed, long long n_max) {
  if (phi.schramm_certificate(h) == SchrammSequence::Certificate::refuted)
    throw InvalidParams("schramm variation: the gauge sequence is not Schramm for this modulus");
  long long n_star = alternation_count(f);
  if (n_max > 0) n_star = std::min(n_star, n_max);
  auto prof = compute_profile(f, n_star, phi, mode, budget, seed, 0.0, false);
  long long cap = static_cast<long long>(prof.best.size()) - 1;

  VariationResult out;
  out.mode = prof.mode;
  for (long long n = 1; n <= n_star; ++n) {
    long long idx = std::min(n, cap);
    double hn = h.value(n);
    double ratio = prof.best[idx] / hn;
    out.trace.push_back({n, prof.best[idx], hn, ratio});
    if (ratio > out.value) {
      out.value = ratio;
      out.arg_n = n;
      out.witness = prof.witness[idx];
    }
  }
  if (out.arg_n == 0) {  // constant function: zero everywhere
    out.arg_n = 1;
    out.witness = prof.witness[std::min<long long>(1, cap)];
  }
  return out;
}

VariationResult lambda_p_variation(const SampledFunction& f, const WeightSequence& lambda, double p,
                                   SearchMode mode, const ExactBudget& budget, std::uint64_t seed,
                                   long long n_max) {
  if (!(p >= 1.0)) throw InvalidParams("weighted p-variation: exponent must be >= 1");
  auto phi = SchrammSequence::scaled(ConvexGauge::power(p), lambda);
  long long n_star = alternation_count(f);
  if (n_max > 0) n_star = std::min(n_star, n_max);
  auto prof = compute_profile(f, n_star, phi, mode, budget, seed, 0.0, false);
  long long cap = static_cast<long long>(prof.best.size()) - 1;

  VariationResult out;
  out.mode = prof.mode;
  for (long long n = 1; n <= n_star; ++n) {
    long long idx = std::min(n, cap);
    out.trace.push_back({n, prof.best[idx], 1.0, prof.best[idx]});
  }
  long long idx = std::min(n_star, cap);
  out.value = prof.best[idx];
  out.arg_n = n_star;
  out.witness = prof.witness[idx];
  return out;
}

VariationResult wiener_variation(const SampledFunction& f, const WeightSequence& lambda,
                                 const std::vector<double>& p_seq, SearchMode mode,
                                 const ExactBudget& budget, std::uint64_t seed) {
  if (p_seq.empty()) throw InvalidParams("length-constrained variation: empty exponent sequence");
  for (std::size_t i = 0; i < p_seq.size(); ++i) {
    if (!(p_seq[i] >= 1.0))
      throw InvalidParams("length-constrained variation: exponents must be >= 1");
    if (i > 0 && p_seq[i] < p_seq[i - 1])
      throw InvalidParams("length-constrained variation: exponents must be nondecreasing");
  }
  double min_gap = 1.0;
  for (int i = 1; i < f.point_count(); ++i) min_gap = std::min(min_gap, f.grid[i] - f.grid[i - 1]);
  int n_levels = static_cast<int>(p_seq.size());
  int saturate = 1;
  while (std::ldexp(1.0, -saturate) > min_gap) ++saturate;
  if (n_levels > saturate)
    throw InvalidParams(
        "length-constrained variation: levels beyond " + std::to_string(saturate) +
        " admit no new families on this grid");

  VariationResult out;
  for (int level = 1; level <= n_levels; ++level) {
    double p = p_seq[static_cast<std::size_t>(level) - 1];
    double min_len = MinLengthConstraint{level}.min_length();
    auto phi = SchrammSequence::scaled(ConvexGauge::power(p), lambda);
    // Family size is capped by the packing bound 1/min_len and by the grid.
    long long cap_count = f.point_count() - 1;
    if (level < 62) cap_count = std::min<long long>(cap_count, 1LL << level);
    auto prof = compute_profile(f, cap_count, phi, mode, budget, seed, min_len, true);
    if (prof.mode == ResultMode::lower_bound) out.mode = ResultMode::lower_bound;
    long long idx = static_cast<long long>(prof.best.size()) - 1;
    double inner = prof.best[idx];
    double rooted = inner <= 0.0 ? 0.0 : (p == 1.0 ? inner : std::pow(inner, 1.0 / p));
    out.trace.push_back({level, rooted, p, rooted});
    if (rooted > out.value) {
      out.value = rooted;
      out.arg_n = level;
      out.witness = prof.witness[idx];
    }
  }
  if (out.arg_n == 0) out.arg_n = 1;
  return out;
}

double schramm_norm(const SampledFunction& f, const SchrammSequence& phi, const VariationModulus& h,
                    double rel_tol, const ExactBudget& budget) {
  double f0 = f.values.front();
  bool constant = true;
  for (double v : f.values)
    if (v != f0) {
      constant = false;
      break;
    }
  if (constant) return std::abs(f0);

  auto variation_of_scaled = [&](double c) {
    std::vector<double> vals(f.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (f.values[i] - f0) / c;
    SampledFunction g(f.grid, std::move(vals));
    return schramm_variation(g, phi, h, SearchMode::exact, budget).value;
  };

  double hi = 1.0;
  int steps = 0;
  while (variation_of_scaled(hi) > 1.0) {
    hi *= 2.0;
    if (++steps > kBracketDoublingBudget)
      throw BracketFailure("norm bisection: no feasible upper bracket found");
  }
  double lo = hi * 0.5;
  steps = 0;
  while (lo > 0.0 && variation_of_scaled(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++steps > kBracketDoublingBudget) {
      lo = 0.0;  // V stays <= 1 arbitrarily close to zero scale
      break;
    }
  }
  for (int it = 0; it < 500 && hi - lo > rel_tol * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (variation_of_scaled(mid) <= 1.0 ? hi : lo) = mid;
  }
  return std::abs(f0) + hi;
}

}  // namespace varembed
