#include "varembed/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "varembed/rng.hpp"
#include "varembed/variation.hpp"

namespace varembed::verify {
namespace {

// Constant of the variation power-sum bound.
constexpr double kEnvelopeFactor = 16.0;

double pow_fast(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

double rel_slack(double lhs, double rhs) { return (rhs - lhs) / std::max(1.0, rhs); }

// ---------------------------------------------------------------------------
// Deterministic parallel trial runner. Aggregation is order-independent
// (counts, min slack, max ratio, sorted violation lists), so serial and
// parallel runs produce identical reports.
// ---------------------------------------------------------------------------

struct TrialResult {
  double slack = std::numeric_limits<double>::infinity();
  double ratio = 0.0;
  bool violation = false;
};

struct Aggregate {
  long long violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::vector<long long> violating;

  void absorb(long long index, const TrialResult& r) {
    worst_slack = std::min(worst_slack, r.slack);
    max_ratio = std::max(max_ratio, r.ratio);
    if (r.violation) {
      ++violations;
      violating.push_back(index);
    }
  }
  void merge(const Aggregate& o) {
    violations += o.violations;
    worst_slack = std::min(worst_slack, o.worst_slack);
    max_ratio = std::max(max_ratio, o.max_ratio);
    violating.insert(violating.end(), o.violating.begin(), o.violating.end());
  }
};

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

Aggregate run_trials(long long trials, int threads,
                     const std::function<TrialResult(long long)>& trial) {
  threads = resolve_threads(threads);
  if (threads <= 1 || trials < 64) {
    Aggregate agg;
    for (long long i = 0; i < trials; ++i) agg.absorb(i, trial(i));
    std::sort(agg.violating.begin(), agg.violating.end());
    return agg;
  }
  std::vector<Aggregate> partials(static_cast<std::size_t>(threads));
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      long long i;
      while ((i = next.fetch_add(1)) < trials) partials[static_cast<std::size_t>(t)].absorb(i, trial(i));
    });
  }
  for (auto& th : pool) th.join();
  Aggregate agg;
  for (const auto& p : partials) agg.merge(p);
  std::sort(agg.violating.begin(), agg.violating.end());
  return agg;
}

CheckReport make_report(std::string suite, long long trials, std::uint64_t seed, double tol,
                        std::string params, const Aggregate& agg) {
  CheckReport rep;
  rep.suite = std::move(suite);
  rep.trials = trials;
  rep.violations = agg.violations;
  rep.worst_slack = agg.worst_slack;
  rep.max_ratio = agg.max_ratio;
  rep.seed = seed;
  rep.tol = tol;
  rep.params = std::move(params);
  rep.violating_trials = agg.violating;
  return rep;
}

// ---------------------------------------------------------------------------
// Samplers.
// ---------------------------------------------------------------------------

std::vector<double> sample_sorted_desc(Rng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.log_uniform(1e-3, 1e3);
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

WeightSequence sample_weights(Rng& rng) {
  switch (rng.uniform_int(4)) {
    case 0:
      return WeightSequence::constant(rng.log_uniform(0.5, 4.0));
    case 1:
      return WeightSequence::power_log(rng.uniform(0.0, 1.0), 0.0);
    case 2:
      return WeightSequence::power_log(1.0, rng.uniform(0.0, 1.0));
    default: {
      auto tail = WeightSequence::power_log(rng.uniform(0.5, 1.0), 0.0);
      double lo = tail.lambda(4);
      std::vector<double> prefix{lo * rng.uniform(0.2, 0.6), lo * rng.uniform(0.6, 0.9), lo};
      std::sort(prefix.begin(), prefix.end());
      return WeightSequence::explicit_prefix(std::move(prefix), std::move(tail));
    }
  }
}

VariationModulus sample_modulus(Rng& rng) {
  switch (rng.uniform_int(4)) {
    case 0:
      return VariationModulus::power(rng.uniform(0.2, 1.0));
    case 1:
      return VariationModulus::log();
    case 2:
      return VariationModulus::constant_one();
    default:
      return VariationModulus::ratio(WeightSequence::power_log(rng.uniform(0.3, 1.0), 0.0));
  }
}

ConvexGauge sample_pl_gauge(Rng& rng, double scale) {
  int segs = 2 + static_cast<int>(rng.uniform_int(3));
  std::vector<double> xs{0.0}, ys{0.0};
  double slope = rng.log_uniform(0.05, 0.5) * scale;
  double x = 0.0, y = 0.0;
  for (int s = 0; s < segs; ++s) {
    double dx = rng.log_uniform(0.1, 2.0);
    x += dx;
    y += slope * dx;
    xs.push_back(x);
    ys.push_back(y);
    slope *= rng.uniform(1.0, 3.0);  // convex: nondecreasing slopes
  }
  return ConvexGauge::piecewise_linear(std::move(xs), std::move(ys));
}

SchrammSequence sample_schramm(Rng& rng) {
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
      // Explicit list: one convex shape with nonincreasing multipliers keeps
      // both the pointwise ordering and the difference monotonicity.
      auto base = sample_pl_gauge(rng, 1.0);
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

SampledFunction sample_teeth(Rng& rng, int teeth, double height_lo = 0.25, double height_hi = 2.0) {
  std::vector<double> sizes;
  for (int t = 0; t < teeth; ++t) {
    double d = rng.log_uniform(height_lo, height_hi);
    sizes.push_back(d);
    sizes.push_back(-d);
  }
  int points = 2 * teeth + 1 + static_cast<int>(rng.uniform_int(3));
  return generate_step_random_sites(points, sizes, rng.next_u64());
}

IntervalFamily sample_family(Rng& rng, const SampledFunction& f, int size) {
  // 2*size distinct indices, consecutive pairs.
  int m = f.last_index();
  std::vector<int> idx(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < 2 * size; ++i) {
    int j = i + static_cast<int>(rng.uniform_int(static_cast<long long>(idx.size()) - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<int> chosen(idx.begin(), idx.begin() + 2 * size);
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < size; ++i) pairs.emplace_back(chosen[2 * i], chosen[2 * i + 1]);
  return IntervalFamily::from_pairs(std::move(pairs));
}

}  // namespace

// ---------------------------------------------------------------------------
// PositiveMonotoneSequence
// ---------------------------------------------------------------------------

PositiveMonotoneSequence PositiveMonotoneSequence::nonincreasing(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidParams("monotone sequence: entries must be positive and finite");
    if (i > 0 && values[i] > values[i - 1])
      throw InvalidParams("monotone sequence: not nonincreasing");
  }
  return {std::move(values), Direction::nonincreasing};
}

PositiveMonotoneSequence PositiveMonotoneSequence::nondecreasing(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidParams("monotone sequence: entries must be positive and finite");
    if (i > 0 && values[i] < values[i - 1])
      throw InvalidParams("monotone sequence: not nondecreasing");
  }
  return {std::move(values), Direction::nondecreasing};
}

// ---------------------------------------------------------------------------
// Single-instance checks
// ---------------------------------------------------------------------------

double prefix_ratio_slack(const PositiveMonotoneSequence& x, const PositiveMonotoneSequence& y,
                          const PositiveMonotoneSequence& z, double q) {
  const auto n = x.values.size();
  if (n == 0 || y.values.size() != n || z.values.size() != n)
    throw LengthMismatch("prefix-ratio inequality: sequences must have equal nonzero length");
  if (!(q >= 1.0)) throw InvalidParams("prefix-ratio inequality: q must be >= 1");

  double lhs_q = 0.0, xy = 0.0, zsum = 0.0, ysum = 0.0, max_term = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    lhs_q += std::pow(x.values[j], q) * z.values[j];
    xy += x.values[j] * y.values[j];
    zsum += z.values[j];
    ysum += y.values[j];
    max_term = std::max(max_term, std::pow(zsum, 1.0 / q) / ysum);
  }
  double lhs = std::pow(lhs_q, 1.0 / q);
  double rhs = xy * max_term;
  return rel_slack(lhs, rhs);
}

double prefix_ratio_sub_one_slack(const PositiveMonotoneSequence& x,
                                  const PositiveMonotoneSequence& y,
                                  const PositiveMonotoneSequence& z, double q) {
  const auto n = x.values.size();
  if (n == 0 || y.values.size() != n || z.values.size() != n)
    throw LengthMismatch("prefix-ratio inequality: sequences must have equal nonzero length");
  if (!(q > 0.0 && q < 1.0)) throw InvalidParams("sub-one variant: q must lie in (0, 1)");

  // Hypothesis: prefix ratio (sum z)/(sum y) nondecreasing.
  double zs = 0.0, ys = 0.0, prev = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    zs += z.values[j];
    ys += y.values[j];
    double r = zs / ys;
    if (r < prev * (1.0 - 1e-12))
      throw HypothesisViolated("sub-one variant: prefix ratio (sum z)/(sum y) not nondecreasing");
    prev = r;
  }

  double lhs = 0.0, xy = 0.0, max_term = 0.0;
  zs = ys = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    lhs += std::pow(x.values[j], q) * z.values[j];
    xy += x.values[j] * y.values[j];
    zs += z.values[j];
    ys += y.values[j];
    max_term = std::max(max_term, zs * std::pow(ys, -q));
  }
  double rhs = std::pow(xy, q) * max_term;
  return rel_slack(lhs, rhs);
}

double abel_identity_discrepancy(std::span<const double> x, std::span<const double> y) {
  const auto s = x.size();
  if (s == 0 || y.size() != s)
    throw LengthMismatch("summation by parts: sequences must have equal nonzero length");
  double lhs = 0.0, mass_lhs = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    lhs += x[k] * y[k];
    mass_lhs += std::abs(x[k] * y[k]);
  }
  double rhs = 0.0, mass_rhs = 0.0, prefix = 0.0;
  for (std::size_t k = 0; k + 1 < s; ++k) {
    prefix += y[k];
    double term = (x[k] - x[k + 1]) * prefix;
    rhs += term;
    mass_rhs += std::abs(term);
  }
  prefix += y[s - 1];
  rhs += x[s - 1] * prefix;
  mass_rhs += std::abs(x[s - 1] * prefix);
  return std::abs(lhs - rhs) / std::max({1.0, mass_lhs, mass_rhs});
}

namespace {
// max over n <= n* of v(n; Phi, f)/h(n) from one profile pass, without the
// Schramm gate: the functional itself is well-defined on any sampled
// function.
double modulus_ratio_sup(const SampledFunction& f, const SchrammSequence& phi,
                         const VariationModulus& h) {
  long long n_star = alternation_count(f);
  auto profile = modulus_profile(f, n_star, phi);
  double sup = 0.0;
  for (long long n = 1; n <= n_star; ++n) {
    auto idx = std::min<std::size_t>(static_cast<std::size_t>(n), profile.size() - 1);
    sup = std::max(sup, profile[idx] / h.value(n));
  }
  return sup;
}
}  // namespace

VariationBoundTrial variation_bound_trial(const SampledFunction& f, const SchrammSequence& phi,
                                          const VariationModulus& h, long long k, double q,
                                          const IntervalFamily& family) {
  if (family.size() != k) throw InvalidParams("variation bound trial: family size must equal k");

  VariationBoundTrial out;
  auto xs = increments(f, family);
  std::sort(xs.begin(), xs.end(), std::greater<double>());

  // One search pass serves both v(k) and the variation sup.
  long long n_star = alternation_count(f);
  auto profile = modulus_profile(f, std::max(n_star, k), phi);
  auto profile_at = [&](long long n) {
    return profile[std::min<std::size_t>(static_cast<std::size_t>(n), profile.size() - 1)];
  };
  double v_k = profile_at(k);

  // Hypothesis over permutations: exhaustive for k <= 8, sampled above.
  // All permuted sums draw from a k x k table of gauge values.
  const auto kk = xs.size();
  std::vector<double> table(kk * kk);
  for (std::size_t j = 0; j < kk; ++j)
    for (std::size_t i = 0; i < kk; ++i)
      table[j * kk + i] = phi.gauge_value(static_cast<long long>(j) + 1, xs[i]);
  std::vector<int> perm(kk);
  for (std::size_t i = 0; i < kk; ++i) perm[i] = static_cast<int>(i);
  const double bound = v_k * (1.0 + 1e-9) + 1e-12;
  auto permuted_ok = [&]() {
    double s = 0.0;
    for (std::size_t j = 0; j < kk; ++j) s += table[j * kk + static_cast<std::size_t>(perm[j])];
    return s <= bound;
  };
  if (k <= 8) {
    do {
      if (!permuted_ok()) {
        out.hypothesis_ok = false;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    Rng prng(0x7a11 ^ static_cast<std::uint64_t>(k));
    for (int t = 0; t < 5000 && out.hypothesis_ok; ++t) {
      for (std::size_t i = kk; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(prng.uniform_int(static_cast<long long>(i)))]);
      if (!permuted_ok()) out.hypothesis_ok = false;
    }
  }

  double v_src = 0.0;
  for (long long n = 1; n <= n_star; ++n) v_src = std::max(v_src, profile_at(n) / h.value(n));
  double lhs_q = 0.0;
  for (double v : xs) lhs_q += std::pow(v, q);
  double lhs = std::pow(lhs_q, 1.0 / q);
  double hk = h.value(k);
  double max_term = 0.0;
  for (long long m = 1; m <= k; ++m)
    max_term = std::max(max_term,
                        std::pow(static_cast<double>(m), 1.0 / q) * phi.capital_phi_inverse(m, hk));
  double rhs = kEnvelopeFactor * (1.0 + v_src) * max_term;
  out.slack = rel_slack(lhs, rhs);
  out.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

CheckReport run_prefix_ratio_suite(long long trials, std::uint64_t seed, double tol, int threads) {
  auto agg = run_trials(trials, threads, [&](long long i) {
    Rng rng = trial_rng(seed, i);
    int n = 1 + static_cast<int>(rng.uniform_int(12));
    double q = rng.uniform(1.0, 8.0);
    auto x = PositiveMonotoneSequence::nonincreasing(sample_sorted_desc(rng, n));
    auto y = PositiveMonotoneSequence::nonincreasing(sample_sorted_desc(rng, n));
    auto z = PositiveMonotoneSequence::nonincreasing(sample_sorted_desc(rng, n));
    TrialResult r;
    r.slack = prefix_ratio_slack(x, y, z, q);
    r.violation = r.slack < -tol;
    return r;
  });
  return make_report("ineq3", trials, seed, tol,
                     "n<=12, q in [1,8], entries log-uniform [1e-3,1e3] sorted descending", agg);
}

CheckReport run_prefix_ratio_sub_one_suite(long long trials, std::uint64_t seed, double tol,
                                           int threads) {
  auto agg = run_trials(trials, threads, [&](long long i) {
    Rng rng = trial_rng(seed, i);
    int n = 1 + static_cast<int>(rng.uniform_int(12));
    double q = rng.uniform(0.05, 0.95);
    auto x = PositiveMonotoneSequence::nonincreasing(sample_sorted_desc(rng, n));
    auto yv = sample_sorted_desc(rng, n);
    // z_j = w_j y_j with w nondecreasing and w_{j+1}/w_j <= y_j/y_{j+1}:
    // keeps z nonincreasing and the prefix ratio (sum z)/(sum y) nondecreasing.
    std::vector<double> zv(yv.size());
    double w = rng.log_uniform(0.1, 10.0);
    zv[0] = w * yv[0];
    for (std::size_t j = 1; j < yv.size(); ++j) {
      double cap = yv[j - 1] / yv[j];
      w *= std::exp(rng.uniform(0.0, std::log(cap)));
      zv[j] = w * yv[j];
      zv[j] = std::min(zv[j], zv[j - 1]);  // guard ulp noise at equality
    }
    auto y = PositiveMonotoneSequence::nonincreasing(std::move(yv));
    auto z = PositiveMonotoneSequence::nonincreasing(std::move(zv));
    TrialResult r;
    r.slack = prefix_ratio_sub_one_slack(x, y, z, q);
    r.violation = r.slack < -tol;
    return r;
  });
  return make_report("lemma2", trials, seed, tol,
                     "n<=12, q in (0.05,0.95), ratio-nondecreasing triples", agg);
}

CheckReport run_abel_suite(long long trials, std::uint64_t seed, double tol, int threads) {
  auto agg = run_trials(trials, threads, [&](long long i) {
    Rng rng = trial_rng(seed, i);
    int s = 1 + static_cast<int>(rng.uniform_int(64));
    std::vector<double> x(static_cast<std::size_t>(s)), y(static_cast<std::size_t>(s));
    for (auto& v : x) v = (rng.coin() ? 1.0 : -1.0) * rng.log_uniform(1e-3, 1e3);
    for (auto& v : y) v = (rng.coin() ? 1.0 : -1.0) * rng.log_uniform(1e-3, 1e3);
    TrialResult r;
    double disc = abel_identity_discrepancy(x, y);
    r.slack = tol - disc;  // violation when discrepancy exceeds tol
    r.violation = disc > tol;
    return r;
  });
  return make_report("abel", trials, seed, tol, "s<=64, signed log-uniform entries", agg);
}

CheckReport run_variation_bound_suite(long long trials, std::uint64_t seed, double tol,
                                      int threads) {
  auto agg = run_trials(trials, threads, [&](long long i) {
    Rng rng = trial_rng(seed, i);
    int k = 1 + static_cast<int>(rng.uniform_int(8));
    int points = std::max(2 * k, 9 + static_cast<int>(rng.uniform_int(5)));
    auto f = generate_random_piecewise_linear(points, rng.log_uniform(0.2, 3.0), rng.next_u64());
    auto phi = sample_schramm(rng);
    auto h = sample_modulus(rng);
    auto fam = sample_family(rng, f, k);
    double q = rng.uniform(1.0, 8.0);
    if (q == 1.0) q = 1.0 + 1e-9;
    auto trial = variation_bound_trial(f, phi, h, k, q, fam);
    TrialResult r;
    r.slack = trial.slack;
    r.ratio = trial.ratio;
    r.violation = trial.slack < -tol || !trial.hypothesis_ok;
    return r;
  });
  return make_report("lemma1", trials, seed, tol,
                     "k<=8 exhaustive permutations, random gauges/moduli, grids <= 13 points", agg);
}

CheckReport run_rearrangement_suite(long long trials, std::uint64_t seed, double tol, int threads) {
  auto agg = run_trials(trials, threads, [&](long long i) {
    Rng rng = trial_rng(seed, i);
    int n = 1 + static_cast<int>(rng.uniform_int(8));
    auto x = sample_sorted_desc(rng, n);
    auto y = sample_sorted_desc(rng, n);
    double aligned = 0.0, opposed = 0.0;
    for (int j = 0; j < n; ++j) {
      aligned += x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
      opposed += x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(n - 1 - j)];
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;
    TrialResult r;
    r.slack = std::numeric_limits<double>::infinity();
    do {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
      r.slack = std::min({r.slack, rel_slack(s, aligned), rel_slack(opposed, s)});
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.violation = r.slack < -tol;
    return r;
  });
  return make_report("rearrangement", trials, seed, tol,
                     "n<=8, all permutations per trial, log-uniform entries", agg);
}

// ---------------------------------------------------------------------------
// Membership witnesses
// ---------------------------------------------------------------------------

namespace {

void push_link(WitnessReport& rep, const std::string& name, double lhs, double rhs, double tol) {
  WitnessLink link{name, lhs, rhs, rel_slack(lhs, rhs)};
  if (link.slack < -tol) ++rep.violations;
  rep.links.push_back(std::move(link));
}

void push_equality_link(WitnessReport& rep, const std::string& name, double discrepancy,
                        double tol) {
  WitnessLink link{name, discrepancy, 0.0, -discrepancy};
  if (discrepancy > tol * 1e3) ++rep.violations;  // identities hold to ~1e-12
  rep.links.push_back(std::move(link));
}

// Chain of the series condition (Schramm-like source into a weighted
// p-variation target).
void series_chain(WitnessReport& rep, const SampledFunction& f, const SchrammSequence& phi,
                  const VariationModulus& h, const WeightSequence& lambda, double p, double tol) {
  auto target = lambda_p_variation(f, lambda, p);
  auto xs = increments(f, target.witness);
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  const long long s = static_cast<long long>(xs.size());
  if (s == 0) return;  // constant function: every chain quantity is zero

  double v_src = modulus_ratio_sup(f, phi, h);
  double c_factor = kEnvelopeFactor * (1.0 + v_src);
  double cp = std::pow(c_factor, p);

  // Hypothesis instance: the sorted gauge sum of the witness is below the
  // modulus at its size.
  double sorted_sum = 0.0;
  for (long long j = 0; j < s; ++j) sorted_sum += phi.gauge_value(j + 1, xs[static_cast<std::size_t>(j)]);
  push_link(rep, "sorted_sum_le_modulus", sorted_sum, phi_modulus(f, s, phi).value, tol);

  const long long chain_k = s + 4096;
  auto inner = inner_max_sequence(phi, h, p, chain_k + 1);

  // Power-sum bound on every prefix of the witness.
  double min_slack = std::numeric_limits<double>::infinity();
  double prefix_pow = 0.0;
  for (long long k = 1; k <= s; ++k) {
    prefix_pow += std::pow(xs[static_cast<std::size_t>(k - 1)], p);
    double lhs = std::pow(prefix_pow, 1.0 / p);
    double hk = h.value(k);
    double max_term = 0.0;
    for (long long m = 1; m <= k; ++m)
      max_term = std::max(max_term, std::pow(static_cast<double>(m), 1.0 / p) * phi.inverse(m, hk));
    min_slack = std::min(min_slack, rel_slack(lhs, c_factor * max_term));
  }
  WitnessLink link{"power_sum_prefix_bound", 0.0, 0.0, min_slack};
  if (min_slack < -tol) ++rep.violations;
  rep.links.push_back(link);

  // Summation by parts on x_k = 1/lambda_k, y_k = increments^p.
  std::vector<double> recips(static_cast<std::size_t>(s)), powers(static_cast<std::size_t>(s));
  for (long long k = 1; k <= s; ++k) {
    recips[static_cast<std::size_t>(k - 1)] = lambda.reciprocal(k);
    powers[static_cast<std::size_t>(k - 1)] = std::pow(xs[static_cast<std::size_t>(k - 1)], p);
  }
  push_equality_link(rep, "summation_by_parts", abel_identity_discrepancy(recips, powers), tol);

  double weighted = 0.0;
  for (long long k = 1; k <= s; ++k)
    weighted += powers[static_cast<std::size_t>(k - 1)] * recips[static_cast<std::size_t>(k - 1)];

  double partial = 0.0;
  for (long long k = 1; k < s; ++k) partial += lambda.forward_difference(k) * inner[k - 1];
  push_link(rep, "weighted_sum_le_partial", weighted,
            cp * (partial + inner[static_cast<std::size_t>(s - 1)] * lambda.reciprocal(s)), tol);

  double tail_series = 0.0;
  for (long long k = s; k <= chain_k; ++k) tail_series += lambda.forward_difference(k) * inner[k - 1];
  push_link(rep, "boundary_tail_bound", inner[static_cast<std::size_t>(s - 1)] * lambda.reciprocal(s),
            tail_series + inner[static_cast<std::size_t>(chain_k)] * lambda.reciprocal(chain_k + 1),
            tol);

  double series_total = partial + tail_series;
  push_link(rep, "total_le_series", weighted,
            cp * (series_total + inner[static_cast<std::size_t>(chain_k)] * lambda.reciprocal(chain_k + 1)),
            tol);
}

// Chain of the sup condition (weighted-modulus pair).
void pair_chain(WitnessReport& rep, const SampledFunction& f, const WeightedModulusForm& src,
                const WeightedModulusForm& tgt, double bound, double tol) {
  auto tgt_gauges = SchrammSequence::scaled(ConvexGauge::power(tgt.p), tgt.lambda);
  long long n_star = alternation_count(f);
  auto tgt_mod = phi_modulus(f, n_star, tgt_gauges);
  auto xs = increments(f, tgt_mod.witness);
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  const long long n = static_cast<long long>(xs.size());
  if (n == 0) return;

  const double p = src.p, q = tgt.p;
  auto src_gauges = SchrammSequence::scaled(ConvexGauge::power(p), src.lambda);
  double v_src = modulus_ratio_sup(f, src_gauges, src.h);

  double target_sum = 0.0, source_sum = 0.0;
  for (long long j = 1; j <= n; ++j) {
    target_sum += std::pow(xs[static_cast<std::size_t>(j - 1)], q) * tgt.lambda.reciprocal(j);
    source_sum += std::pow(xs[static_cast<std::size_t>(j - 1)], p) * src.lambda.reciprocal(j);
  }
  double max_ratio_pq = 0.0, max_ratio = 0.0;
  for (long long k = 1; k <= n; ++k) {
    double gk = tgt.lambda.partial_sum(k), lk = src.lambda.partial_sum(k);
    max_ratio_pq = std::max(max_ratio_pq, std::pow(gk, p / q) / lk);
    max_ratio = std::max(max_ratio, std::pow(gk, 1.0 / q) / std::pow(lk, 1.0 / p));
  }

  // Instance of the prefix-ratio inequality with exponent q/p.
  push_link(rep, "prefix_ratio_instance", std::pow(target_sum, p / q), source_sum * max_ratio_pq,
            tol);
  double v_at_n = phi_modulus(f, n, src_gauges).value;
  push_link(rep, "sum_le_modulus", source_sum, v_at_n, tol);
  push_link(rep, "modulus_le_variation", v_at_n, v_src * src.h.value(n), tol);
  push_link(rep, "ratio_max_le_sup", max_ratio,
            bound * std::pow(tgt.h.value(n), 1.0 / q) / std::pow(src.h.value(n), 1.0 / p), tol);
  double c_const = std::pow(v_src, 1.0 / p) * bound;
  push_link(rep, "target_bound", tgt_mod.value, std::pow(c_const, q) * tgt.h.value(n), tol);
}

// Chain of the two-sided length-constrained condition.
void wiener_chain(WitnessReport& rep, const SampledFunction& f, const WeightSequence& lambda,
                  const std::vector<double>& p_seq_in, const WeightSequence& gamma,
                  const std::vector<double>& q_seq_in, double tol) {
  // Both variations must be evaluated at the same constraint levels so that
  // the target witness's level is admissible on the source side; extend the
  // exponent sequences by their last entries up to the grid's saturation
  // level.
  double min_gap = 1.0;
  for (int i = 1; i < f.point_count(); ++i) min_gap = std::min(min_gap, f.grid[i] - f.grid[i - 1]);
  int saturate = 1;
  while (std::ldexp(1.0, -saturate) > min_gap) ++saturate;
  std::size_t levels = std::min<std::size_t>(static_cast<std::size_t>(saturate),
                                             std::max(p_seq_in.size(), q_seq_in.size()));
  auto extend = [&](const std::vector<double>& s) {
    std::vector<double> out(levels);
    for (std::size_t i = 0; i < levels; ++i) out[i] = s[std::min(i, s.size() - 1)];
    return out;
  };
  const std::vector<double> p_seq = extend(p_seq_in);
  const std::vector<double> q_seq = extend(q_seq_in);

  auto src_res = wiener_variation(f, lambda, p_seq);
  auto tgt_res = wiener_variation(f, gamma, q_seq);
  auto xs = increments(f, tgt_res.witness);
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  const long long s = static_cast<long long>(xs.size());
  if (s == 0) return;

  auto at = [](const std::vector<double>& v, long long n) {
    return v[std::min<std::size_t>(static_cast<std::size_t>(n) - 1, v.size() - 1)];
  };
  const long long level = tgt_res.arg_n;
  const double pn = at(p_seq, level), qn = at(q_seq, level);
  const double r = qn / pn;
  const double v_src = src_res.value;

  const long long chain_k = s + 4096;
  std::vector<double> g_of_k(static_cast<std::size_t>(chain_k) + 1);
  double run_max = 0.0;
  for (long long k = 1; k <= chain_k + 1; ++k) {
    run_max = std::max(run_max, static_cast<double>(k) * pow_fast(lambda.partial_sum(k), -r));
    g_of_k[static_cast<std::size_t>(k - 1)] = run_max;
  }

  // Prefix bound sum_{j<=k} x_j^{q_n} <= (sum_{j<=k} x_j^{p_n}/lambda_j)^r G(k):
  // the unit-weight instance of the prefix-ratio inequality (its sub-one
  // variant applies when r < 1 since k/Lambda(k) is always nondecreasing).
  double min_slack = std::numeric_limits<double>::infinity();
  double qsum = 0.0, psum = 0.0;
  double inner_le_src = std::numeric_limits<double>::infinity();
  for (long long k = 1; k <= s; ++k) {
    qsum += std::pow(xs[static_cast<std::size_t>(k - 1)], qn);
    psum += std::pow(xs[static_cast<std::size_t>(k - 1)], pn) * lambda.reciprocal(k);
    min_slack = std::min(min_slack,
                         rel_slack(qsum, std::pow(psum, r) * g_of_k[static_cast<std::size_t>(k - 1)]));
    inner_le_src = std::min(inner_le_src, rel_slack(std::pow(psum, r), std::pow(v_src, qn)));
  }
  WitnessLink l1{"power_prefix_bound", 0.0, 0.0, min_slack};
  if (min_slack < -tol) ++rep.violations;
  rep.links.push_back(l1);
  WitnessLink l2{"inner_le_source_variation", 0.0, 0.0, inner_le_src};
  if (inner_le_src < -tol) ++rep.violations;
  rep.links.push_back(l2);

  std::vector<double> recips(static_cast<std::size_t>(s)), powers(static_cast<std::size_t>(s));
  for (long long k = 1; k <= s; ++k) {
    recips[static_cast<std::size_t>(k - 1)] = gamma.reciprocal(k);
    powers[static_cast<std::size_t>(k - 1)] = std::pow(xs[static_cast<std::size_t>(k - 1)], qn);
  }
  push_equality_link(rep, "summation_by_parts", abel_identity_discrepancy(recips, powers), tol);

  double weighted = 0.0;
  for (long long k = 1; k <= s; ++k)
    weighted += powers[static_cast<std::size_t>(k - 1)] * recips[static_cast<std::size_t>(k - 1)];
  double vq = std::pow(v_src, qn);
  double partial = 0.0;
  for (long long k = 1; k < s; ++k) partial += gamma.forward_difference(k) * g_of_k[static_cast<std::size_t>(k - 1)];
  push_link(rep, "weighted_sum_le_partial", weighted,
            vq * (partial + g_of_k[static_cast<std::size_t>(s - 1)] * gamma.reciprocal(s)), tol);

  double tail_series = 0.0;
  for (long long k = s; k <= chain_k; ++k)
    tail_series += gamma.forward_difference(k) * g_of_k[static_cast<std::size_t>(k - 1)];
  push_link(rep, "boundary_tail_bound", g_of_k[static_cast<std::size_t>(s - 1)] * gamma.reciprocal(s),
            tail_series + g_of_k[static_cast<std::size_t>(chain_k)] * gamma.reciprocal(chain_k + 1),
            tol);
  push_link(rep, "total_le_series", weighted,
            vq * (partial + tail_series +
                  g_of_k[static_cast<std::size_t>(chain_k)] * gamma.reciprocal(chain_k + 1)),
            tol);
}

}  // namespace

WitnessReport membership_witness(const SampledFunction& f, const ClassSpec& source,
                                 const ClassSpec& target, const EmbeddingVerdict& verdict,
                                 double tol) {
  if (verdict.outcome != Outcome::holds_by_condition)
    throw NotApplicable("membership witness requires a holds_by_condition verdict");

  WitnessReport rep;
  rep.condition = verdict.certificate.condition;
  const std::string& tag = verdict.certificate.condition;

  if (tag == "schramm_to_shiba_series" || tag == "phibv_to_waterman_series" ||
      tag == "chanturiya_to_waterman_series") {
    double p = target.kind == ClassSpec::Kind::waterman ? 1.0 : target.p;
    series_chain(rep, f, source_gauge_view(source), source_modulus_view(source), *target.lambda,
                 p, tol);
    return rep;
  }
  if (tag == "weighted_modulus_pair_sup" || tag == "waterman_to_chanturiya_sup" ||
      tag == "shiba_pair_sup" || tag == "chanturiya_pair_sup") {
    auto nf_s = normalize_weighted_modulus(source);
    auto nf_t = normalize_weighted_modulus(target);
    if (!nf_s || !nf_t) throw NotApplicable("classes do not normalize to a weighted-modulus form");
    pair_chain(rep, f, *nf_s, *nf_t, verdict.certificate.value, tol);
    return rep;
  }
  if (tag == "wiener_pair_series" || tag == "shiba_pair_series") {
    auto seq = [](const ClassSpec& c) -> std::vector<double> {
      if (c.kind == ClassSpec::Kind::wiener) return c.p_seq;
      if (c.kind == ClassSpec::Kind::waterman) return {1.0};
      if (c.kind == ClassSpec::Kind::waterman_shiba) return {c.p};
      throw NotApplicable("class has no exponent sequence");
    };
    wiener_chain(rep, f, *source.lambda, seq(source), *target.lambda, seq(target), tol);
    return rep;
  }
  throw NotApplicable("no proof chain for condition " + tag);
}

// ---------------------------------------------------------------------------
// Witness suite: per condition family, certified-holds parameter pools and
// random step functions.
// ---------------------------------------------------------------------------

CheckReport run_witness_suite(long long trials_per_condition, std::uint64_t seed, double tol,
                              int threads) {
  struct Config {
    ClassSpec source;
    ClassSpec target;
  };

  std::vector<Config> series_cfgs{
      {ClassSpec::phi_bv(SchrammSequence::uniform(ConvexGauge::power(1.0))),
       ClassSpec::waterman(WeightSequence::power_log(1.0, 0.0))},
      {ClassSpec::phi_bv(SchrammSequence::scaled(ConvexGauge::power(1.0), WeightSequence::constant(2.0))),
       ClassSpec::waterman(WeightSequence::power_log(0.5, 0.0))},
      {ClassSpec::phi_bv(SchrammSequence::scaled(ConvexGauge::power(2.0), WeightSequence::constant(4.0))),
       ClassSpec::waterman(WeightSequence::power_log(1.0, 0.0))},
      {ClassSpec::phi_bv(SchrammSequence::scaled(ConvexGauge::exp_minus_one(),
                                                 WeightSequence::power_log(1.0, 0.0))),
       ClassSpec::waterman(WeightSequence::power_log(1.0, 1.0))},
      {ClassSpec::schramm(SchrammSequence::uniform(ConvexGauge::power(1.0)),
                          VariationModulus::power(0.5)),
       ClassSpec::waterman(WeightSequence::power_log(0.75, 0.0))},
      {ClassSpec::schramm(SchrammSequence::uniform(ConvexGauge::power(1.0)),
                          VariationModulus::constant_one()),
       ClassSpec::waterman_shiba(WeightSequence::power_log(0.5, 0.0), 2.0)},
      {ClassSpec::chanturiya(VariationModulus::power(0.5)),
       ClassSpec::waterman(WeightSequence::power_log(1.0, 0.0))},
  };
  std::vector<Config> pair_cfgs{
      {ClassSpec::waterman(WeightSequence::power_log(1.0, 0.0)),
       ClassSpec::chanturiya(VariationModulus::ratio(WeightSequence::power_log(1.0, 0.0)))},
      {ClassSpec::waterman(WeightSequence::constant(1.0)),
       ClassSpec::waterman_shiba(WeightSequence::power_log(1.0, 0.0), 2.0)},
      {ClassSpec::chanturiya(VariationModulus::power(0.5)),
       ClassSpec::chanturiya(VariationModulus::power(0.8))},
      {ClassSpec::waterman(WeightSequence::constant(1.0)),
       ClassSpec::schramm(SchrammSequence::scaled(ConvexGauge::power(2.0),
                                                  WeightSequence::power_log(0.5, 0.0)),
                          VariationModulus::power(0.5))},
  };
  std::vector<Config> wiener_cfgs{
      {ClassSpec::wiener(WeightSequence::constant(1.0), {1.0, 1.5, 2.0}),
       ClassSpec::wiener(WeightSequence::power_log(1.0, 0.0), {1.0, 1.5, 2.0})},
      {ClassSpec::wiener(WeightSequence::power_log(0.5, 0.0), {2.0, 2.5, 3.0}),
       ClassSpec::wiener(WeightSequence::power_log(1.0, 0.0), {2.0, 2.5, 3.0})},
      {ClassSpec::waterman_shiba(WeightSequence::constant(1.0), 2.0),
       ClassSpec::waterman(WeightSequence::power_log(1.0, 0.0))},
      // Mixed sequence lengths: exercises the common-level extension.
      {ClassSpec::waterman_shiba(WeightSequence::constant(1.0), 2.0),
       ClassSpec::wiener(WeightSequence::power_log(1.0, 0.0), {2.0, 2.5, 3.0})},
  };

  EvalOptions opts;
  opts.truncation = 20'000;
  opts.n_max = 6;

  struct Prepared {
    Config cfg;
    EmbeddingVerdict verdict;
  };
  std::vector<std::vector<Prepared>> families(3);
  auto prepare = [&](const std::vector<Config>& cfgs, std::size_t fam) {
    for (const auto& c : cfgs) {
      auto d = evaluate_embedding(c.source, c.target, opts);
      families[fam].push_back({c, d.verdict});
    }
  };
  prepare(series_cfgs, 0);
  prepare(pair_cfgs, 1);
  prepare(wiener_cfgs, 2);

  // trials_per_condition random step functions for each of the three
  // condition families.
  const long long trials = trials_per_condition * 3;
  auto agg = run_trials(trials, threads, [&](long long i) {
    const auto& fam = families[static_cast<std::size_t>(i % 3)];
    const auto& prep = fam[static_cast<std::size_t>((i / 3) % static_cast<long long>(fam.size()))];
    Rng rng = trial_rng(seed, i);
    // The length-constrained chain needs grids fine enough for its levels.
    int teeth = i % 3 == 2 ? 4 + static_cast<int>(rng.uniform_int(3))
                           : 2 + static_cast<int>(rng.uniform_int(4));
    auto f = sample_teeth(rng, teeth);
    TrialResult r;
    if (prep.verdict.outcome != Outcome::holds_by_condition) {
      r.violation = true;  // a config failing to certify is itself a defect
      r.slack = -1.0;
      return r;
    }
    auto rep = membership_witness(f, prep.cfg.source, prep.cfg.target, prep.verdict, tol);
    r.slack = std::numeric_limits<double>::infinity();
    for (const auto& link : rep.links) r.slack = std::min(r.slack, link.slack);
    r.violation = rep.violations > 0;
    return r;
  });
  return make_report("witnesses", trials, seed, tol,
                     "random step functions per certified-holds condition config", agg);
}

// ---------------------------------------------------------------------------
// Extremal-function search (experimental)
// ---------------------------------------------------------------------------

SearchReport conjecture_search(const WeightSequence& lambda, const VariationModulus& h,
                               int max_teeth, std::uint64_t seed) {
  SearchReport rep;
  GrowthRate ratio_growth =
      GrowthRate{1.0, 0.0, 0.0} - lambda.partial_sum_growth() - h.growth();
  if (!grows_unbounded(ratio_growth)) {
    rep.applicable = false;
    rep.reason = "sup n/(Lambda(n) h(n)) is bounded (growth " + varembed::to_string(ratio_growth) +
                 "); the search targets the failing-condition regime";
    return rep;
  }
  rep.applicable = true;
  rep.reason = "sup n/(Lambda(n) h(n)) certified unbounded (growth " +
               varembed::to_string(ratio_growth) + ")";

  for (int teeth = 4; teeth <= std::max(4, max_teeth); teeth *= 2) {
    // Teeth with heights 1/lambda_j: the profile that loads the weighted
    // variation evenly along the maximizing index range.
    std::vector<double> sizes;
    for (int j = 1; j <= teeth; ++j) {
      double d = lambda.reciprocal(j);
      sizes.push_back(d);
      sizes.push_back(-d);
    }
    int points = 2 * teeth + 1;
    std::vector<int> sites(static_cast<std::size_t>(2 * teeth));
    for (int i = 0; i < 2 * teeth; ++i) sites[static_cast<std::size_t>(i)] = i;
    auto f = generate_step(points, sizes, sites);

    SearchEntry entry;
    entry.teeth = teeth;
    entry.waterman_variation =
        lambda_p_variation(f, lambda, 1.0, SearchMode::heuristic, {}, seed).value;
    // One dynamic-programming pass yields the whole v(n)/h(n) trace.
    auto var = schramm_variation(f, SchrammSequence::uniform(ConvexGauge::power(1.0)), h);
    entry.max_ratio = var.value;
    entry.arg_n = var.arg_n;
    rep.entries.push_back(entry);
  }
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    rep.growth_trend.push_back(rep.entries[i].max_ratio /
                               std::max(1e-300, rep.entries[i - 1].max_ratio));
  return rep;
}

}  // namespace varembed::verify
