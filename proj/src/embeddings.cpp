#include "varembed/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varembed {
namespace {

constexpr double kMonotonicitySlack = 1e-12;

double pow_fast(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  return std::pow(x, e);
}

// Kahan-compensated series accumulator with power-of-two checkpoints.
struct SeriesAccum {
  double sum = 0.0, comp = 0.0, last = 0.0;
  long long next_cp = 1;
  std::vector<TracePoint> trace;

  void add(long long k, double term) {
    last = term;
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (k == next_cp) {
      trace.push_back({k, sum, term, sum});
      next_cp <<= 1;
    }
  }
  void finish(long long k_final) {
    if (trace.empty() || trace.back().n != k_final) trace.push_back({k_final, sum, last, sum});
  }
};

struct TailInfo {
  enum class Kind { zero, recognized, unrecognized };
  Kind kind = Kind::unrecognized;
  GrowthRate g;

  static TailInfo zero() { return {Kind::zero, {}}; }
  static TailInfo recognized(GrowthRate g) { return {Kind::recognized, g}; }
  static TailInfo unrecognized() { return {Kind::unrecognized, {}}; }

  bool convergent() const {
    return kind == Kind::zero || (kind == Kind::recognized && series_converges(g));
  }
  bool divergent() const { return kind == Kind::recognized && !series_converges(g); }

  std::string label() const {
    switch (kind) {
      case Kind::zero:
        return "eventually_zero";
      case Kind::recognized:
        return varembed::to_string(g);
      case Kind::unrecognized:
        return "unrecognized";
    }
    return "unrecognized";
  }
};

// Crude integral-comparison estimate of the remainder past K for a certified
// convergent summand; informational only.
std::optional<double> remainder_estimate(const TailInfo& tail, double last_term, long long K) {
  if (tail.kind == TailInfo::Kind::zero) return 0.0;
  if (tail.kind != TailInfo::Kind::recognized || !series_converges(tail.g)) return std::nullopt;
  double k = static_cast<double>(K);
  const auto& g = tail.g;
  if (g.n_exp < -1.0) return last_term * k / (-g.n_exp - 1.0);
  if (g.log_exp < -1.0) return last_term * k * std::log(k) / (-g.log_exp - 1.0);
  return last_term * k * std::log(k) * std::log(std::log(k)) / (-g.loglog_exp - 1.0);
}

// Growth of max_{m<=k} m * (Phi_m^{-1}(h(k)))^p for recognized shapes.
std::optional<GrowthRate> inner_max_growth(const SchrammSequence& phi, const VariationModulus& h,
                                           double p) {
  if (!phi.factorizes()) return std::nullopt;
  GrowthRate wg = phi.weight_partial_sum_growth();
  if (phi.base_gauge().is_power()) {
    // Exact factorization: h(k)^{p/p0} * max_m m W(m)^{-p/p0}.
    double r = p / phi.base_gauge().power_exponent();
    return h.growth().scaled(r) + running_max_growth(GrowthRate{1.0, 0.0, 0.0} - wg.scaled(r));
  }
  if (h.bounded()) {
    // phi^{-1}(u) = Theta(u^{s0}) as u -> 0.
    double s0 = phi.base_gauge().inverse_growth_exponent();
    return running_max_growth(GrowthRate{1.0, 0.0, 0.0} - wg.scaled(p * s0));
  }
  return std::nullopt;
}

Outcome decide(const TailInfo& tail, const std::vector<HypothesisCheck>& checks) {
  if (tail.divergent()) return Outcome::condition_fails;
  for (const auto& c : checks)
    if (!c.pass) return Outcome::inconclusive;
  if (tail.convergent()) return Outcome::holds_by_condition;
  return Outcome::inconclusive;
}

HypothesisCheck schramm_hypothesis(const SchrammSequence& phi, const VariationModulus& h) {
  switch (phi.schramm_certificate(h)) {
    case SchrammSequence::Certificate::certified:
      return {"schramm_sequence_for_h", true, "certified analytically"};
    case SchrammSequence::Certificate::refuted:
      return {"schramm_sequence_for_h", false, "refuted analytically"};
    case SchrammSequence::Certificate::unknown:
      return {"schramm_sequence_for_h", false, "not certifiable for explicit gauge lists"};
  }
  return {"schramm_sequence_for_h", false, ""};
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::holds_by_condition:
      return "holds_by_condition";
    case Outcome::condition_fails:
      return "condition_fails";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> inner_max_sequence(const SchrammSequence& phi, const VariationModulus& h,
                                       double p, long long K) {
  std::vector<double> out(static_cast<std::size_t>(K));
  if (phi.factorizes() && phi.base_gauge().is_power()) {
    double r = p / phi.base_gauge().power_exponent();
    double run_max = 0.0;
    for (long long k = 1; k <= K; ++k) {
      run_max =
          std::max(run_max, static_cast<double>(k) * pow_fast(phi.weight_partial_sum(k), -r));
      out[k - 1] = pow_fast(h.value(k), r) * run_max;
    }
    return out;
  }
  if (phi.factorizes() && h.bounded()) {
    long long prefix = h.family() == VariationModulus::Family::explicit_prefix
                           ? static_cast<long long>(h.prefix_values().size())
                           : 1;
    auto cand = [&](long long m, double y) {
      return static_cast<double>(m) *
             pow_fast(phi.base_gauge().inverse(y / phi.weight_partial_sum(m)), p);
    };
    double run_max = 0.0;
    for (long long k = 1; k <= K; ++k) {
      double y = h.value(k);
      if (k <= prefix) {  // h may still vary: rescan
        run_max = 0.0;
        for (long long m = 1; m <= k; ++m) run_max = std::max(run_max, cand(m, y));
      } else {
        run_max = std::max(run_max, cand(k, y));
      }
      out[k - 1] = run_max;
    }
    return out;
  }
  // General rule: track the maximizer locally, full rescan every 2^10 steps.
  auto cand = [&](long long m, double y) {
    return static_cast<double>(m) * pow_fast(phi.inverse(m, y), p);
  };
  long long m_star = 1;
  for (long long k = 1; k <= K; ++k) {
    double y = h.value(k);
    double cm = cand(m_star, y);
    while (m_star + 1 <= k) {
      double cn = cand(m_star + 1, y);
      if (cn >= cm) {
        ++m_star;
        cm = cn;
      } else {
        break;
      }
    }
    while (m_star > 1) {
      double cp = cand(m_star - 1, y);
      if (cp > cm) {
        --m_star;
        cm = cp;
      } else {
        break;
      }
    }
    if ((k & 1023) == 0) {
      for (long long m = 1; m <= k; ++m) {
        double c = cand(m, y);
        if (c > cm) {
          cm = c;
          m_star = m;
        }
      }
    }
    out[k - 1] = cm;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Series condition of the Schramm -> weighted-p embedding.
// ---------------------------------------------------------------------------

EmbeddingVerdict check_embedding_schramm_to_shiba(const SchrammSequence& phi,
                                                  const VariationModulus& h,
                                                  const WeightSequence& lambda, double p,
                                                  const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "schramm_to_shiba_series";
  cert.hypothesis_checks.push_back({"exponent_at_least_one", p >= 1.0, ""});
  cert.hypothesis_checks.push_back(schramm_hypothesis(phi, h));

  TailInfo tail;
  if (lambda.difference_eventually_zero()) {
    tail = TailInfo::zero();
  } else if (auto mg = inner_max_growth(phi, h, p)) {
    tail = TailInfo::recognized(lambda.difference_growth() + *mg);
  } else {
    tail = TailInfo::unrecognized();
  }

  long long K = opts.truncation;
  if (tail.kind == TailInfo::Kind::unrecognized) {
    long long clamp = phi.factorizes() ? 100'000 : 10'000;
    if (K > clamp) {
      K = clamp;
      cert.note = "truncation clamped to " + std::to_string(clamp) + " (unrecognized tail)";
    }
  }

  auto inner_max = inner_max_sequence(phi, h, p, K);
  SeriesAccum acc;
  for (long long k = 1; k <= K; ++k) acc.add(k, lambda.forward_difference(k) * inner_max[k - 1]);
  acc.finish(K);

  cert.value = acc.sum;
  cert.truncation = K;
  cert.last_term = acc.last;
  cert.tail_class = tail.label();
  cert.tail_estimate = remainder_estimate(tail, acc.last, K);
  cert.trace = std::move(acc.trace);
  out.outcome = decide(tail, cert.hypothesis_checks);
  return out;
}

// ---------------------------------------------------------------------------
// Specialization h == 1, p = 1: sum_n D(1/lambda_n) * n * Phi_n^{-1}(1).
// ---------------------------------------------------------------------------

EmbeddingVerdict check_embedding_phibv_to_waterman(const SchrammSequence& phi,
                                                   const WeightSequence& lambda,
                                                   const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "phibv_to_waterman_series";
  auto ones = VariationModulus::constant_one();
  cert.hypothesis_checks.push_back(schramm_hypothesis(phi, ones));

  TailInfo tail;
  if (lambda.difference_eventually_zero()) {
    tail = TailInfo::zero();
  } else if (phi.factorizes()) {
    double s0 = phi.base_gauge().inverse_growth_exponent();
    tail = TailInfo::recognized(lambda.difference_growth() + GrowthRate{1.0, 0.0, 0.0} -
                                phi.weight_partial_sum_growth().scaled(s0));
  } else {
    tail = TailInfo::unrecognized();
  }

  long long K = opts.truncation;
  if (!phi.factorizes() && K > 10'000) {
    K = 10'000;  // bisection per term
    cert.note = "truncation clamped to 10000 (explicit gauge list)";
  }

  SeriesAccum acc;
  for (long long n = 1; n <= K; ++n)
    acc.add(n, lambda.forward_difference(n) * static_cast<double>(n) * phi.inverse(n, 1.0));
  acc.finish(K);

  cert.value = acc.sum;
  cert.truncation = K;
  cert.last_term = acc.last;
  cert.tail_class = tail.label();
  cert.tail_estimate = remainder_estimate(tail, acc.last, K);
  cert.trace = std::move(acc.trace);
  out.outcome = decide(tail, cert.hypothesis_checks);
  return out;
}

// ---------------------------------------------------------------------------
// Specialization to identity gauges: sum_n D(1/lambda_n) * h(n).
// ---------------------------------------------------------------------------

EmbeddingVerdict check_embedding_chanturiya_to_waterman(const VariationModulus& h,
                                                        const WeightSequence& lambda,
                                                        const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "chanturiya_to_waterman_series";
  // Identity gauges are Schramm for h iff n/h(n) -> infinity.
  bool schramm_ok = grows_unbounded(GrowthRate{1.0, 0.0, 0.0} - h.growth());
  cert.hypothesis_checks.push_back({"schramm_sequence_for_h", schramm_ok,
                                    schramm_ok ? "n/h(n) unbounded" : "n/h(n) bounded"});

  TailInfo tail = lambda.difference_eventually_zero()
                      ? TailInfo::zero()
                      : TailInfo::recognized(lambda.difference_growth() + h.growth());

  long long K = opts.truncation;
  SeriesAccum acc;
  for (long long n = 1; n <= K; ++n) acc.add(n, lambda.forward_difference(n) * h.value(n));
  acc.finish(K);

  cert.value = acc.sum;
  cert.truncation = K;
  cert.last_term = acc.last;
  cert.tail_class = tail.label();
  cert.tail_estimate = remainder_estimate(tail, acc.last, K);
  cert.trace = std::move(acc.trace);
  out.outcome = decide(tail, cert.hypothesis_checks);
  return out;
}

// ---------------------------------------------------------------------------
// Sup condition for weighted-modulus pairs.
// ---------------------------------------------------------------------------

namespace {

enum class Confirm { yes, no, unknown };

// Eventual monotonicity of a ratio sequence from its growth: products of
// powers of n, partial sums and moduli are eventually monotone, so an
// unbounded ratio is eventually increasing and a vanishing one eventually
// decreasing.
Confirm confirm_from_growth(const GrowthRate& g) {
  if (grows_unbounded(g)) return Confirm::yes;
  if (tends_to_zero(g)) return Confirm::no;
  return Confirm::unknown;
}

struct RatioCheck {
  bool prefix_ok = true;
  Confirm confirmed = Confirm::unknown;
  bool pass() const { return prefix_ok && confirmed == Confirm::yes; }
};

}  // namespace

EmbeddingVerdict check_embedding_weighted_modulus_pair(const WeightSequence& lambda,
                                                       const VariationModulus& h1, double p,
                                                       const WeightSequence& gamma,
                                                       const VariationModulus& h2, double q,
                                                       const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "weighted_modulus_pair_sup";

  bool exponents_ok = 1.0 <= p && p <= q && std::isfinite(q);
  cert.hypothesis_checks.push_back({"exponents_ordered", exponents_ok, "requires 1 <= p <= q"});

  const long long K = opts.truncation;
  const double ip = 1.0 / p, iq = 1.0 / q;

  RatioCheck r1, r2;
  // Structural confirmations (exact, independent of the prefix scan).
  if (lambda == gamma && p == q) r1.confirmed = Confirm::yes;
  if (gamma.family() == WeightSequence::Family::constant && p == q)
    r1.confirmed = Confirm::yes;  // (c n / Lambda(n))^{1/p}, and n/Lambda(n) is nondecreasing
  if (r1.confirmed == Confirm::unknown)
    r1.confirmed = confirm_from_growth(gamma.partial_sum_growth().scaled(iq) -
                                       lambda.partial_sum_growth().scaled(ip));
  if (h1.family() == VariationModulus::Family::constant_one) r2.confirmed = Confirm::yes;
  if (h1 == h2 && p == q) r2.confirmed = Confirm::yes;
  if (r2.confirmed == Confirm::unknown)
    r2.confirmed = confirm_from_growth(h2.growth().scaled(iq) - h1.growth().scaled(ip));

  double sup = 0.0;
  long long arg_sup = 1;
  double prev_r1 = -std::numeric_limits<double>::infinity();
  double prev_r2 = -std::numeric_limits<double>::infinity();
  double e_last = 0.0;
  long long next_cp = 1;
  for (long long n = 1; n <= K; ++n) {
    double ln = lambda.partial_sum(n);
    double gn = gamma.partial_sum(n);
    double h1n = h1.value(n);
    double h2n = h2.value(n);

    double ratio1 = pow_fast(gn, iq) / pow_fast(ln, ip);
    double ratio2 = pow_fast(h2n, iq) / pow_fast(h1n, ip);
    if (ratio1 < prev_r1 * (1.0 - kMonotonicitySlack)) r1.prefix_ok = false;
    if (ratio2 < prev_r2 * (1.0 - kMonotonicitySlack)) r2.prefix_ok = false;
    prev_r1 = ratio1;
    prev_r2 = ratio2;

    e_last = pow_fast(gn / h2n, iq) * pow_fast(h1n / ln, ip);
    if (e_last > sup) {
      sup = e_last;
      arg_sup = n;
    }
    if (n == next_cp) {
      cert.trace.push_back({n, sup, e_last, sup});
      next_cp <<= 1;
    }
  }
  if (cert.trace.empty() || cert.trace.back().n != K) cert.trace.push_back({K, sup, e_last, sup});

  std::string which = r1.pass() ? "weight ratio nondecreasing"
                      : r2.pass() ? "modulus ratio nondecreasing"
                                  : "neither ratio confirmed nondecreasing";
  cert.hypothesis_checks.push_back({"one_ratio_nondecreasing", r1.pass() || r2.pass(), which});

  GrowthRate eg = (gamma.partial_sum_growth() - h2.growth()).scaled(iq) +
                  (h1.growth() - lambda.partial_sum_growth()).scaled(ip);
  cert.value = sup;
  cert.truncation = K;
  cert.last_term = e_last;
  cert.tail_class = to_string(eg);
  cert.note = "sup attained at n = " + std::to_string(arg_sup) + " within the prefix";

  if (grows_unbounded(eg)) {
    out.outcome = Outcome::condition_fails;
  } else {
    bool hyp_ok = true;
    for (const auto& c : cert.hypothesis_checks) hyp_ok = hyp_ok && c.pass;
    out.outcome = hyp_ok ? Outcome::holds_by_condition : Outcome::inconclusive;
  }
  return out;
}

namespace {

// Shared skeleton of the sup-type corollaries: evaluate e(n) over the prefix,
// certify boundedness from the growth rate, record the given hypotheses.
template <typename ExprFn>
EmbeddingVerdict sup_condition(const std::string& tag, ExprFn&& expr, const GrowthRate& eg,
                               std::vector<HypothesisCheck> checks, const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = tag;
  cert.hypothesis_checks = std::move(checks);

  const long long K = opts.truncation;
  double sup = 0.0, e_last = 0.0;
  long long next_cp = 1;
  for (long long n = 1; n <= K; ++n) {
    e_last = expr(n);
    if (e_last > sup) sup = e_last;
    if (n == next_cp) {
      cert.trace.push_back({n, sup, e_last, sup});
      next_cp <<= 1;
    }
  }
  if (cert.trace.empty() || cert.trace.back().n != K) cert.trace.push_back({K, sup, e_last, sup});

  cert.value = sup;
  cert.truncation = K;
  cert.last_term = e_last;
  cert.tail_class = to_string(eg);

  if (grows_unbounded(eg)) {
    out.outcome = Outcome::condition_fails;
  } else {
    bool hyp_ok = true;
    for (const auto& c : cert.hypothesis_checks) hyp_ok = hyp_ok && c.pass;
    out.outcome = hyp_ok ? Outcome::holds_by_condition : Outcome::inconclusive;
  }
  return out;
}

}  // namespace

EmbeddingVerdict check_embedding_waterman_to_chanturiya(const WeightSequence& lambda,
                                                        const VariationModulus& h,
                                                        const EvalOptions& opts) {
  GrowthRate eg = GrowthRate{1.0, 0.0, 0.0} - lambda.partial_sum_growth() - h.growth();
  // The weight ratio {n/Lambda(n)} is nondecreasing for every admitted
  // weight sequence, so the pair-theorem hypothesis holds automatically.
  std::vector<HypothesisCheck> checks{
      {"one_ratio_nondecreasing", true, "n/Lambda(n) nondecreasing for Waterman weights"}};
  return sup_condition(
      "waterman_to_chanturiya_sup",
      [&](long long n) {
        return static_cast<double>(n) / (lambda.partial_sum(n) * h.value(n));
      },
      eg, std::move(checks), opts);
}

EmbeddingVerdict check_embedding_shiba_pair(const WeightSequence& lambda, double p,
                                            const WeightSequence& gamma, double q,
                                            const EvalOptions& opts) {
  bool exponents_ok = 1.0 <= p && p <= q && std::isfinite(q);
  std::vector<HypothesisCheck> checks{
      {"exponents_ordered", exponents_ok, "requires 1 <= p <= q"},
      {"one_ratio_nondecreasing", true, "trivial moduli: h2/h1 == 1"}};
  const double ip = 1.0 / p, iq = 1.0 / q;
  GrowthRate eg = gamma.partial_sum_growth().scaled(iq) - lambda.partial_sum_growth().scaled(ip);
  return sup_condition(
      "shiba_pair_sup",
      [&](long long n) {
        return pow_fast(gamma.partial_sum(n), iq) / pow_fast(lambda.partial_sum(n), ip);
      },
      eg, std::move(checks), opts);
}

EmbeddingVerdict check_embedding_chanturiya_pair(const VariationModulus& h1,
                                                 const VariationModulus& h2,
                                                 const EvalOptions& opts) {
  std::vector<HypothesisCheck> checks{
      {"one_ratio_nondecreasing", true, "equal unit weights: Gamma/Lambda == 1"}};
  GrowthRate eg = h1.growth() - h2.growth();
  return sup_condition(
      "chanturiya_pair_sup", [&](long long n) { return h1.value(n) / h2.value(n); }, eg,
      std::move(checks), opts);
}

// ---------------------------------------------------------------------------
// Two-sided length-constrained condition and its constant-exponent corollary.
// ---------------------------------------------------------------------------

namespace {

// Inner series sum_k D(1/gamma_k) * max_{m<=k} m * Lambda(m)^{-r}.
SeriesAccum exponent_ratio_series(const WeightSequence& lambda, const WeightSequence& gamma,
                                  double r, long long K) {
  SeriesAccum acc;
  double run_max = 0.0;
  for (long long k = 1; k <= K; ++k) {
    run_max = std::max(run_max, static_cast<double>(k) * pow_fast(lambda.partial_sum(k), -r));
    acc.add(k, gamma.forward_difference(k) * run_max);
  }
  acc.finish(K);
  return acc;
}

TailInfo exponent_ratio_tail(const WeightSequence& lambda, const WeightSequence& gamma, double r) {
  if (gamma.difference_eventually_zero()) return TailInfo::zero();
  return TailInfo::recognized(gamma.difference_growth() +
                              running_max_growth(GrowthRate{1.0, 0.0, 0.0} -
                                                 lambda.partial_sum_growth().scaled(r)));
}

}  // namespace

EmbeddingVerdict check_embedding_wiener_pair(const WeightSequence& lambda,
                                             const std::vector<double>& p_seq,
                                             const WeightSequence& gamma,
                                             const std::vector<double>& q_seq,
                                             const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "wiener_pair_series";
  if (p_seq.empty() || q_seq.empty())
    throw InvalidParams("length-constrained condition: empty exponent sequence");

  auto valid_seq = [](const std::vector<double>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(s[i] >= 1.0) || !std::isfinite(s[i])) return false;
      if (i > 0 && s[i] < s[i - 1]) return false;
    }
    return true;
  };
  bool seq_ok = valid_seq(p_seq) && valid_seq(q_seq);
  cert.hypothesis_checks.push_back(
      {"exponent_sequences_nondecreasing", seq_ok, "entries >= 1, nondecreasing"});
  if (!seq_ok) {
    out.outcome = Outcome::inconclusive;
    cert.tail_class = "unrecognized";
    return out;
  }

  auto at = [](const std::vector<double>& s, long long n) {
    return s[std::min<std::size_t>(static_cast<std::size_t>(n) - 1, s.size() - 1)];
  };

  const long long n_eval = std::max<long long>(1, opts.n_max);
  const long long K = opts.truncation;
  // Hoist the memoized sequences out of the per-level loops.
  std::vector<double> lam_psum(static_cast<std::size_t>(K)), gam_diff(static_cast<std::size_t>(K));
  for (long long k = 1; k <= K; ++k) {
    lam_psum[k - 1] = lambda.partial_sum(k);
    gam_diff[k - 1] = gamma.forward_difference(k);
  }
  double sup = 0.0, r_min = std::numeric_limits<double>::infinity();
  double last_term_at_sup = 0.0;
  for (long long n = 1; n <= n_eval; ++n) {
    double r = at(q_seq, n) / at(p_seq, n);
    r_min = std::min(r_min, r);
    SeriesAccum acc;
    double run_max = 0.0;
    for (long long k = 1; k <= K; ++k) {
      run_max = std::max(run_max, static_cast<double>(k) * pow_fast(lam_psum[k - 1], -r));
      acc.add(k, gam_diff[k - 1] * run_max);
    }
    acc.finish(K);
    cert.trace.push_back({n, acc.sum, r, std::max(sup, acc.sum)});
    if (acc.sum > sup || n == 1) {
      sup = std::max(sup, acc.sum);
      last_term_at_sup = acc.last;
    }
  }

  // The summand growth is lex-nonincreasing in r, so r_min is binding for
  // both convergence and divergence.
  TailInfo tail = exponent_ratio_tail(lambda, gamma, r_min);
  cert.value = sup;
  cert.truncation = K;
  cert.last_term = last_term_at_sup;
  cert.tail_class = tail.label();
  cert.tail_estimate = remainder_estimate(tail, last_term_at_sup, K);
  cert.note = "tail certified at exponent ratio r_min = " + std::to_string(r_min) +
              "; outer levels evaluated: " + std::to_string(n_eval);
  out.outcome = decide(tail, cert.hypothesis_checks);
  return out;
}

EmbeddingVerdict check_embedding_shiba_pair_series(const WeightSequence& lambda, double p,
                                                   const WeightSequence& gamma, double q,
                                                   const EvalOptions& opts) {
  EmbeddingVerdict out;
  auto& cert = out.certificate;
  cert.condition = "shiba_pair_series";
  bool exp_ok = p >= 1.0 && q >= 1.0 && std::isfinite(p) && std::isfinite(q);
  cert.hypothesis_checks.push_back({"exponents_at_least_one", exp_ok, ""});

  double r = q / p;
  auto acc = exponent_ratio_series(lambda, gamma, r, opts.truncation);
  TailInfo tail = exponent_ratio_tail(lambda, gamma, r);

  cert.value = acc.sum;
  cert.truncation = opts.truncation;
  cert.last_term = acc.last;
  cert.tail_class = tail.label();
  cert.tail_estimate = remainder_estimate(tail, acc.last, opts.truncation);
  cert.trace = std::move(acc.trace);
  out.outcome = decide(tail, cert.hypothesis_checks);
  return out;
}

// ---------------------------------------------------------------------------
// ClassSpec and the dispatcher.
// ---------------------------------------------------------------------------

ClassSpec ClassSpec::schramm(SchrammSequence phi, VariationModulus h) {
  ClassSpec s;
  s.kind = Kind::schramm;
  s.phi = std::move(phi);
  s.h = std::move(h);
  return s;
}

ClassSpec ClassSpec::waterman_shiba(WeightSequence lambda, double p) {
  if (!(p >= 1.0)) throw InvalidParams("class: exponent must be >= 1");
  ClassSpec s;
  s.kind = Kind::waterman_shiba;
  s.lambda = std::move(lambda);
  s.p = p;
  return s;
}

ClassSpec ClassSpec::chanturiya(VariationModulus h) {
  ClassSpec s;
  s.kind = Kind::chanturiya;
  s.h = std::move(h);
  return s;
}

ClassSpec ClassSpec::waterman(WeightSequence lambda) {
  ClassSpec s;
  s.kind = Kind::waterman;
  s.lambda = std::move(lambda);
  return s;
}

ClassSpec ClassSpec::wiener(WeightSequence lambda, std::vector<double> p_seq) {
  if (p_seq.empty()) throw InvalidParams("class: empty exponent sequence");
  for (std::size_t i = 0; i < p_seq.size(); ++i) {
    if (!(p_seq[i] >= 1.0)) throw InvalidParams("class: exponents must be >= 1");
    if (i > 0 && p_seq[i] < p_seq[i - 1])
      throw InvalidParams("class: exponent sequence must be nondecreasing");
  }
  ClassSpec s;
  s.kind = Kind::wiener;
  s.lambda = std::move(lambda);
  s.p_seq = std::move(p_seq);
  return s;
}

ClassSpec ClassSpec::phi_bv(SchrammSequence phi) {
  ClassSpec s;
  s.kind = Kind::phi_bv;
  s.phi = std::move(phi);
  return s;
}

std::string to_string(ClassSpec::Kind k) {
  switch (k) {
    case ClassSpec::Kind::schramm:
      return "schramm";
    case ClassSpec::Kind::waterman_shiba:
      return "waterman_shiba";
    case ClassSpec::Kind::chanturiya:
      return "chanturiya";
    case ClassSpec::Kind::waterman:
      return "waterman";
    case ClassSpec::Kind::wiener:
      return "wiener";
    case ClassSpec::Kind::phi_bv:
      return "phi_bv";
  }
  return "waterman";
}

std::optional<WeightedModulusForm> normalize_weighted_modulus(const ClassSpec& spec) {
  switch (spec.kind) {
    case ClassSpec::Kind::waterman:
      return WeightedModulusForm{*spec.lambda, VariationModulus::constant_one(), 1.0};
    case ClassSpec::Kind::waterman_shiba:
      return WeightedModulusForm{*spec.lambda, VariationModulus::constant_one(), spec.p};
    case ClassSpec::Kind::chanturiya:
      return WeightedModulusForm{WeightSequence::constant(1.0), *spec.h, 1.0};
    case ClassSpec::Kind::schramm:
    case ClassSpec::Kind::phi_bv: {
      const auto& phi = *spec.phi;
      if (!phi.factorizes() || !phi.base_gauge().is_power()) return std::nullopt;
      WeightSequence w = phi.rule() == SchrammSequence::Rule::scaled
                             ? phi.scale_weights()
                             : WeightSequence::constant(1.0);
      VariationModulus h = spec.kind == ClassSpec::Kind::schramm ? *spec.h
                                                                 : VariationModulus::constant_one();
      return WeightedModulusForm{std::move(w), std::move(h), phi.base_gauge().power_exponent()};
    }
    case ClassSpec::Kind::wiener:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

bool shiba_like(ClassSpec::Kind k) {
  return k == ClassSpec::Kind::waterman || k == ClassSpec::Kind::waterman_shiba;
}

double shiba_exponent(const ClassSpec& s) {
  return s.kind == ClassSpec::Kind::waterman ? 1.0 : s.p;
}

}  // namespace

SchrammSequence source_gauge_view(const ClassSpec& s) {
  switch (s.kind) {
    case ClassSpec::Kind::schramm:
    case ClassSpec::Kind::phi_bv:
      return *s.phi;
    case ClassSpec::Kind::chanturiya:
      return SchrammSequence::uniform(ConvexGauge::power(1.0));
    default:
      throw NotApplicable("no gauge-sequence view of class " + to_string(s.kind));
  }
}

VariationModulus source_modulus_view(const ClassSpec& s) {
  switch (s.kind) {
    case ClassSpec::Kind::schramm:
    case ClassSpec::Kind::chanturiya:
      return *s.h;
    case ClassSpec::Kind::phi_bv:
      return VariationModulus::constant_one();
    default:
      throw NotApplicable("no modulus view of class " + to_string(s.kind));
  }
}

DispatchResult evaluate_embedding(const ClassSpec& src, const ClassSpec& tgt,
                                  const EvalOptions& opts, const std::string& forced) {
  using Kind = ClassSpec::Kind;

  auto run = [&](const std::string& tag) -> DispatchResult {
    if (tag == "schramm_to_shiba_series") {
      if (!shiba_like(tgt.kind)) throw NotApplicable("target is not a weighted p-variation class");
      return {tag, check_embedding_schramm_to_shiba(source_gauge_view(src), source_modulus_view(src),
                                                    *tgt.lambda, shiba_exponent(tgt), opts)};
    }
    if (tag == "phibv_to_waterman_series") {
      if (!shiba_like(tgt.kind)) throw NotApplicable("target is not a weighted p-variation class");
      return {tag, check_embedding_phibv_to_waterman(source_gauge_view(src), *tgt.lambda, opts)};
    }
    if (tag == "chanturiya_to_waterman_series") {
      if (src.kind != Kind::chanturiya || !shiba_like(tgt.kind))
        throw NotApplicable("needs a Chanturiya source and a Waterman target");
      return {tag, check_embedding_chanturiya_to_waterman(*src.h, *tgt.lambda, opts)};
    }
    if (tag == "weighted_modulus_pair_sup") {
      auto nf_s = normalize_weighted_modulus(src);
      auto nf_t = normalize_weighted_modulus(tgt);
      if (!nf_s || !nf_t)
        throw NotApplicable("both classes must normalize to a weighted-modulus form");
      return {tag, check_embedding_weighted_modulus_pair(nf_s->lambda, nf_s->h, nf_s->p,
                                                         nf_t->lambda, nf_t->h, nf_t->p, opts)};
    }
    if (tag == "waterman_to_chanturiya_sup") {
      if (src.kind != Kind::waterman || tgt.kind != Kind::chanturiya)
        throw NotApplicable("needs a Waterman source and a Chanturiya target");
      return {tag, check_embedding_waterman_to_chanturiya(*src.lambda, *tgt.h, opts)};
    }
    if (tag == "shiba_pair_sup") {
      if (!shiba_like(src.kind) || !shiba_like(tgt.kind))
        throw NotApplicable("needs weighted p-variation classes on both sides");
      return {tag, check_embedding_shiba_pair(*src.lambda, shiba_exponent(src), *tgt.lambda,
                                              shiba_exponent(tgt), opts)};
    }
    if (tag == "chanturiya_pair_sup") {
      if (src.kind != Kind::chanturiya || tgt.kind != Kind::chanturiya)
        throw NotApplicable("needs Chanturiya classes on both sides");
      return {tag, check_embedding_chanturiya_pair(*src.h, *tgt.h, opts)};
    }
    if (tag == "wiener_pair_series") {
      std::vector<double> ps = src.kind == Kind::wiener ? src.p_seq
                               : shiba_like(src.kind)
                                   ? std::vector<double>{shiba_exponent(src)}
                                   : throw NotApplicable("source has no exponent sequence");
      std::vector<double> qs = tgt.kind == Kind::wiener ? tgt.p_seq
                               : shiba_like(tgt.kind)
                                   ? std::vector<double>{shiba_exponent(tgt)}
                                   : throw NotApplicable("target has no exponent sequence");
      return {tag, check_embedding_wiener_pair(*src.lambda, ps, *tgt.lambda, qs, opts)};
    }
    if (tag == "shiba_pair_series") {
      if (!shiba_like(src.kind) || !shiba_like(tgt.kind))
        throw NotApplicable("needs weighted p-variation classes on both sides");
      return {tag, check_embedding_shiba_pair_series(*src.lambda, shiba_exponent(src), *tgt.lambda,
                                                     shiba_exponent(tgt), opts)};
    }
    throw NotApplicable("unknown condition tag: " + tag);
  };

  if (!forced.empty()) return run(forced);

  // Most specific condition first.
  if (shiba_like(src.kind) && shiba_like(tgt.kind)) {
    return run(shiba_exponent(src) <= shiba_exponent(tgt) ? "shiba_pair_sup" : "shiba_pair_series");
  }
  if (src.kind == Kind::chanturiya && tgt.kind == Kind::chanturiya) return run("chanturiya_pair_sup");
  if (src.kind == Kind::waterman && tgt.kind == Kind::chanturiya)
    return run("waterman_to_chanturiya_sup");
  if (src.kind == Kind::chanturiya && shiba_like(tgt.kind)) {
    return run(shiba_exponent(tgt) == 1.0 ? "chanturiya_to_waterman_series"
                                          : "schramm_to_shiba_series");
  }
  if (src.kind == Kind::phi_bv && shiba_like(tgt.kind)) {
    return run(shiba_exponent(tgt) == 1.0 ? "phibv_to_waterman_series" : "schramm_to_shiba_series");
  }
  if (src.kind == Kind::schramm && shiba_like(tgt.kind)) return run("schramm_to_shiba_series");
  if (src.kind == Kind::wiener || tgt.kind == Kind::wiener) {
    if ((src.kind == Kind::wiener || shiba_like(src.kind)) &&
        (tgt.kind == Kind::wiener || shiba_like(tgt.kind)))
      return run("wiener_pair_series");
    throw NotApplicable("no condition covers " + to_string(src.kind) + " into " +
                        to_string(tgt.kind));
  }
  if (normalize_weighted_modulus(src) && normalize_weighted_modulus(tgt))
    return run("weighted_modulus_pair_sup");

  throw NotApplicable("no condition covers " + to_string(src.kind) + " into " + to_string(tgt.kind));
}

}  // namespace varembed
