#include "varembed/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace varembed {
namespace {

constexpr double kE = std::numbers::e;
// Prefix length for numeric monotonicity/concavity verification.
constexpr long long kCheckPrefix = 4096;
constexpr double kSlack = 1e-12;

double pow_fast(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  if (p == 0.5) return std::sqrt(x);
  return std::pow(x, p);
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightSequence
// ---------------------------------------------------------------------------

struct WeightSequence::Impl {
  Family family = Family::constant;
  double c = 1.0;
  double alpha = 0.0, beta = 0.0;
  std::vector<double> prefix;
  std::shared_ptr<const Impl> tail;

  mutable std::mutex mu;
  mutable std::vector<double> recip;  // 1/lambda_j at index j-1
  mutable std::vector<double> sums;   // Lambda(n) at index n-1

  double lambda_raw(long long j) const {
    switch (family) {
      case Family::constant:
        return c;
      case Family::power_log:
        return pow_fast(static_cast<double>(j), alpha) *
               pow_fast(std::log(static_cast<double>(j) + kE), beta);
      case Family::explicit_prefix:
        if (j <= static_cast<long long>(prefix.size())) return prefix[j - 1];
        return tail->lambda_raw(j);
    }
    return c;
  }

  void ensure(long long n) const {
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<long long>(recip.size()) < n) {
      long long j = static_cast<long long>(recip.size()) + 1;
      double r = 1.0 / lambda_raw(j);
      recip.push_back(r);
      sums.push_back((sums.empty() ? 0.0 : sums.back()) + r);
    }
  }

  double reciprocal(long long j) const {
    ensure(j);
    std::lock_guard<std::mutex> lock(mu);
    return recip[j - 1];
  }

  double partial(long long n) const {
    ensure(n);
    std::lock_guard<std::mutex> lock(mu);
    return sums[n - 1];
  }
};

WeightSequence WeightSequence::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidParams("weight sequence: constant must be positive and finite");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::constant;
  impl->c = c;
  return WeightSequence(std::move(impl));
}

WeightSequence WeightSequence::power_log(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw InvalidParams("weight sequence: non-finite parameters");
  if (alpha < 0.0)
    throw InvalidParams("weight sequence: alpha < 0 gives a decreasing sequence");
  // Divergence region of sum 1/lambda_j.
  if (!(alpha < 1.0 || (alpha == 1.0 && beta <= 1.0)))
    throw InvalidParams("weight sequence: reciprocal sum converges for these parameters");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::power_log;
  impl->alpha = alpha;
  impl->beta = beta;
  if (beta < 0.0) {
    // Monotonicity needs alpha/x >= -beta/((x+e)ln(x+e)). Verify the prefix
    // numerically; beyond it x/((x+e)ln(x+e)) <= 1/ln(X+e) bounds the factor.
    for (long long j = 1; j < kCheckPrefix; ++j) {
      if (impl->lambda_raw(j + 1) < impl->lambda_raw(j) * (1.0 - kSlack))
        throw InvalidParams("weight sequence: not nondecreasing on the prefix");
    }
    if (alpha + beta / std::log(static_cast<double>(kCheckPrefix) + kE) < 0.0)
      throw InvalidParams("weight sequence: monotonicity not certified for beta < 0");
  }
  return WeightSequence(std::move(impl));
}

WeightSequence WeightSequence::explicit_prefix(std::vector<double> values, WeightSequence tail) {
  if (values.empty()) throw InvalidParams("weight sequence: empty explicit prefix");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidParams("weight sequence: prefix values must be positive and finite");
    if (i > 0 && values[i] < values[i - 1])
      throw InvalidParams("weight sequence: prefix not nondecreasing");
  }
  long long p = static_cast<long long>(values.size());
  if (tail.lambda(p + 1) < values.back())
    throw InvalidParams("weight sequence: tail drops below the prefix at the seam");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::explicit_prefix;
  impl->prefix = std::move(values);
  impl->tail = tail.impl_;
  return WeightSequence(std::move(impl));
}

double WeightSequence::lambda(long long j) const {
  if (j < 1) throw IndexOutOfRange("weight sequence index must be >= 1");
  return impl_->lambda_raw(j);
}

double WeightSequence::reciprocal(long long j) const {
  if (j < 1) throw IndexOutOfRange("weight sequence index must be >= 1");
  return impl_->reciprocal(j);
}

double WeightSequence::partial_sum(long long n) const {
  if (n < 1) throw IndexOutOfRange("partial sum index must be >= 1");
  return impl_->partial(n);
}

double WeightSequence::forward_difference(long long k) const {
  if (k < 1) throw IndexOutOfRange("forward difference index must be >= 1");
  impl_->ensure(k + 1);
  // Nonnegative in exact arithmetic; clamp ulp-level noise.
  return std::max(0.0, impl_->reciprocal(k) - impl_->reciprocal(k + 1));
}

WeightSequence::Family WeightSequence::family() const { return impl_->family; }
double WeightSequence::const_value() const { return impl_->c; }
double WeightSequence::alpha() const { return impl_->alpha; }
double WeightSequence::beta() const { return impl_->beta; }
const std::vector<double>& WeightSequence::prefix_values() const { return impl_->prefix; }

WeightSequence WeightSequence::tail() const {
  if (impl_->family != Family::explicit_prefix)
    throw InvalidParams("weight sequence: no tail for this family");
  return WeightSequence(impl_->tail);
}

GrowthRate WeightSequence::growth() const {
  switch (impl_->family) {
    case Family::constant:
      return {0.0, 0.0, 0.0};
    case Family::power_log:
      return {impl_->alpha, impl_->beta, 0.0};
    case Family::explicit_prefix:
      return WeightSequence(impl_->tail).growth();
  }
  return {};
}

GrowthRate WeightSequence::partial_sum_growth() const {
  switch (impl_->family) {
    case Family::constant:
      return {1.0, 0.0, 0.0};
    case Family::power_log: {
      double a = impl_->alpha, b = impl_->beta;
      if (a < 1.0) return {1.0 - a, -b, 0.0};
      if (b < 1.0) return {0.0, 1.0 - b, 0.0};
      return {0.0, 0.0, 1.0};  // alpha = 1, beta = 1
    }
    case Family::explicit_prefix:
      return WeightSequence(impl_->tail).partial_sum_growth();
  }
  return {};
}

bool WeightSequence::difference_eventually_zero() const {
  switch (impl_->family) {
    case Family::constant:
      return true;
    case Family::power_log:
      return impl_->alpha == 0.0 && impl_->beta == 0.0;
    case Family::explicit_prefix:
      return WeightSequence(impl_->tail).difference_eventually_zero();
  }
  return false;
}

GrowthRate WeightSequence::difference_growth() const {
  switch (impl_->family) {
    case Family::power_log: {
      double a = impl_->alpha, b = impl_->beta;
      if (a > 0.0) return {-a - 1.0, -b, 0.0};
      return {-1.0, -b - 1.0, 0.0};  // a == 0, b > 0
    }
    case Family::explicit_prefix:
      return WeightSequence(impl_->tail).difference_growth();
    case Family::constant:
      break;
  }
  throw InvalidParams("difference growth undefined for an eventually-constant sequence");
}

bool WeightSequence::operator==(const WeightSequence& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->family != other.impl_->family) return false;
  switch (impl_->family) {
    case Family::constant:
      return impl_->c == other.impl_->c;
    case Family::power_log:
      return impl_->alpha == other.impl_->alpha && impl_->beta == other.impl_->beta;
    case Family::explicit_prefix:
      return impl_->prefix == other.impl_->prefix &&
             WeightSequence(impl_->tail) == WeightSequence(other.impl_->tail);
  }
  return false;
}

// ---------------------------------------------------------------------------
// VariationModulus
// ---------------------------------------------------------------------------

struct VariationModulus::Impl {
  Family family = Family::constant_one;
  double gamma = 1.0;
  std::shared_ptr<const WeightSequence> lambda;
  std::vector<double> values;
  bool concave_ok = true;
  long long concave_prefix = 0;

  double value(long long n) const {
    switch (family) {
      case Family::power:
        return pow_fast(static_cast<double>(n), gamma);
      case Family::log:
        return std::log(static_cast<double>(n) + 1.0);
      case Family::ratio:
        return static_cast<double>(n) / lambda->partial_sum(n);
      case Family::constant_one:
        return 1.0;
      case Family::explicit_prefix: {
        auto idx = std::min<long long>(n, static_cast<long long>(values.size()));
        return values[idx - 1];
      }
    }
    return 1.0;
  }
};

namespace {
// Second differences <= 0 (with ulp slack) on a prefix.
template <typename ValueFn>
bool concave_on_prefix(ValueFn&& value, long long upto) {
  double h1 = value(1), h2 = value(2);
  for (long long n = 3; n <= upto; ++n) {
    double h3 = value(n);
    double scale = std::max(1.0, std::abs(h3));
    if ((h3 - h2) > (h2 - h1) + kSlack * scale) return false;
    h1 = h2;
    h2 = h3;
  }
  return true;
}
}  // namespace

VariationModulus VariationModulus::power(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidParams("variation modulus: power exponent must lie in (0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::power;
  impl->gamma = gamma;
  impl->concave_ok = true;
  impl->concave_prefix = 0;
  return VariationModulus(std::move(impl));
}

VariationModulus VariationModulus::log() {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::log;
  return VariationModulus(std::move(impl));
}

VariationModulus VariationModulus::ratio(WeightSequence lambda) {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::ratio;
  impl->lambda = std::make_shared<const WeightSequence>(std::move(lambda));
  impl->concave_ok = concave_on_prefix([&impl](long long n) { return impl->value(n); }, kCheckPrefix);
  impl->concave_prefix = kCheckPrefix;
  return VariationModulus(std::move(impl));
}

VariationModulus VariationModulus::constant_one() {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::constant_one;
  return VariationModulus(std::move(impl));
}

VariationModulus VariationModulus::explicit_prefix(std::vector<double> values) {
  if (values.empty()) throw InvalidParams("variation modulus: empty prefix");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidParams("variation modulus: values must be positive and finite");
    if (i > 0 && values[i] < values[i - 1])
      throw InvalidParams("variation modulus: values must be nondecreasing");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = Family::explicit_prefix;
  impl->values = std::move(values);
  // Constant extension keeps concavity beyond the prefix automatically.
  impl->concave_ok = concave_on_prefix([&impl](long long n) { return impl->value(n); }, static_cast<long long>(impl->values.size()) + 2);
  impl->concave_prefix = static_cast<long long>(impl->values.size());
  return VariationModulus(std::move(impl));
}

double VariationModulus::value(long long n) const {
  if (n < 1) throw IndexOutOfRange("variation modulus index must be >= 1");
  return impl_->value(n);
}

VariationModulus::Family VariationModulus::family() const { return impl_->family; }
double VariationModulus::gamma() const { return impl_->gamma; }

const WeightSequence& VariationModulus::lambda() const {
  if (impl_->family != Family::ratio)
    throw InvalidParams("variation modulus: no weight sequence for this family");
  return *impl_->lambda;
}

const std::vector<double>& VariationModulus::prefix_values() const { return impl_->values; }
bool VariationModulus::concavity_verified() const { return impl_->concave_ok; }
long long VariationModulus::concavity_checked_prefix() const { return impl_->concave_prefix; }

GrowthRate VariationModulus::growth() const {
  switch (impl_->family) {
    case Family::power:
      return {impl_->gamma, 0.0, 0.0};
    case Family::log:
      return {0.0, 1.0, 0.0};
    case Family::ratio:
      return GrowthRate{1.0, 0.0, 0.0} - impl_->lambda->partial_sum_growth();
    case Family::constant_one:
    case Family::explicit_prefix:
      return {0.0, 0.0, 0.0};
  }
  return {};
}

bool VariationModulus::operator==(const VariationModulus& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->family != other.impl_->family) return false;
  switch (impl_->family) {
    case Family::power:
      return impl_->gamma == other.impl_->gamma;
    case Family::log:
    case Family::constant_one:
      return true;
    case Family::ratio:
      return *impl_->lambda == *other.impl_->lambda;
    case Family::explicit_prefix:
      return impl_->values == other.impl_->values;
  }
  return false;
}

// ---------------------------------------------------------------------------
// ConvexGauge
// ---------------------------------------------------------------------------

struct ConvexGauge::Impl {
  Family family = Family::power;
  double p = 1.0;
  std::vector<double> xs, ys;  // piecewise-linear breakpoints, (0,0) included

  double value(double x) const {
    if (x <= 0.0) return 0.0;
    switch (family) {
      case Family::power:
        return pow_fast(x, p);
      case Family::exp_minus_one:
        return std::expm1(x);
      case Family::piecewise_linear: {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs.begin());
        if (i >= xs.size()) i = xs.size() - 1;  // extend final slope
        double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + slope * (x - xs[i - 1]);
      }
    }
    return 0.0;
  }

  double inverse(double y) const {
    if (y <= 0.0) return 0.0;
    switch (family) {
      case Family::power:
        return pow_fast(y, 1.0 / p);
      case Family::exp_minus_one:
        return std::log1p(y);
      case Family::piecewise_linear: {
        auto it = std::upper_bound(ys.begin(), ys.end(), y);
        std::size_t i = static_cast<std::size_t>(it - ys.begin());
        if (i >= ys.size()) i = ys.size() - 1;
        double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        return xs[i - 1] + (y - ys[i - 1]) / slope;
      }
    }
    return 0.0;
  }
};

ConvexGauge ConvexGauge::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw InvalidParams("convex gauge: power exponent must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->family = Family::power;
  impl->p = p;
  return ConvexGauge(std::move(impl));
}

ConvexGauge ConvexGauge::exp_minus_one() {
  auto impl = std::make_shared<Impl>();
  impl->family = Family::exp_minus_one;
  return ConvexGauge(std::move(impl));
}

ConvexGauge ConvexGauge::piecewise_linear(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) throw LengthMismatch("convex gauge: breakpoint arrays differ in length");
  if (xs.empty()) throw InvalidParams("convex gauge: no breakpoints");
  if (xs.front() != 0.0 || ys.front() != 0.0) {
    xs.insert(xs.begin(), 0.0);
    ys.insert(ys.begin(), 0.0);
  }
  if (xs.size() < 2) throw InvalidParams("convex gauge: need at least one segment");
  double prev_slope = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1]) || !(ys[i] > ys[i - 1]))
      throw InvalidParams("convex gauge: breakpoints must be strictly increasing");
    double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    if (slope < prev_slope * (1.0 - kSlack))
      throw InvalidParams("convex gauge: slopes must be nondecreasing (convexity)");
    prev_slope = slope;
  }
  auto impl = std::make_shared<Impl>();
  impl->family = Family::piecewise_linear;
  impl->xs = std::move(xs);
  impl->ys = std::move(ys);
  return ConvexGauge(std::move(impl));
}

double ConvexGauge::value(double x) const { return impl_->value(x); }
double ConvexGauge::inverse(double y) const { return impl_->inverse(y); }
ConvexGauge::Family ConvexGauge::family() const { return impl_->family; }
double ConvexGauge::power_exponent() const { return impl_->p; }
const std::vector<double>& ConvexGauge::breakpoints_x() const { return impl_->xs; }
const std::vector<double>& ConvexGauge::breakpoints_y() const { return impl_->ys; }

double ConvexGauge::inverse_growth_exponent() const {
  return impl_->family == Family::power ? 1.0 / impl_->p : 1.0;
}

bool ConvexGauge::operator==(const ConvexGauge& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->family != other.impl_->family) return false;
  switch (impl_->family) {
    case Family::power:
      return impl_->p == other.impl_->p;
    case Family::exp_minus_one:
      return true;
    case Family::piecewise_linear:
      return impl_->xs == other.impl_->xs && impl_->ys == other.impl_->ys;
  }
  return false;
}

// ---------------------------------------------------------------------------
// SchrammSequence
// ---------------------------------------------------------------------------

struct SchrammSequence::Impl {
  Rule rule = Rule::uniform;
  std::shared_ptr<ConvexGauge> base;
  std::shared_ptr<WeightSequence> weights;
  std::vector<ConvexGauge> list;

  double gauge_value(long long j, double x) const {
    switch (rule) {
      case Rule::scaled:
        return base->value(x) * weights->reciprocal(j);
      case Rule::uniform:
        return base->value(x);
      case Rule::explicit_list: {
        auto idx = std::min<long long>(j, static_cast<long long>(list.size()));
        return list[idx - 1].value(x);
      }
    }
    return 0.0;
  }

  double capital_phi(long long k, double x) const {
    switch (rule) {
      case Rule::scaled:
        return base->value(x) * weights->partial_sum(k);
      case Rule::uniform:
        return base->value(x) * static_cast<double>(k);
      case Rule::explicit_list: {
        double s = 0.0;
        long long in_list = std::min<long long>(k, static_cast<long long>(list.size()));
        for (long long j = 1; j <= in_list; ++j) s += list[j - 1].value(x);
        if (k > in_list) s += static_cast<double>(k - in_list) * list.back().value(x);
        return s;
      }
    }
    return 0.0;
  }
};

namespace {
// 64-point log-spaced sample grid for certifying explicit gauge lists.
std::vector<double> sample_grid() {
  std::vector<double> g;
  g.reserve(64);
  double lo = std::log(1e-6), hi = std::log(1e3);
  for (int i = 0; i < 64; ++i) g.push_back(std::exp(lo + (hi - lo) * i / 63.0));
  return g;
}
}  // namespace

SchrammSequence SchrammSequence::scaled(ConvexGauge phi, WeightSequence lambda) {
  auto impl = std::make_shared<Impl>();
  impl->rule = Rule::scaled;
  impl->base = std::make_shared<ConvexGauge>(std::move(phi));
  impl->weights = std::make_shared<WeightSequence>(std::move(lambda));
  return SchrammSequence(std::move(impl));
}

SchrammSequence SchrammSequence::uniform(ConvexGauge phi) {
  auto impl = std::make_shared<Impl>();
  impl->rule = Rule::uniform;
  impl->base = std::make_shared<ConvexGauge>(std::move(phi));
  return SchrammSequence(std::move(impl));
}

SchrammSequence SchrammSequence::explicit_list(std::vector<ConvexGauge> gauges) {
  if (gauges.empty()) throw InvalidParams("schramm sequence: empty gauge list");
  const auto grid = sample_grid();
  for (std::size_t j = 0; j + 1 < gauges.size(); ++j) {
    double prev_diff = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double hi = gauges[j].value(grid[i]);
      double lo = gauges[j + 1].value(grid[i]);
      double scale = std::max(1.0, hi);
      if (lo > hi + kSlack * scale)
        throw InvalidParams("schramm sequence: gauges not pointwise nonincreasing in the index");
      double diff = hi - lo;
      if (i > 0 && diff < prev_diff - kSlack * std::max(1.0, prev_diff))
        throw InvalidParams(
            "schramm sequence: gauge differences must be nondecreasing "
            "(sorted assignment would not be optimal)");
      prev_diff = diff;
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->rule = Rule::explicit_list;
  impl->list = std::move(gauges);
  return SchrammSequence(std::move(impl));
}

double SchrammSequence::gauge_value(long long j, double x) const {
  if (j < 1) throw IndexOutOfRange("gauge index must be >= 1");
  return impl_->gauge_value(j, x);
}

double SchrammSequence::capital_phi(long long k, double x) const {
  if (k < 1) throw IndexOutOfRange("cumulative gauge index must be >= 1");
  if (x < 0.0) throw InvalidParams("cumulative gauge argument must be >= 0");
  return impl_->capital_phi(k, x);
}

double SchrammSequence::capital_phi_inverse(long long k, double y, double rel_tol) const {
  if (k < 1) throw IndexOutOfRange("cumulative gauge index must be >= 1");
  if (y < 0.0) throw InvalidParams("inverse argument must be >= 0");
  if (y == 0.0) return 0.0;

  double hi = 1.0;
  int doublings = 0;
  while (impl_->capital_phi(k, hi) < y) {
    hi *= 2.0;
    if (++doublings > kBracketDoublingBudget)
      throw BracketFailure("cumulative gauge inverse: no upper bracket found (gauge saturates?)");
  }
  double lo = 0.0;
  double tol = rel_tol * std::max(1.0, y);
  double mid = hi;
  for (int it = 0; it < 2000; ++it) {
    mid = 0.5 * (lo + hi);
    double v = impl_->capital_phi(k, mid);
    // The residual criterion alone leaves the preimage loose where the gauge
    // is flat; also require a tight bracket around x*.
    if (std::abs(v - y) <= tol && hi - lo <= 1e-9 * std::max(1.0, mid)) return mid;
    (v < y ? lo : hi) = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
  }
  return mid;
}

double SchrammSequence::inverse(long long k, double y) const {
  if (y <= 0.0) return 0.0;
  if (factorizes()) return base_gauge().inverse(y / weight_partial_sum(k));
  return capital_phi_inverse(k, y, 1e-12);
}

SchrammSequence::Rule SchrammSequence::rule() const { return impl_->rule; }

bool SchrammSequence::uniform_gauges() const {
  switch (impl_->rule) {
    case Rule::uniform:
      return true;
    case Rule::scaled:
      return impl_->weights->family() == WeightSequence::Family::constant;
    case Rule::explicit_list:
      for (const auto& g : impl_->list)
        if (!(g == impl_->list.front())) return false;
      return true;
  }
  return false;
}

double SchrammSequence::weight_partial_sum(long long k) const {
  switch (impl_->rule) {
    case Rule::scaled:
      return impl_->weights->partial_sum(k);
    case Rule::uniform:
      return static_cast<double>(k);
    case Rule::explicit_list:
      throw InvalidParams("schramm sequence: explicit rule does not factorize");
  }
  return 0.0;
}

GrowthRate SchrammSequence::weight_partial_sum_growth() const {
  switch (impl_->rule) {
    case Rule::scaled:
      return impl_->weights->partial_sum_growth();
    case Rule::uniform:
      return {1.0, 0.0, 0.0};
    case Rule::explicit_list:
      throw InvalidParams("schramm sequence: explicit rule does not factorize");
  }
  return {};
}

const ConvexGauge& SchrammSequence::base_gauge() const {
  if (impl_->rule == Rule::explicit_list)
    throw InvalidParams("schramm sequence: explicit rule has no base gauge");
  return *impl_->base;
}

const WeightSequence& SchrammSequence::scale_weights() const {
  if (impl_->rule != Rule::scaled)
    throw InvalidParams("schramm sequence: not a scaled rule");
  return *impl_->weights;
}

const std::vector<ConvexGauge>& SchrammSequence::gauges() const { return impl_->list; }

SchrammSequence::Certificate SchrammSequence::schramm_certificate(const VariationModulus& h) const {
  if (impl_->rule == Rule::explicit_list) return Certificate::unknown;
  // Phi_n(x) = phi(x) W(n): the condition reduces to W(n)/h(n) -> infinity.
  GrowthRate ratio = weight_partial_sum_growth() - h.growth();
  return grows_unbounded(ratio) ? Certificate::certified : Certificate::refuted;
}

bool SchrammSequence::operator==(const SchrammSequence& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->rule != other.impl_->rule) return false;
  switch (impl_->rule) {
    case Rule::scaled:
      return *impl_->base == *other.impl_->base && *impl_->weights == *other.impl_->weights;
    case Rule::uniform:
      return *impl_->base == *other.impl_->base;
    case Rule::explicit_list:
      if (impl_->list.size() != other.impl_->list.size()) return false;
      for (std::size_t i = 0; i < impl_->list.size(); ++i)
        if (!(impl_->list[i] == other.impl_->list[i])) return false;
      return true;
  }
  return false;
}

}  // namespace varembed
