#include "varembed/functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varembed/rng.hpp"

namespace varembed {

SampledFunction::SampledFunction(std::vector<double> grid_in, std::vector<double> values_in)
    : grid(std::move(grid_in)), values(std::move(values_in)) {
  if (grid.size() != values.size())
    throw LengthMismatch("sampled function: grid and values differ in length");
  if (grid.size() < 2) throw InvalidParams("sampled function: need at least two points");
  if (grid.front() != 0.0 || grid.back() != 1.0)
    throw InvalidParams("sampled function: domain must be exactly [0, 1]");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
      throw InvalidParams("sampled function: non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InvalidParams("sampled function: grid must be strictly increasing");
  }
}

IntervalFamily IntervalFamily::from_pairs(std::vector<std::pair<int, int>> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first < 0 || pairs[i].first >= pairs[i].second)
      throw InvalidParams("interval family: need 0 <= a < b per interval");
    if (i > 0 && pairs[i - 1].second > pairs[i].first)
      throw InvalidParams("interval family: intervals must be ordered and nonoverlapping");
  }
  return IntervalFamily{std::move(pairs)};
}

double MinLengthConstraint::min_length() const {
  if (level < 1) throw InvalidParams("minimum-length constraint: level must be >= 1");
  return std::ldexp(1.0, -level);
}

std::vector<double> increments(const SampledFunction& f, const IntervalFamily& fam) {
  std::vector<double> out;
  out.reserve(fam.pairs.size());
  for (const auto& [a, b] : fam.pairs) {
    if (a < 0 || b > f.last_index())
      throw IndexOutOfRange("interval family references grid index " + std::to_string(b) +
                            " outside [0, " + std::to_string(f.last_index()) + "]");
    out.push_back(std::abs(f.values[b] - f.values[a]));
  }
  return out;
}

std::vector<int> local_extrema(const SampledFunction& f) {
  const auto& v = f.values;
  const int m = f.last_index();
  std::vector<int> out;
  out.push_back(0);
  for (int i = 1; i < m; ++i) {
    if (v[i] == v[i - 1] && v[i] == v[i + 1]) continue;  // plateau interior
    // Nearest differing neighbours decide the turn.
    int l = i - 1;
    while (l >= 0 && v[l] == v[i]) --l;
    int r = i + 1;
    while (r <= m && v[r] == v[i]) ++r;
    if (l < 0 || r > m) continue;  // flat out to a boundary endpoint
    if ((v[i] - v[l]) * (v[r] - v[i]) < 0.0) out.push_back(i);
  }
  out.push_back(m);
  return out;
}

int alternation_count(const SampledFunction& f) {
  const auto& v = f.values;
  int runs = 0;
  int dir = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    double d = v[i] - v[i - 1];
    if (d == 0.0) continue;
    int s = d > 0.0 ? 1 : -1;
    if (s != dir) {
      ++runs;
      dir = s;
    }
  }
  return std::max(1, runs);
}

namespace {

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw InvalidParams("generator: need at least two grid points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

}  // namespace

SampledFunction generate_step(int points, const std::vector<double>& jump_sizes,
                              const std::vector<int>& gap_sites) {
  if (jump_sizes.size() != gap_sites.size())
    throw LengthMismatch("step generator: sizes and sites differ in length");
  if (static_cast<int>(jump_sizes.size()) > points - 1)
    throw InvalidParams("step generator: more jumps than grid gaps");
  for (std::size_t i = 0; i < gap_sites.size(); ++i) {
    if (gap_sites[i] < 0 || gap_sites[i] >= points - 1)
      throw InvalidParams("step generator: gap site out of range");
    if (i > 0 && gap_sites[i] <= gap_sites[i - 1])
      throw InvalidParams("step generator: gap sites must be strictly increasing");
    if (!std::isfinite(jump_sizes[i])) throw InvalidParams("step generator: non-finite jump");
  }
  std::vector<double> vals(points, 0.0);
  double level = 0.0;
  std::size_t next = 0;
  for (int i = 0; i < points; ++i) {
    vals[i] = level;
    if (next < gap_sites.size() && gap_sites[next] == i) {
      level += jump_sizes[next];
      ++next;
    }
  }
  return SampledFunction(uniform_grid(points), std::move(vals));
}

SampledFunction generate_step_random_sites(int points, const std::vector<double>& jump_sizes,
                                           std::uint64_t seed) {
  int k = static_cast<int>(jump_sizes.size());
  if (k > points - 1) throw InvalidParams("step generator: more jumps than grid gaps");
  Rng rng(seed);
  std::vector<int> gaps(points - 1);
  for (int i = 0; i < points - 1; ++i) gaps[i] = i;
  // Partial Fisher-Yates: pick k distinct gaps.
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(gaps.size()) - i));
    std::swap(gaps[i], gaps[j]);
  }
  std::vector<int> sites(gaps.begin(), gaps.begin() + k);
  std::sort(sites.begin(), sites.end());
  return generate_step(points, jump_sizes, sites);
}

SampledFunction generate_oscillator(double a, double b, int points) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidParams("oscillator: exponents must be positive");
  auto grid = uniform_grid(points);
  std::vector<double> vals(points, 0.0);
  for (int i = 1; i < points; ++i) {
    double t = grid[i];
    vals[i] = std::pow(t, a) * std::sin(std::pow(t, -b));
  }
  return SampledFunction(std::move(grid), std::move(vals));
}

SampledFunction generate_random_piecewise_linear(int points, double amplitude, std::uint64_t seed) {
  if (!(amplitude > 0.0)) throw InvalidParams("random generator: amplitude must be positive");
  Rng rng(seed);
  std::vector<double> vals(points);
  for (int i = 0; i < points; ++i) vals[i] = rng.uniform(-amplitude, amplitude);
  return SampledFunction(uniform_grid(points), std::move(vals));
}

}  // namespace varembed
