// Deterministic splitmix64 generator used by every randomized component.
//
// Hand-rolled so that reports are reproducible bit-for-bit independent of the
// standard library's distribution implementations, and so that per-trial
// streams can be derived from (master seed, trial index) for order-free
// parallel execution.
#pragma once

#include <cmath>
#include <cstdint>

namespace varembed {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Log-uniform over [a, b], a > 0.
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  // Uniform integer in [0, n), n > 0.
  std::int64_t uniform_int(std::int64_t n) {
    return static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool coin() { return (next_u64() & 1) != 0; }

private:
  std::uint64_t state_;
};

// Independent per-trial stream derived from a master seed.
inline Rng trial_rng(std::uint64_t master_seed, std::int64_t trial_index) {
  std::uint64_t z = master_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial_index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Rng(z ^ (z >> 31));
}

}  // namespace varembed
