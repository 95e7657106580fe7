// Tiny Theta-growth algebra over the scale n^a * ln(n)^b * lnln(n)^c.
//
// Every admissible sequence family (weights, moduli, their partial sums and
// forward differences) has a growth rate expressible on this scale, which is
// what makes boundedness and series-convergence verdicts decidable instead of
// guessed from partial sums.
#pragma once

#include <cmath>
#include <string>

namespace varembed {

struct GrowthRate {
  double n_exp = 0.0;
  double log_exp = 0.0;
  double loglog_exp = 0.0;

  // Product / ratio of the underlying quantities.
  friend GrowthRate operator+(const GrowthRate& l, const GrowthRate& r) {
    return {l.n_exp + r.n_exp, l.log_exp + r.log_exp, l.loglog_exp + r.loglog_exp};
  }
  friend GrowthRate operator-(const GrowthRate& l, const GrowthRate& r) {
    return {l.n_exp - r.n_exp, l.log_exp - r.log_exp, l.loglog_exp - r.loglog_exp};
  }
  // The underlying quantity raised to the power s.
  GrowthRate scaled(double s) const { return {s * n_exp, s * log_exp, s * loglog_exp}; }

  friend bool operator==(const GrowthRate&, const GrowthRate&) = default;
};

// Lexicographic comparison: n beats ln beats lnln.
inline int lex_cmp(const GrowthRate& a, const GrowthRate& b) {
  if (a.n_exp != b.n_exp) return a.n_exp < b.n_exp ? -1 : 1;
  if (a.log_exp != b.log_exp) return a.log_exp < b.log_exp ? -1 : 1;
  if (a.loglog_exp != b.loglog_exp) return a.loglog_exp < b.loglog_exp ? -1 : 1;
  return 0;
}

inline GrowthRate lex_max(const GrowthRate& a, const GrowthRate& b) {
  return lex_cmp(a, b) >= 0 ? a : b;
}

inline bool grows_unbounded(const GrowthRate& g) { return lex_cmp(g, {}) > 0; }
inline bool stays_bounded(const GrowthRate& g) { return lex_cmp(g, {}) <= 0; }
inline bool tends_to_zero(const GrowthRate& g) { return lex_cmp(g, {}) < 0; }

// Sum over k of k^a ln^b lnln^c converges iff (a,b,c) < (-1,-1,-1) lexicographically.
inline bool series_converges(const GrowthRate& g) {
  return lex_cmp(g, {-1.0, -1.0, -1.0}) < 0;
}

// Running maximum of a regularly varying positive sequence: grows like the
// sequence when it is unbounded, otherwise settles to a constant.
inline GrowthRate running_max_growth(const GrowthRate& g) { return lex_max(g, {}); }

inline std::string to_string(const GrowthRate& g) {
  auto fmt = [](double v) {
    std::string s = std::to_string(v);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  return "n^" + fmt(g.n_exp) + "*ln^" + fmt(g.log_exp) + "*lnln^" + fmt(g.loglog_exp);
}

}  // namespace varembed
