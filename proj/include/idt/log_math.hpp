#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace idt {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return kNegInf;
  const double m = *std::max_element(v.begin(), v.end());
  if (m == kNegInf) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

// Inner-node context-tree weight: log((P0*P1 + L) / 2).
inline double log_inner_weight(double log_p0, double log_p1, double log_l) {
  return log_add_exp(log_p0 + log_p1, log_l) - kLn2;
}

}  // namespace idt
