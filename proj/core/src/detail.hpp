#pragma once

#include <cmath>
#include <initializer_list>
#include <limits>

namespace inexact::detail {

// lhs <= rhs up to rounding in the terms that produced them.
inline bool holds(double lhs, double rhs, std::initializer_list<double> terms) {
  double mag = 0.0;
  for (double t : terms) mag += std::abs(t);
  return lhs <= rhs + 16.0 * std::numeric_limits<double>::epsilon() * mag;
}

inline double q_factor(double L, double mu, double m) { return L <= mu ? 0.0 : (L - mu) / (L + m); }

}  // namespace inexact::detail
