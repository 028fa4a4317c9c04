#pragma once

#include <cmath>

namespace bemc {

// Standard normal distribution function. erfc keeps the left tail accurate
// where 1 - erf would cancel.
inline double gaussian_cdf(double u) {
  return 0.5 * std::erfc(-u / std::sqrt(2.0));
}

inline double gaussian_density(double u) {
  static const double kInvSqrt2Pi = 0.3989422804014326779399461;
  return kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

}  // namespace bemc
