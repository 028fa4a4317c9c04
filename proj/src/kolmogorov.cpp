#include "bemc/kolmogorov.hpp"

#include <algorithm>
#include <cmath>

#include "bemc/errors.hpp"
#include "bemc/gaussian.hpp"

namespace bemc {

double kolmogorov_distance_sorted(const std::vector<double>& sorted) {
  const std::size_t r = sorted.size();
  if (r == 0) {
    throw DomainError("kolmogorov_distance: empty sample");
  }
  const double inv_r = 1.0 / static_cast<double>(r);
  double d = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double g = gaussian_cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) * inv_r - g;
    const double lo = g - static_cast<double>(i) * inv_r;
    d = std::max({d, hi, lo});
  }
  return d;
}

double kolmogorov_distance(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return kolmogorov_distance_sorted(values);
}

}  // namespace bemc
