#include "bemc/batch_means.hpp"

#include <cmath>

#include "bemc/errors.hpp"
#include "bemc/summation.hpp"

namespace bemc {

double batch_means_variance(const std::vector<double>& y, std::size_t len) {
  const std::size_t n = y.size();
  if (len == 0) {
    len = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  }
  const std::size_t m = (len > 0) ? n / len : 0;
  if (m < 2) {
    throw DomainError("batch_means_variance: need at least two batches");
  }
  std::vector<double> means(m);
  for (std::size_t b = 0; b < m; ++b) {
    CompensatedSum s;
    for (std::size_t k = b * len; k < (b + 1) * len; ++k) {
      s.add(y[k]);
    }
    means[b] = s.value() / static_cast<double>(len);
  }
  CompensatedSum tot;
  for (double v : means) {
    tot.add(v);
  }
  const double grand = tot.value() / static_cast<double>(m);
  CompensatedSum ssq;
  for (double v : means) {
    const double d = v - grand;
    ssq.add(d * d);
  }
  return static_cast<double>(len) * ssq.value() / static_cast<double>(m - 1);
}

}  // namespace bemc
