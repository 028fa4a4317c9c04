#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace bemc {

// Neumaier compensated accumulator. Sequential use gives results that are
// stable under re-bracketing to well below 1e-12 relative, which is what
// makes parallel reductions reproducible.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Pairwise sum of a contiguous range; O(log n) error growth.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 8) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace bemc
