#pragma once

#include <cstdint>

#include "bemc/criterion.hpp"

namespace bemc {

struct EstimationResult {
  double alpha_hat = 0.0;
  double criterion_value = 0.0;
  double m_prime_at_hat = 0.0;
  double c_n_used = 0.0;
  std::int64_t iterations = 0;
};

struct MinimizeOptions {
  int grid_points = 512;
  double min_width = 1e-10;
};

// Coarse grid scan over A followed by golden-section refinement of the best
// bracket, stopping at width max(sqrt(c_n), min_width). Returns the best
// point ever evaluated, so M_n(alpha_hat) <= grid minimum + c_n holds by
// construction.
EstimationResult minimize(const Criterion& crit, const Trajectory& traj,
                          double c_n, const MinimizeOptions& opts = {});

// Same search on a plain objective over [lo, hi]; used internally where the
// criterion is a precomputed closed form.
double minimize_scalar(const std::function<double(double)>& objective,
                       double lo, double hi, double c_n,
                       const MinimizeOptions& opts, std::int64_t* iterations);

}  // namespace bemc
