#include "bemc/minimize.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bemc {

namespace {
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
}

double minimize_scalar(const std::function<double(double)>& objective,
                       double lo, double hi, double c_n,
                       const MinimizeOptions& opts, std::int64_t* iterations) {
  std::int64_t evals = 0;
  double best_x = std::numeric_limits<double>::quiet_NaN();
  double best_f = std::numeric_limits<double>::infinity();
  const auto eval = [&](double x) {
    ++evals;
    const double f = objective(x);
    if (!std::isfinite(f)) {
      throw NumericalError("minimize: non-finite criterion at alpha=" +
                           std::to_string(x));
    }
    // Ties go to the most recent probe: near a flat minimum the criterion is
    // constant to double precision over a region wider than the bracket, and
    // the later golden-section probes are the ones inside the final bracket.
    if (f <= best_f) {
      best_f = f;
      best_x = x;
    }
    return f;
  };

  // Interior grid scan; the midpoint offsets keep every probe inside an
  // open interval domain.
  const int G = opts.grid_points;
  const double step = (hi - lo) / G;
  int best_i = 0;
  double best_grid = std::numeric_limits<double>::infinity();
  for (int i = 0; i < G; ++i) {
    const double x = lo + (i + 0.5) * step;
    const double f = eval(x);
    if (f < best_grid) {
      best_grid = f;
      best_i = i;
    }
  }

  double a = lo + (best_i - 0.5) * step;
  double b = lo + (best_i + 1.5) * step;
  if (best_i == 0) a = lo + 1e-12 * (hi - lo);
  if (best_i == G - 1) b = hi - 1e-12 * (hi - lo);

  const double width_target =
      std::max(c_n > 0.0 ? std::sqrt(c_n) : 0.0, opts.min_width);
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > width_target) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    }
    if (evals > G + 400) break;  // width target reached in ~<200 halvings
  }
  eval(0.5 * (a + b));

  if (iterations) *iterations = evals;
  return best_x;
}

EstimationResult minimize(const Criterion& crit, const Trajectory& traj,
                          double c_n, const MinimizeOptions& opts) {
  if (c_n < 0.0) throw DomainError("minimize: c_n must be nonnegative");
  EstimationResult res;
  res.c_n_used = c_n;
  const auto objective = [&](double x) {
    return detail::empirical_mean(crit.F, traj, x);
  };
  res.alpha_hat = minimize_scalar(objective, crit.a_lo, crit.a_hi, c_n, opts,
                                  &res.iterations);
  res.criterion_value = objective(res.alpha_hat);
  res.m_prime_at_hat = detail::empirical_mean(crit.F_prime, traj, res.alpha_hat);
  return res;
}

}  // namespace bemc
