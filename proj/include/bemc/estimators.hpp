#pragma once

#include <cstdint>

#include "bemc/minimize.hpp"
#include "bemc/summation.hpp"
#include "bemc/trajectory.hpp"

namespace bemc {

// Least-squares autoregression estimate: sum X_{k-1}X_k / sum X_{k-1}^2.
double rho_hat(const Trajectory& traj);

// Empirical second moment (1/n) sum_{k=1..n} X_k^2.
double tau_hat_sq(const Trajectory& traj);

// Two-step estimator of b0: minimizes T_n(b; rho_plug, tausq_plug) over
// [b_lo, b_hi]. T_n is quadratic in b, so the unconstrained minimizer has a
// closed form; when that ratio lands inside the domain the search result must
// match it to 1e-8 or the call fails loudly.
EstimationResult b_hat(const Trajectory& traj, double rho_plug,
                       double tausq_plug, double b_lo, double b_hi,
                       const MinimizeOptions& opts = {});

struct V3Decomposition {
  double m_prime_abs = 0.0;  // |M'_n(b_hat)| with true-parameter plug-ins
  double m_prime = 0.0;
  double a_n = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

// Evaluates M'_n(b) = dT_n/db (b; rho0, tausq0) at b = bhat together with the
// exact split M' = A_n + Delta_1 + Delta_2 + Delta_3. The split is an
// algebraic identity (checked to 1e-9 relative) once the boundary term X_0^2/n
// is carried along; it vanishes for chains started at zero.
V3Decomposition v3_residual(const Trajectory& traj, double rho0, double tausq0,
                            double bhat);

// Running raw-moment sums that let every least-squares quantity at a prefix
// length n be recovered in O(1): rho_hat, tau_hat_sq, and the closed-form
// constrained minimizer of the quadratic T_n(b; r, v). Feeding the pairs
// (X_{k-1}, X_k) one at a time gives checkpointed estimates along a single
// simulated path without rescanning the prefix.
class LsMomentSums {
 public:
  void add(double u, double y);

  std::int64_t count() const { return n_; }
  double rho() const;        // degenerate when sum u^2 == 0
  double tausq() const;      // (1/n) sum y^2
  // Exact minimizer of the quadratic b -> T_n(b; r, v) over [lo, hi].
  double bhat_closed(double r, double v, double lo, double hi) const;
  // Quadratic coefficients of n*T_n(b) = Scc + 2 b Scd + b^2 Sdd (Scc not
  // tracked; only the derivative matters for the minimizer).
  void quad_terms(double r, double v, double* sum_cd, double* sum_dd) const;

 private:
  std::int64_t n_ = 0;
  CompensatedSum su_;     // sum u^2
  CompensatedSum su2_;    // sum u^4
  CompensatedSum syy_;    // sum y^2
  CompensatedSum sxy_;    // sum u y
  CompensatedSum sxy3_;   // sum u^3 y
  CompensatedSum sx2y2_;  // sum u^2 y^2
};

}  // namespace bemc
