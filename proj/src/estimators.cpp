#include "bemc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bemc/errors.hpp"

namespace bemc {

double rho_hat(const Trajectory& traj) {
  const auto& x = traj.x;
  const std::size_t n = traj.n();
  CompensatedSum sxx;
  CompensatedSum sxy;
  for (std::size_t k = 1; k <= n; ++k) {
    sxx.add(x[k - 1] * x[k - 1]);
    sxy.add(x[k - 1] * x[k]);
  }
  const double denom = sxx.value();
  if (denom <= 0.0) {
    throw DegenerateDataError("rho_hat: sum of squared lags is zero");
  }
  return sxy.value() / denom;
}

double tau_hat_sq(const Trajectory& traj) {
  const auto& x = traj.x;
  const std::size_t n = traj.n();
  if (n == 0) {
    throw DomainError("tau_hat_sq: empty trajectory");
  }
  CompensatedSum ss;
  for (std::size_t k = 1; k <= n; ++k) {
    ss.add(x[k] * x[k]);
  }
  return ss.value() / static_cast<double>(n);
}

namespace {

// Accumulates the quadratic form n*T_n(b) = Scc + 2 b Scd + b^2 Sdd for
// eta_k = c_k + b d_k with c_k = (X_k - r X_{k-1})^2 - v(1 - r^2) and
// d_k = v - X_{k-1}^2.
struct QuadCoeffs {
  double scc = 0.0;
  double scd = 0.0;
  double sdd = 0.0;
};

QuadCoeffs quad_coeffs(const Trajectory& traj, double r, double v) {
  const auto& x = traj.x;
  const std::size_t n = traj.n();
  CompensatedSum scc;
  CompensatedSum scd;
  CompensatedSum sdd;
  const double base = v * (1.0 - r * r);
  for (std::size_t k = 1; k <= n; ++k) {
    const double u = x[k - 1];
    const double resid = x[k] - r * u;
    const double c = resid * resid - base;
    const double d = v - u * u;
    scc.add(c * c);
    scd.add(c * d);
    sdd.add(d * d);
  }
  return {scc.value(), scd.value(), sdd.value()};
}

}  // namespace

EstimationResult b_hat(const Trajectory& traj, double rho_plug,
                       double tausq_plug, double b_lo, double b_hi,
                       const MinimizeOptions& opts) {
  if (!std::isfinite(rho_plug) || !std::isfinite(tausq_plug)) {
    throw DomainError("b_hat: non-finite plug-in estimates");
  }
  if (!(b_lo < b_hi) || b_lo < 0.0 || b_hi >= 1.0) {
    throw DomainError("b_hat: domain must satisfy 0 <= b_lo < b_hi < 1");
  }
  const QuadCoeffs q =
      quad_coeffs(traj, rho_plug, tausq_plug);
  if (q.sdd <= 0.0) {
    throw DegenerateDataError(
        "b_hat: sum of squared (tausq - X^2) terms is zero");
  }
  const double inv_n = 1.0 / static_cast<double>(traj.n());
  const auto objective = [&](double b) {
    return (q.scc + b * (2.0 * q.scd + b * q.sdd)) * inv_n;
  };
  // The search drops the b-independent Σc² term: it cannot move the argmin,
  // and keeping it would swamp the value comparisons near the minimum with
  // its rounding error (the quadratic part there is far below one ulp of the
  // full criterion).
  const auto search_objective = [&](double b) {
    return b * (2.0 * q.scd + b * q.sdd) * inv_n;
  };

  EstimationResult result;
  result.c_n_used = 0.0;
  result.alpha_hat = minimize_scalar(search_objective, b_lo, b_hi, 0.0, opts,
                                     &result.iterations);
  result.criterion_value = objective(result.alpha_hat);
  result.m_prime_at_hat =
      2.0 * (q.scd + result.alpha_hat * q.sdd) * inv_n;

  const double ratio = -q.scd / q.sdd;
  if (ratio > b_lo && ratio < b_hi &&
      std::abs(result.alpha_hat - ratio) > 1e-8) {
    throw NumericalError(
        "b_hat: search minimizer " + std::to_string(result.alpha_hat) +
        " disagrees with closed-form ratio " + std::to_string(ratio));
  }
  return result;
}

V3Decomposition v3_residual(const Trajectory& traj, double rho0, double tausq0,
                            double bhat) {
  const auto& x = traj.x;
  const std::size_t n = traj.n();
  if (n == 0) {
    throw DomainError("v3_residual: empty trajectory");
  }
  const double rh = rho_hat(traj);
  const double th = tau_hat_sq(traj);
  const double inv_n = 1.0 / static_cast<double>(n);

  CompensatedSum direct;       // sum (tausq0 - u^2) eta_k(bhat; rho0, tausq0)
  CompensatedSum a_sum;        // sum (tausq0 - u^2) eta_k(bhat; rh, th)
  CompensatedSum d1_sum;       // sum (tausq0 - u^2) (x_k - rho0 u) u
  CompensatedSum d2_sum;       // sum (tausq0 - u^2) u^2
  const double base0 = tausq0 * (1.0 - rho0 * rho0 - bhat);
  const double base_hat = th * (1.0 - rh * rh - bhat);
  for (std::size_t k = 1; k <= n; ++k) {
    const double u = x[k - 1];
    const double w = tausq0 - u * u;
    const double r0 = x[k] - rho0 * u;
    const double rhk = x[k] - rh * u;
    direct.add(w * (r0 * r0 - base0 - bhat * u * u));
    a_sum.add(w * (rhk * rhk - base_hat - bhat * u * u));
    d1_sum.add(w * r0 * u);
    d2_sum.add(w * u * u);
  }

  V3Decomposition out;
  out.m_prime = 2.0 * inv_n * direct.value();
  out.m_prime_abs = std::abs(out.m_prime);
  out.a_n = 2.0 * inv_n * a_sum.value();
  const double drho = rh - rho0;
  out.delta1 = 4.0 * drho * inv_n * d1_sum.value();
  out.delta2 = -2.0 * drho * drho * inv_n * d2_sum.value();
  // (1/n) sum (tausq0 - X_{k-1}^2) telescopes to
  // tausq0 - tau_hat_sq + (X_n^2 - X_0^2)/n; the X_0^2 term vanishes for
  // chains started at zero but keeps the identity exact for injected data.
  const double boundary =
      tausq0 - th + (x[n] * x[n] - x[0] * x[0]) * inv_n;
  out.delta3 = 2.0 * (base_hat - base0) * boundary;

  const double parts = out.a_n + out.delta1 + out.delta2 + out.delta3;
  const double scale = std::max(
      {1e-30, out.m_prime_abs, std::abs(out.a_n), std::abs(out.delta1),
       std::abs(out.delta2), std::abs(out.delta3)});
  if (std::abs(out.m_prime - parts) > 1e-9 * scale) {
    throw NumericalError(
        "v3_residual: decomposition mismatch, M'=" +
        std::to_string(out.m_prime) + " parts=" + std::to_string(parts));
  }
  return out;
}

void LsMomentSums::add(double u, double y) {
  ++n_;
  const double u2 = u * u;
  su_.add(u2);
  su2_.add(u2 * u2);
  syy_.add(y * y);
  sxy_.add(u * y);
  sxy3_.add(u2 * u * y);
  sx2y2_.add(u2 * y * y);
}

double LsMomentSums::rho() const {
  const double denom = su_.value();
  if (denom <= 0.0) {
    throw DegenerateDataError("LsMomentSums: sum of squared lags is zero");
  }
  return sxy_.value() / denom;
}

double LsMomentSums::tausq() const {
  if (n_ == 0) {
    throw DomainError("LsMomentSums: no observations");
  }
  return syy_.value() / static_cast<double>(n_);
}

void LsMomentSums::quad_terms(double r, double v, double* sum_cd,
                              double* sum_dd) const {
  const double n = static_cast<double>(n_);
  const double su = su_.value();
  const double sum_w = syy_.value() - 2.0 * r * sxy_.value() + r * r * su;
  const double sum_u2w =
      sx2y2_.value() - 2.0 * r * sxy3_.value() + r * r * su2_.value();
  const double sum_d = n * v - su;
  *sum_dd = n * v * v - 2.0 * v * su + su2_.value();
  *sum_cd = v * sum_w - sum_u2w - v * (1.0 - r * r) * sum_d;
}

double LsMomentSums::bhat_closed(double r, double v, double lo,
                                 double hi) const {
  double scd = 0.0;
  double sdd = 0.0;
  quad_terms(r, v, &scd, &sdd);
  if (sdd <= 0.0) {
    throw DegenerateDataError(
        "LsMomentSums: sum of squared (tausq - X^2) terms is zero");
  }
  return std::clamp(-scd / sdd, lo, hi);
}

}  // namespace bemc
