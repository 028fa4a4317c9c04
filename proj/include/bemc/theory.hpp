#pragma once

#include <string>
#include <utility>

#include "bemc/model.hpp"

namespace bemc {

// Closed-form ground truth for the AR(1)-ARCH(1) example.
struct TheoryReport {
  double m_theta = 0.0;        // 2 a0 / (1 - rho0^2 - b0)
  double m2 = 0.0;             // stationary E[X^2]
  double m4 = 0.0;             // stationary E[X^4]
  double sigma1_sq = 0.0;      // long-run variance of F'(rho0, ., .)
  double tau = 0.0;            // sqrt(sigma1_sq) / m_theta
  double sigma2_sq_lower = 0.0;  // v11 (1+ratio)/(1-ratio) from the v recursion
};

namespace theory {

double m_of_theta(const ModelParams& theta);

// (m2, m4): m2 is exact for any law; m4 uses E[eps^4] from the innovation
// law and requires 1 - rho^4 - 6 rho^2 b - E[eps^4] b^2 > 0.
std::pair<double, double> stationary_moments(const ModelParams& theta);

// 4 (a0 m2 + b0 m4), the martingale long-run variance of
// F'(rho0, x, y) = -2x(y - rho0 x).
double sigma1_sq(const ModelParams& theta);

// v11 = Var(2X^2) = 4(m4 - m2^2) and the geometric ratio rho0^2 + b0 of the
// v_{k,l} recursion; the implied long-run variance is v11 (1+r)/(1-r).
struct Sigma2Structure {
  double v11;
  double ratio;
  double sigma2_sq;
};
Sigma2Structure sigma2_structure(const ModelParams& theta);

double tau(const ModelParams& theta);

TheoryReport report(const ModelParams& theta);

}  // namespace theory

// JSON object keyed by theta id: { "<id>": { m_theta, m2, ... } }.
std::string theory_report_json(const ModelParams& theta,
                               const TheoryReport& report);

}  // namespace bemc
