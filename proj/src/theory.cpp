#include "bemc/theory.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "bemc/errors.hpp"

namespace bemc::theory {

double m_of_theta(const ModelParams& theta) {
  const double denom = 1.0 - theta.rho0 * theta.rho0 - theta.b0;
  if (!(denom > 0.0)) {
    throw DomainError("m_of_theta: rho0^2 + b0 < 1 required");
  }
  return 2.0 * theta.a0 / denom;
}

std::pair<double, double> stationary_moments(const ModelParams& theta) {
  const double rho = theta.rho0, a = theta.a0, b = theta.b0;
  const double m2 = a / (1.0 - rho * rho - b);
  const double e4 = theta.innovation.fourth_moment();
  const double denom =
      1.0 - std::pow(rho, 4) - 6.0 * rho * rho * b - e4 * b * b;
  if (!(denom > 0.0)) {
    throw DomainError(
        "stationary_moments: fourth-moment condition "
        "1 - rho0^4 - 6 rho0^2 b0 - E[eps^4] b0^2 > 0 fails for " +
        theta.id());
  }
  // Squared recursion: m4 = rho^4 m4 + 6 rho^2 E[X^2 sigma^2] + E[eps^4] E[sigma^4].
  const double m4 =
      (6.0 * rho * rho * a * m2 + e4 * (a * a + 2.0 * a * b * m2)) / denom;
  return {m2, m4};
}

double sigma1_sq(const ModelParams& theta) {
  const auto [m2, m4] = stationary_moments(theta);
  const double s = 4.0 * (theta.a0 * m2 + theta.b0 * m4);
  if (!(s >= 4.0 * theta.a0 * m2 * (1.0 - 1e-12))) {
    throw NumericalError("sigma1_sq: lower bound 4 a0 m2 violated");
  }
  return s;
}

Sigma2Structure sigma2_structure(const ModelParams& theta) {
  const auto [m2, m4] = stationary_moments(theta);
  const double v11 = 4.0 * (m4 - m2 * m2);
  const double ratio = theta.rho0 * theta.rho0 + theta.b0;
  if (!(v11 > 0.0)) {
    throw NumericalError("sigma2_structure: v11 must be positive");
  }
  return {v11, ratio, v11 * (1.0 + ratio) / (1.0 - ratio)};
}

double tau(const ModelParams& theta) {
  return std::sqrt(sigma1_sq(theta)) / m_of_theta(theta);
}

TheoryReport report(const ModelParams& theta) {
  TheoryReport r;
  r.m_theta = m_of_theta(theta);
  const auto [m2, m4] = stationary_moments(theta);
  r.m2 = m2;
  r.m4 = m4;
  r.sigma1_sq = sigma1_sq(theta);
  r.tau = std::sqrt(r.sigma1_sq) / r.m_theta;
  r.sigma2_sq_lower = sigma2_structure(theta).sigma2_sq;
  return r;
}

}  // namespace bemc::theory

namespace bemc {

std::string theory_report_json(const ModelParams& theta,
                               const TheoryReport& report) {
  nlohmann::json body;
  body["m_theta"] = report.m_theta;
  body["m2"] = report.m2;
  body["m4"] = report.m4;
  body["sigma1_sq"] = report.sigma1_sq;
  body["tau"] = report.tau;
  body["sigma2_sq_lower"] = report.sigma2_sq_lower;
  nlohmann::json j;
  j[theta.id()] = body;
  return j.dump(2) + "\n";
}

}  // namespace bemc
