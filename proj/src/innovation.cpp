#include "bemc/innovation.hpp"

#include <cmath>

#include "bemc/errors.hpp"
#include "bemc/quadrature.hpp"

namespace bemc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrtTwoPi = 0.39894228040143267793994605993438;

double gaussian_density(double y) {
  return kInvSqrtTwoPi * std::exp(-0.5 * y * y);
}

// Student-t(df) density constant Gamma((df+1)/2) / (sqrt(df*pi) Gamma(df/2)).
double student_const(int df) {
  return std::exp(std::lgamma(0.5 * (df + 1)) - std::lgamma(0.5 * df)) /
         std::sqrt(df * 3.14159265358979323846);
}

double student_scale(int df) {
  return std::sqrt((df - 2.0) / df);  // Var(t_df) = df/(df-2)
}
}  // namespace

InnovationLaw InnovationLaw::gaussian() {
  return InnovationLaw{Kind::standard_gaussian, 0};
}

InnovationLaw InnovationLaw::student(int df) {
  if (df <= 12) {
    throw DomainError("scaled_student requires integer df > 12, got df=" +
                      std::to_string(df));
  }
  return InnovationLaw{Kind::scaled_student, df};
}

double InnovationLaw::density(double y) const {
  if (kind == Kind::standard_gaussian) return gaussian_density(y);
  const double s = student_scale(df);
  const double x = y / s;
  return student_const(df) *
         std::pow(1.0 + x * x / df, -0.5 * (df + 1)) / s;
}

double InnovationLaw::fourth_moment() const {
  if (kind == Kind::standard_gaussian) return 3.0;
  return 3.0 * (df - 2.0) / (df - 4.0);
}

bool InnovationLaw::has_moment(double p) const {
  if (kind == Kind::standard_gaussian) return true;
  return p < static_cast<double>(df);
}

double InnovationLaw::tail_bound(double p, double T) const {
  if (kind == Kind::standard_gaussian) {
    // (1+y)^p <= (1+T)^p exp(p(y-T)/(1+T)) for y >= T (concavity of log1p),
    // then complete the square against the Gaussian density.
    const double c = p / (1.0 + T);
    if (T - c <= 0.0) return std::numeric_limits<double>::infinity();
    const double log_tail = p * std::log1p(T) - c * T + 0.5 * c * c +
                            std::log(gaussian_density(T - c) / (T - c));
    return 2.0 * std::exp(log_tail);
  }
  if (!has_moment(p)) return std::numeric_limits<double>::infinity();
  if (T < 1.0) return std::numeric_limits<double>::infinity();
  // (1+y)^p f(y) <= 2^p y^p * K y^{-(df+1)} for y >= max(T,1).
  const double s = student_scale(df);
  const double logK = std::log(student_const(df) / s) +
                      0.5 * (df + 1) * std::log(df * s * s);
  const double log_tail = p * std::log(2.0) + logK +
                          (p - df) * std::log(T) - std::log(df - p);
  return 2.0 * std::exp(log_tail);
}

double InnovationLaw::support_halfwidth(double p, double tail_tol) const {
  if (!has_moment(p)) {
    throw MomentOrderError("innovation law " + name() +
                           " lacks a finite moment of order p=" +
                           std::to_string(p));
  }
  double T = 8.0;
  while (tail_bound(p, T) > tail_tol) {
    T *= 2.0;
    if (T > 1e9) {
      throw NumericalError("support_halfwidth: tail bound did not reach tolerance");
    }
  }
  return T;
}

double InnovationLaw::weighted_polynomial_mass(double p, double abs_tol) const {
  const double T = support_halfwidth(p, abs_tol * 0.01);
  const auto integrand = [&](double y) {
    return std::pow(1.0 + std::abs(y), p) * density(y);
  };
  return adaptive_simpson(integrand, -T, T, abs_tol * 0.99);
}

std::string InnovationLaw::name() const {
  if (kind == Kind::standard_gaussian) return "gaussian";
  return "student:" + std::to_string(df);
}

double InnovationSampler::next() {
  return law_.kind == InnovationLaw::Kind::standard_gaussian ? next_gaussian()
                                                             : next_student();
}

double InnovationSampler::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = stream_.next_unit();
  const double u2 = stream_.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double InnovationSampler::next_student() {
  // Bailey's polar method, then rescale to variance one.
  double u, v, w;
  do {
    u = 2.0 * stream_.next_unit() - 1.0;
    v = 2.0 * stream_.next_unit() - 1.0;
    w = u * u + v * v;
  } while (w >= 1.0 || w == 0.0);
  const double t =
      u * std::sqrt(law_.df * (std::pow(w, -2.0 / law_.df) - 1.0) / w);
  return t * student_scale(law_.df);
}

}  // namespace bemc
