#pragma once

#include <functional>

#include "bemc/errors.hpp"
#include "bemc/summation.hpp"
#include "bemc/trajectory.hpp"

namespace bemc {

// Criterion built from a functional F(alpha, x, y) and its alpha-derivatives,
// defined on an open interval A = (a_lo, a_hi).
struct Criterion {
  std::function<double(double, double, double)> F;
  std::function<double(double, double, double)> F_prime;
  std::function<double(double, double, double)> F_second;
  double a_lo = -1.0;
  double a_hi = 1.0;

  bool contains(double alpha) const { return alpha > a_lo && alpha < a_hi; }
};

namespace detail {

// Fixed-bracketing pairwise reduction of term(k), k in [lo, hi). The bracket
// tree depends only on the index range, so the value is independent of how
// callers might batch or thread the terms.
template <typename Term>
double pairwise_terms(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 16) {
    CompensatedSum s;
    for (std::size_t k = lo; k < hi; ++k) s.add(term(k));
    return s.value();
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_terms(lo, mid, term) + pairwise_terms(mid, hi, term);
}

template <typename Fn>
double empirical_mean(const Fn& f, const Trajectory& traj, double alpha) {
  const std::size_t n = traj.n();
  if (n < 1) throw DomainError("criterion: trajectory has no transitions");
  const auto term = [&](std::size_t k) {
    return f(alpha, traj.x[k], traj.x[k + 1]);
  };
  return pairwise_terms(0, n, term) / static_cast<double>(n);
}

}  // namespace detail

// M_n(alpha) = (1/n) sum F(alpha, X_{k-1}, X_k).
inline double criterion_value(const Criterion& crit, const Trajectory& traj,
                              double alpha) {
  if (!crit.contains(alpha)) {
    throw DomainError("criterion_value: alpha outside the domain A");
  }
  return detail::empirical_mean(crit.F, traj, alpha);
}

inline double m_prime(const Criterion& crit, const Trajectory& traj,
                      double alpha) {
  if (!crit.contains(alpha)) {
    throw DomainError("m_prime: alpha outside the domain A");
  }
  return detail::empirical_mean(crit.F_prime, traj, alpha);
}

inline double m_second(const Criterion& crit, const Trajectory& traj,
                       double alpha) {
  if (!crit.contains(alpha)) {
    throw DomainError("m_second: alpha outside the domain A");
  }
  return detail::empirical_mean(crit.F_second, traj, alpha);
}

}  // namespace bemc
