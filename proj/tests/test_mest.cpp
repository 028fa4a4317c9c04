#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bemc/criterion.hpp"
#include "bemc/errors.hpp"
#include "bemc/estimators.hpp"
#include "bemc/minimize.hpp"
#include "bemc/theory.hpp"
#include "bemc/trajectory.hpp"

using namespace bemc;

namespace {

Criterion least_squares(double lo = -1.0, double hi = 1.0) {
  Criterion crit;
  crit.F = [](double a, double x, double y) {
    const double r = y - a * x;
    return r * r;
  };
  crit.F_prime = [](double a, double x, double y) {
    return -2.0 * x * (y - a * x);
  };
  crit.F_second = [](double, double x, double) { return 2.0 * x * x; };
  crit.a_lo = lo;
  crit.a_hi = hi;
  return crit;
}

Criterion data_free_parabola() {
  Criterion crit;
  crit.F = [](double a, double, double) { return (a - 1.0) * (a - 1.0); };
  crit.F_prime = [](double a, double, double) { return 2.0 * (a - 1.0); };
  crit.F_second = [](double, double, double) { return 2.0; };
  crit.a_lo = 0.0;
  crit.a_hi = 2.0;
  return crit;
}

Trajectory path(std::vector<double> x) {
  Trajectory t;
  t.x = std::move(x);
  t.theta = make_theta(0.0, 1.0, 0.0);
  return t;
}

// Zero-residual construction: (x_k - r x_{k-1})^2 = v(1-r^2-b) + b x_{k-1}^2
// by choosing the innovation magnitude exactly, with alternating signs.
Trajectory zero_residual_path(double r, double v, double b, int n) {
  std::vector<double> x(n + 1, 0.0);
  double sign = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double prev = x[k - 1];
    const double step = std::sqrt(v * (1.0 - r * r - b) + b * prev * prev);
    x[k] = r * prev + sign * step;
    sign = -sign;
  }
  return path(std::move(x));
}

struct QuadSums {
  double scc = 0.0;
  double scd = 0.0;
  double sdd = 0.0;
};

// Plain-loop coefficients of n T_n(b) = scc + 2 b scd + b^2 sdd, used as the
// oracle side of grid comparisons.
QuadSums quad_sums(const Trajectory& traj, double r, double v) {
  QuadSums q;
  for (std::size_t k = 1; k < traj.x.size(); ++k) {
    const double u = traj.x[k - 1];
    const double w = traj.x[k] - r * u;
    const double c = w * w - v * (1.0 - r * r);
    const double d = v - u * u;
    q.scc += c * c;
    q.scd += c * d;
    q.sdd += d * d;
  }
  return q;
}

}  // namespace

TEST_CASE("criterion value on hand examples") {
  const Trajectory t = path({0.0, 1.0, 2.0});
  const Criterion ls = least_squares(-3.0, 3.0);
  CHECK_EQ(criterion_value(ls, t, 0.0), doctest::Approx(2.5).epsilon(1e-15));

  const Criterion parab = data_free_parabola();
  CHECK_EQ(criterion_value(parab, t, 0.25),
           doctest::Approx(0.5625).epsilon(1e-15));
  CHECK_THROWS_AS(criterion_value(parab, t, -0.5), DomainError);
  CHECK_THROWS_AS(criterion_value(parab, t, 2.0), DomainError);
}

TEST_CASE("companion derivatives on hand examples") {
  const Trajectory t = path({0.0, 1.0, 2.0});
  const Criterion ls = least_squares(-3.0, 3.0);
  CHECK_EQ(m_prime(ls, t, 2.0), doctest::Approx(0.0).epsilon(1e-15));
  CHECK_EQ(m_second(ls, t, 0.7), doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("criterion matches a naive loop on simulated data") {
  const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.1), 2000, 11);
  const Criterion ls = least_squares();
  const double alpha = 0.17;
  long double naive = 0.0L;
  for (std::size_t k = 1; k < traj.x.size(); ++k) {
    const long double r = traj.x[k] - alpha * traj.x[k - 1];
    naive += r * r;
  }
  naive /= static_cast<long double>(traj.n());
  const double got = criterion_value(ls, traj, alpha);
  CHECK(std::abs(got - static_cast<double>(naive)) <=
        1e-12 * std::abs(static_cast<double>(naive)));
}

TEST_CASE("finite differences certify the companion functions") {
  const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.1), 500, 7);
  const Criterion ls = least_squares();
  const double alpha = 0.2;
  const double h = 1e-5;
  const double fd_prime = (criterion_value(ls, traj, alpha + h) -
                           criterion_value(ls, traj, alpha - h)) /
                          (2.0 * h);
  CHECK(std::abs(fd_prime - m_prime(ls, traj, alpha)) <= 1e-6);
  const double fd_second =
      (m_prime(ls, traj, alpha + h) - m_prime(ls, traj, alpha - h)) /
      (2.0 * h);
  CHECK(std::abs(fd_second - m_second(ls, traj, alpha)) <= 1e-6);
}

TEST_CASE("minimize finds the analytic minimum of the parabola") {
  const Trajectory t = path({0.0, 1.0});
  const EstimationResult res = minimize(data_free_parabola(), t, 0.0);
  CHECK(std::abs(res.alpha_hat - 1.0) <= 1e-9);
  CHECK(res.criterion_value <= 1e-16);
  CHECK(std::abs(res.m_prime_at_hat) <= 1e-8);
  CHECK(res.iterations > 0);
  CHECK_EQ(res.c_n_used, 0.0);
}

TEST_CASE("the minimization tolerance contract holds") {
  const Trajectory t = path({0.0, 1.0});
  const EstimationResult res = minimize(data_free_parabola(), t, 0.1);
  CHECK(res.criterion_value <= 0.1);
  CHECK_EQ(res.c_n_used, 0.1);
  CHECK_THROWS_AS(minimize(data_free_parabola(), t, -0.01), DomainError);
}

TEST_CASE("minimize matches the grid minimum up to c_n on random paths") {
  const MinimizeOptions opts;
  for (std::uint64_t seed : {1, 2, 3}) {
    const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.1), 200, seed);
    const Criterion ls = least_squares();
    const EstimationResult res = minimize(ls, traj, 0.0, opts);

    // Replicate the internal coarse grid to check the Eq.-style contract.
    double grid_min = std::numeric_limits<double>::infinity();
    const double step = (ls.a_hi - ls.a_lo) / opts.grid_points;
    for (int i = 0; i < opts.grid_points; ++i) {
      grid_min = std::min(grid_min,
                          criterion_value(ls, traj, ls.a_lo + (i + 0.5) * step));
    }
    CHECK(res.criterion_value <= grid_min + res.c_n_used);

    // The least-squares minimizer has a closed form to compare against. The
    // search sees the full criterion, whose alpha-independent part limits
    // value comparisons to a plateau of half-width sqrt(ulp(M_n)/M_n''),
    // about 1.5e-8 here.
    CHECK(std::abs(res.alpha_hat - rho_hat(traj)) <= 5e-8);
    CHECK(std::abs(res.m_prime_at_hat) <= 1e-6);
  }
}

TEST_CASE("minimize agrees with a dense grid oracle") {
  for (std::uint64_t seed : {5, 6}) {
    const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.1), 200, seed);
    const Criterion ls = least_squares();
    const EstimationResult res = minimize(ls, traj, 0.0);

    // The criterion is the quadratic (syy - 2 a sxy + a^2 sxx)/n; scanning a
    // million points of that closed form is the oracle.
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 1; k < traj.x.size(); ++k) {
      sxx += traj.x[k - 1] * traj.x[k - 1];
      sxy += traj.x[k - 1] * traj.x[k];
      syy += traj.x[k] * traj.x[k];
    }
    const int points = 1000000;
    const double step = (ls.a_hi - ls.a_lo) / points;
    double best = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (int i = 0; i <= points; ++i) {
      const double a = ls.a_lo + i * step;
      const double val = syy - 2.0 * a * sxy + a * a * sxx;
      if (val < best) {
        best = val;
        best_a = a;
      }
    }
    CHECK(std::abs(res.alpha_hat - best_a) <= 2.0 * step);
  }
}

TEST_CASE("non-finite criterion values are reported with the offending point") {
  Criterion crit = data_free_parabola();
  crit.F = [](double a, double, double) {
    return a > 1.5 ? std::numeric_limits<double>::infinity() : (a - 1.0) * (a - 1.0);
  };
  const Trajectory t = path({0.0, 1.0});
  CHECK_THROWS_AS(minimize(crit, t, 0.0), NumericalError);
}

TEST_CASE("rho_hat on hand examples") {
  CHECK_EQ(rho_hat(path({0.0, 1.0, 2.0})), doctest::Approx(2.0).epsilon(1e-15));
  // Noiseless geometric path with injected nonzero start.
  CHECK_EQ(rho_hat(path({1.0, 0.7, 0.49})),
           doctest::Approx(0.7).epsilon(1e-14));
  const std::vector<double> zeros(20, 0.0);
  CHECK_THROWS_AS(rho_hat(simulate_with_innovations(make_theta(0.5, 1.0, 0.0),
                                                    zeros)),
                  DegenerateDataError);
}

TEST_CASE("rho_hat is consistent at Monte Carlo scale") {
  const Trajectory traj = simulate(make_theta(0.5, 1.0, 0.2), 100000, 424242);
  CHECK(std::abs(rho_hat(traj) - 0.5) < 0.02);
}

TEST_CASE("tau_hat_sq on hand examples and at scale") {
  CHECK_EQ(tau_hat_sq(path({0.0, 1.0, 2.0})),
           doctest::Approx(2.5).epsilon(1e-15));
  const std::vector<double> zeros(20, 0.0);
  CHECK_EQ(tau_hat_sq(simulate_with_innovations(make_theta(0.5, 1.0, 0.0),
                                                zeros)),
           0.0);
  const Trajectory traj = simulate(make_theta(0.0, 1.0, 0.0), 100000, 5150);
  CHECK(std::abs(tau_hat_sq(traj) - 1.0) <= 0.02);
}

TEST_CASE("least squares is scale equivariant") {
  const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.2), 400, 99);
  Trajectory scaled = traj;
  for (double& x : scaled.x) {
    x *= 3.0;
  }
  CHECK(std::abs(rho_hat(scaled) - rho_hat(traj)) <= 1e-14);
  CHECK(std::abs(tau_hat_sq(scaled) - 9.0 * tau_hat_sq(traj)) <=
        1e-13 * tau_hat_sq(scaled));

  const double r = rho_hat(traj);
  const double v = tau_hat_sq(traj);
  const EstimationResult plain = b_hat(traj, r, v, 0.05, 0.5);
  const EstimationResult big = b_hat(scaled, r, 9.0 * v, 0.05, 0.5);
  CHECK(std::abs(plain.alpha_hat - big.alpha_hat) <= 1e-8);
}

TEST_CASE("b_hat recovers the injected value on zero-residual data") {
  const double r = 0.3;
  const double v = 2.0;
  const double b_star = 0.2;
  const Trajectory traj = zero_residual_path(r, v, b_star, 64);
  const EstimationResult res = b_hat(traj, r, v, 0.05, 0.5);
  CHECK(std::abs(res.alpha_hat - b_star) <= 1e-8);
  // Residuals vanish by construction, so the minimum value is numerically 0.
  const QuadSums q = quad_sums(traj, r, v);
  CHECK(res.criterion_value <= 1e-10 * q.scc / traj.n());
}

TEST_CASE("b_hat matches a million-point grid on random trajectories") {
  const double lo = 0.05;
  const double hi = 0.5;
  for (std::uint64_t seed : {21, 22, 23}) {
    const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.2), 500, seed);
    const double r = rho_hat(traj);
    const double v = tau_hat_sq(traj);
    const EstimationResult res = b_hat(traj, r, v, lo, hi);

    const QuadSums q = quad_sums(traj, r, v);
    const int points = 1000000;
    const double step = (hi - lo) / points;
    double best = std::numeric_limits<double>::infinity();
    double best_b = lo;
    for (int i = 0; i <= points; ++i) {
      const double b = lo + i * step;
      const double val = q.scc + b * (2.0 * q.scd + b * q.sdd);
      if (val < best) {
        best = val;
        best_b = b;
      }
    }
    CHECK(std::abs(res.alpha_hat - best_b) <= 2.0 * step);
  }
}

TEST_CASE("b_hat is consistent at Monte Carlo scale") {
  const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.2), 100000, 777);
  const EstimationResult res =
      b_hat(traj, rho_hat(traj), tau_hat_sq(traj), 0.05, 0.5);
  CHECK(std::abs(res.alpha_hat - 0.2) < 0.05);
}

TEST_CASE("b_hat rejects degenerate and malformed inputs") {
  // All lagged states sitting exactly at +-sqrt(v) kill the quadratic term.
  const Trajectory flat = path({1.5, -1.5, 1.5, 1.5});
  CHECK_THROWS_AS(b_hat(flat, 0.0, 2.25, 0.05, 0.5), DegenerateDataError);

  const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.2), 100, 1);
  CHECK_THROWS_AS(b_hat(traj, 0.3, std::nan(""), 0.05, 0.5), DomainError);
  CHECK_THROWS_AS(b_hat(traj, 0.3, 1.0, 0.5, 0.05), DomainError);
  CHECK_THROWS_AS(b_hat(traj, 0.3, 1.0, 0.05, 1.5), DomainError);
}

TEST_CASE("the v3 decomposition is an exact identity") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.2);
  const double tausq0 = 0.5 * theory::m_of_theta(theta);
  for (std::uint64_t seed : {31, 32, 33, 34, 35}) {
    const Trajectory traj = simulate(theta, 300, seed);
    const EstimationResult est =
        b_hat(traj, rho_hat(traj), tau_hat_sq(traj), 0.05, 0.5);
    const V3Decomposition dec =
        v3_residual(traj, theta.rho0, tausq0, est.alpha_hat);
    CHECK_EQ(dec.m_prime_abs, std::abs(dec.m_prime));
    const double sum = dec.a_n + dec.delta1 + dec.delta2 + dec.delta3;
    const double scale = std::abs(dec.a_n) + std::abs(dec.delta1) +
                         std::abs(dec.delta2) + std::abs(dec.delta3) +
                         std::abs(dec.m_prime) + 1e-30;
    CHECK(std::abs(sum - dec.m_prime) <= 1e-9 * scale);
  }
}

TEST_CASE("the v3 identity survives an injected nonzero start") {
  Trajectory t = path({1.3, -0.4, 2.0, 0.7, -1.1, 0.2});
  const V3Decomposition dec = v3_residual(t, 0.2, 0.9, 0.15);
  const double sum = dec.a_n + dec.delta1 + dec.delta2 + dec.delta3;
  CHECK(std::abs(sum - dec.m_prime) <=
        1e-9 * (std::abs(dec.m_prime) + 1.0));
}

TEST_CASE("the least-squares first-order condition is exact") {
  const Criterion ls = least_squares();
  for (std::uint64_t seed : {41, 42}) {
    const Trajectory traj = simulate(make_theta(0.3, 1.0, 0.1), 4000, seed);
    CHECK(std::abs(m_prime(ls, traj, rho_hat(traj))) < 1e-9);
  }
}

TEST_CASE("running moment sums reproduce prefix estimates at checkpoints") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.2);
  const Trajectory traj = simulate(theta, 1000, 4711);
  LsMomentSums sums;
  const std::vector<std::size_t> checkpoints = {250, 500, 1000};
  std::size_t next = 0;
  for (std::size_t k = 1; k <= 1000; ++k) {
    sums.add(traj.x[k - 1], traj.x[k]);
    if (next < checkpoints.size() && k == checkpoints[next]) {
      Trajectory prefix;
      prefix.theta = theta;
      prefix.x.assign(traj.x.begin(), traj.x.begin() + k + 1);

      const double r_direct = rho_hat(prefix);
      const double v_direct = tau_hat_sq(prefix);
      CHECK(std::abs(sums.rho() - r_direct) <= 1e-13 * std::abs(r_direct));
      CHECK(std::abs(sums.tausq() - v_direct) <= 1e-13 * v_direct);

      const EstimationResult direct =
          b_hat(prefix, r_direct, v_direct, 0.05, 0.5);
      const double closed = sums.bhat_closed(r_direct, v_direct, 0.05, 0.5);
      CHECK(std::abs(closed - direct.alpha_hat) <= 1e-8);
      ++next;
    }
  }
  CHECK_EQ(sums.count(), 1000);
}
