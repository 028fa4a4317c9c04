#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bemc/errors.hpp"
#include "bemc/rng.hpp"
#include "bemc/spectral.hpp"
#include "bemc/theory.hpp"

using namespace bemc;

TEST_CASE("uniform grids carry trapezoid weights on an odd node count") {
  const GridSpec grid = GridSpec::uniform(3.0, 5);
  REQUIRE_EQ(grid.N, 5);
  CHECK_EQ(grid.nodes(0), -3.0);
  CHECK_EQ(grid.nodes(2), 0.0);
  CHECK_EQ(grid.nodes(4), 3.0);
  CHECK_EQ(grid.weights.sum(), doctest::Approx(6.0).epsilon(1e-14));

  CHECK_THROWS_AS(GridSpec::uniform(3.0, 4), DomainError);
  CHECK_THROWS_AS(GridSpec::uniform(3.0, 1), DomainError);
  CHECK_THROWS_AS(GridSpec::uniform(-1.0, 5), DomainError);

  const GridSpec fitted = GridSpec::for_theta(make_theta(0.3, 1.0, 0.1), 201);
  const double m2 = theory::stationary_moments(make_theta(0.3, 1.0, 0.1)).first;
  CHECK_EQ(fitted.L, doctest::Approx(12.0 * std::sqrt(m2)).epsilon(1e-14));
  CHECK_EQ(fitted.weights.sum(), doctest::Approx(2.0 * fitted.L).epsilon(1e-12));
}

TEST_CASE("the discretized kernel is row stochastic after renormalization") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.1);
  const GridSpec grid = GridSpec::for_theta(theta, 201);
  const Eigen::MatrixXd k0 = build_transition(grid, theta);
  for (int i = 0; i < grid.N; ++i) {
    CHECK(std::abs(k0.row(i).sum() - 1.0) <= 1e-14);
    CHECK(k0.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("fourier perturbation preserves entrywise modulus") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.1);
  const GridSpec grid = GridSpec::for_theta(theta, 101);
  const Eigen::MatrixXd k0 = build_transition(grid, theta);
  const Eigen::MatrixXcd kt =
      build_operator(grid, k0, theta, FunctionalKind::Fprime, 0.37);
  CHECK((kt.cwiseAbs() - k0).cwiseAbs().maxCoeff() <= 1e-14);

  const Eigen::MatrixXcd k_zero =
      build_operator(grid, k0, theta, FunctionalKind::Fprime, 0.0);
  CHECK((k_zero - k0.cast<std::complex<double>>()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("power iteration finds the Perron root of a hand matrix") {
  Eigen::MatrixXcd k(2, 2);
  k << 0.9, 0.1, 0.2, 0.8;
  const std::complex<double> lambda = dominant_eigenvalue(k, 1e-12, 10000);
  CHECK(std::abs(lambda - std::complex<double>(1.0, 0.0)) <= 1e-12);
  // The other eigenvalue (trace minus one) must not be the one returned.
  CHECK(std::abs(lambda) > 0.75);

  CHECK_THROWS_AS(dominant_eigenvalue(k, 1e-12, 1), GapFailureError);
}

TEST_CASE("power iteration matches a dense eigensolver on random operators") {
  rng::Stream stream(2718);
  for (int instance = 0; instance < 3; ++instance) {
    const int n = 50;
    Eigen::MatrixXcd k(n, n);
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double mag = stream.next_unit();
        k(i, j) = mag;
        row_sum += mag;
      }
      for (int j = 0; j < n; ++j) {
        const double phase = 0.15 * (2.0 * stream.next_unit() - 1.0);
        k(i, j) = (k(i, j).real() / row_sum) * std::polar(1.0, phase);
      }
    }
    const std::complex<double> lambda = dominant_eigenvalue(k, 1e-13, 100000);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(k);
    std::complex<double> oracle = 0.0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(solver.eigenvalues()(j)) > std::abs(oracle)) {
        oracle = solver.eigenvalues()(j);
      }
    }
    CHECK(std::abs(lambda - oracle) <= 1e-9);
  }
}

TEST_CASE("lambda is conjugate symmetric in t") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.1);
  const GridSpec grid = GridSpec::for_theta(theta, 301);
  const Eigen::MatrixXd k0 = build_transition(grid, theta);
  for (double t : {0.05, 0.1}) {
    const std::complex<double> plus = dominant_eigenvalue(
        build_operator(grid, k0, theta, FunctionalKind::Fprime, t), 1e-13,
        100000);
    const std::complex<double> minus = dominant_eigenvalue(
        build_operator(grid, k0, theta, FunctionalKind::Fprime, -t), 1e-13,
        100000);
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-10);
  }
}

TEST_CASE("spectral report reproduces the Lemma surface and the variance") {
  SpectralOptions opts;
  opts.N = 301;
  for (const ModelParams& theta :
       {make_theta(0.0, 1.0, 0.0), make_theta(0.3, 1.0, 0.1)}) {
    const SpectralReport rep =
        spectral_report(theta, FunctionalKind::Fprime, opts);
    CHECK(std::abs(rep.lambda0 - 1.0) <= 1e-8);
    CHECK(rep.lambda_prime_abs <= 1e-4);
    CHECK(rep.sigma_sq > 0.0);
    const double want = theory::sigma1_sq(theta);
    CHECK(std::abs(rep.sigma_sq - want) <= 0.1 * want);
    CHECK(rep.doubling_converged);
    CHECK(rep.doubling_rel_diff < 0.02);
    CHECK(rep.h_used > 0.0);
    CHECK_EQ(rep.functional, "fprime");
  }
}

TEST_CASE("the centered second derivative matches the v-recursion variance") {
  const ModelParams theta = make_theta(0.3, 1.0, 0.1);
  SpectralOptions opts;
  opts.N = 301;
  const SpectralReport rep =
      spectral_report(theta, FunctionalKind::Fsecond_centered, opts);
  const double want = theory::sigma2_structure(theta).sigma2_sq;
  CHECK(std::abs(rep.sigma_sq - want) <= 0.1 * want);
  CHECK_EQ(rep.functional, "fsecond");
}

TEST_CASE("spectral report serializes its fields") {
  SpectralOptions opts;
  opts.N = 101;
  opts.doubling_check = false;
  const SpectralReport rep =
      spectral_report(make_theta(0.0, 1.0, 0.0), FunctionalKind::Fprime, opts);
  const std::string json = spectral_report_json(rep);
  CHECK(json.find("\"lambda0\"") != std::string::npos);
  CHECK(json.find("\"sigma_sq\"") != std::string::npos);
  CHECK(json.find("\"doubling_converged\"") != std::string::npos);
}
