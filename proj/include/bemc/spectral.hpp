#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "bemc/model.hpp"
#include "bemc/samples.hpp"

namespace bemc {

// Uniform quadrature grid on [-L, L] with trapezoid weights (sum 2L). N must
// be odd so that 0 is a node.
struct GridSpec {
  double L = 0.0;
  int N = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  static GridSpec uniform(double L, int N);
  // L = L_mult * sqrt(m2(theta)) covers all but a negligible sliver of the
  // stationary mass.
  static GridSpec for_theta(const ModelParams& theta, int N = 601,
                            double L_mult = 12.0);
};

struct SpectralOptions {
  int N = 601;
  double L_mult = 12.0;
  // First-pass step; the second pass rescales it by the curvature estimate.
  double h_init = 1e-2;
  double power_tol = 1e-12;
  int max_iterations = 20000;
  bool doubling_check = true;
};

struct SpectralReport {
  std::string theta_id;
  std::string functional;
  double lambda0 = 0.0;
  double lambda_prime_abs = 0.0;
  double sigma_sq = 0.0;  // -Re lambda''(0)
  double h_used = 0.0;
  double L = 0.0;
  int N = 0;
  bool doubling_converged = false;
  double doubling_rel_diff = 0.0;
};

// Discretized transition kernel K0[i][j] ~ q(x_i, x_j) w_j with every row
// renormalized to sum exactly 1, so the dominant eigenvalue at t=0 is 1 by
// construction rather than up to quadrature error.
Eigen::MatrixXd build_transition(const GridSpec& grid,
                                 const ModelParams& theta);

// Fourier perturbation K(t)[i][j] = exp(i t xi(x_i, x_j)) K0[i][j] with
// xi = F'(rho0; x, y) or 2x^2 - m(theta).
Eigen::MatrixXcd build_operator(const GridSpec& grid,
                                const Eigen::MatrixXd& k0,
                                const ModelParams& theta, FunctionalKind kind,
                                double t);

// Power iteration with Rayleigh-quotient readout; the phase ambiguity of the
// iterate does not touch the quotient. Throws GapFailureError when the
// eigenvalue sequence fails to settle, the numerical symptom of a closing
// spectral gap.
std::complex<double> dominant_eigenvalue(const Eigen::MatrixXcd& k, double tol,
                                         int max_iterations);

// lambda(0), |lambda'(0)|, and sigma^2 = -lambda''(0) by five-point central
// differences at step h, with h chosen as h_init/sigma after one bootstrap
// pass. The doubling check repeats the stencil on a (2L, 2N-1) grid and
// flags agreement within 2%.
SpectralReport spectral_report(const ModelParams& theta, FunctionalKind kind,
                               const SpectralOptions& opts = {});

std::string spectral_report_json(const SpectralReport& report);

}  // namespace bemc
