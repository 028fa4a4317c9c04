#include "bemc/spectral.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "bemc/errors.hpp"
#include "bemc/theory.hpp"

namespace bemc {

GridSpec GridSpec::uniform(double L, int N) {
  if (!(L > 0.0)) {
    throw DomainError("GridSpec: L must be positive");
  }
  if (N < 3 || N % 2 == 0) {
    throw DomainError("GridSpec: N must be odd and >= 3");
  }
  GridSpec g;
  g.L = L;
  g.N = N;
  g.nodes.resize(N);
  g.weights.resize(N);
  const double step = 2.0 * L / (N - 1);
  for (int i = 0; i < N; ++i) {
    g.nodes[i] = -L + step * i;
    g.weights[i] = (i == 0 || i == N - 1) ? 0.5 * step : step;
  }
  return g;
}

GridSpec GridSpec::for_theta(const ModelParams& theta, int N, double L_mult) {
  const auto [m2, m4] = theory::stationary_moments(theta);
  (void)m4;
  return uniform(L_mult * std::sqrt(m2), N);
}

Eigen::MatrixXd build_transition(const GridSpec& grid,
                                 const ModelParams& theta) {
  const int n = grid.N;
  Eigen::MatrixXd k0(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.nodes[i];
    const double sig = theta.sigma(x);
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double z = (grid.nodes[j] - theta.rho0 * x) / sig;
      const double v = theta.innovation.density(z) / sig * grid.weights[j];
      k0(i, j) = v;
      row_sum += v;
    }
    if (!(row_sum > 0.0)) {
      throw NumericalError("build_transition: empty row at x=" +
                           std::to_string(x));
    }
    k0.row(i) /= row_sum;
  }
  return k0;
}

namespace {

double xi_value(const ModelParams& theta, FunctionalKind kind, double m_theta,
                double x, double y) {
  if (kind == FunctionalKind::Fprime) {
    return -2.0 * x * (y - theta.rho0 * x);
  }
  return 2.0 * x * x - m_theta;
}

}  // namespace

Eigen::MatrixXcd build_operator(const GridSpec& grid,
                                const Eigen::MatrixXd& k0,
                                const ModelParams& theta, FunctionalKind kind,
                                double t) {
  const int n = grid.N;
  const double m_theta = theory::m_of_theta(theta);
  Eigen::MatrixXcd k(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double phase = t * xi_value(theta, kind, m_theta, x, grid.nodes[j]);
      k(i, j) = std::polar(k0(i, j), phase);
    }
  }
  return k;
}

std::complex<double> dominant_eigenvalue(const Eigen::MatrixXcd& k, double tol,
                                         int max_iterations) {
  const Eigen::Index n = k.rows();
  if (n == 0 || k.cols() != n) {
    throw DomainError("dominant_eigenvalue: matrix must be square");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(
                                                          static_cast<double>(n)));
  std::complex<double> lambda(0.0, 0.0);
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXcd w = k * v;
    const std::complex<double> next = v.dot(w);
    const double norm = w.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw GapFailureError("dominant_eigenvalue: iterate collapsed");
    }
    v = w / norm;
    if (it > 0 &&
        std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  throw GapFailureError(
      "dominant_eigenvalue: power iteration failed to converge in " +
      std::to_string(max_iterations) + " iterations");
}

namespace {

struct Stencil {
  std::complex<double> lm2, lm1, l0, lp1, lp2;
};

Stencil eval_stencil(const GridSpec& grid, const Eigen::MatrixXd& k0,
                     const ModelParams& theta, FunctionalKind kind, double h,
                     const SpectralOptions& opts) {
  const auto lam = [&](double t) {
    return dominant_eigenvalue(build_operator(grid, k0, theta, kind, t),
                               opts.power_tol, opts.max_iterations);
  };
  Stencil s;
  s.lm2 = lam(-2.0 * h);
  s.lm1 = lam(-h);
  s.l0 = lam(0.0);
  s.lp1 = lam(h);
  s.lp2 = lam(2.0 * h);
  return s;
}

std::complex<double> second_derivative(const Stencil& s, double h) {
  return (-s.lp2 + 16.0 * s.lp1 - 30.0 * s.l0 + 16.0 * s.lm1 - s.lm2) /
         (12.0 * h * h);
}

std::complex<double> first_derivative(const Stencil& s, double h) {
  return (-s.lp2 + 8.0 * s.lp1 - 8.0 * s.lm1 + s.lm2) / (12.0 * h);
}

}  // namespace

SpectralReport spectral_report(const ModelParams& theta, FunctionalKind kind,
                               const SpectralOptions& opts) {
  theta.validate();
  const GridSpec grid = GridSpec::for_theta(theta, opts.N, opts.L_mult);
  const Eigen::MatrixXd k0 = build_transition(grid, theta);

  // Bootstrap pass: crude sigma^2 at the raw step fixes the scale of t so
  // the refined stencil balances truncation against cancellation.
  const Stencil coarse =
      eval_stencil(grid, k0, theta, kind, opts.h_init, opts);
  const double sigma_coarse =
      -second_derivative(coarse, opts.h_init).real();
  if (!(sigma_coarse > 0.0) || !std::isfinite(sigma_coarse)) {
    throw NumericalError(
        "spectral_report: nonpositive curvature at the bootstrap step");
  }
  const double h = opts.h_init / std::sqrt(sigma_coarse);
  const Stencil fine = eval_stencil(grid, k0, theta, kind, h, opts);

  SpectralReport report;
  report.theta_id = theta.id();
  report.functional = functional_name(kind);
  report.lambda0 = fine.l0.real();
  report.lambda_prime_abs = std::abs(first_derivative(fine, h));
  report.sigma_sq = -second_derivative(fine, h).real();
  report.h_used = h;
  report.L = grid.L;
  report.N = grid.N;

  if (opts.doubling_check) {
    const GridSpec grid2 = GridSpec::uniform(2.0 * grid.L, 2 * grid.N - 1);
    const Eigen::MatrixXd k02 = build_transition(grid2, theta);
    const Stencil dbl = eval_stencil(grid2, k02, theta, kind, h, opts);
    const double sigma2 = -second_derivative(dbl, h).real();
    report.doubling_rel_diff =
        std::abs(sigma2 - report.sigma_sq) / std::abs(report.sigma_sq);
    report.doubling_converged = report.doubling_rel_diff < 0.02;
  }
  return report;
}

std::string spectral_report_json(const SpectralReport& report) {
  nlohmann::json j;
  j["theta_id"] = report.theta_id;
  j["functional"] = report.functional;
  j["lambda0"] = report.lambda0;
  j["lambda_prime_abs"] = report.lambda_prime_abs;
  j["sigma_sq"] = report.sigma_sq;
  j["h_used"] = report.h_used;
  j["L"] = report.L;
  j["N"] = report.N;
  j["doubling_converged"] = report.doubling_converged;
  j["doubling_rel_diff"] = report.doubling_rel_diff;
  return j.dump(2) + "\n";
}

}  // namespace bemc
