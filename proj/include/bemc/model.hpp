#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bemc/innovation.hpp"

namespace bemc {

// One parameter point theta = (rho0, a0, b0) with its innovation law and the
// declared moment order p (p > 6 for rho-hat results, p > 12 for b-hat).
struct ModelParams {
  double rho0 = 0.0;
  double a0 = 1.0;
  double b0 = 0.0;
  InnovationLaw innovation = InnovationLaw::gaussian();
  double p = 7.0;

  double sigma_sq(double x) const { return a0 + b0 * x * x; }
  double sigma(double x) const { return std::sqrt(sigma_sq(x)); }

  // Throws DomainError when any invariant fails.
  void validate() const;

  // True iff the Gaussian-kurtosis fourth-moment condition
  // 1 - rho^4 - 6 rho^2 b - E[eps^4] b^2 > 0 holds.
  bool fourth_moment_ok() const;

  std::string id() const;
};

ModelParams make_theta(double rho0, double a0, double b0,
                       InnovationLaw law = InnovationLaw::gaussian(),
                       double p = 7.0);

// Compact box Theta = [-rho_bar, rho_bar] x [m_a, M_a] x [m_b, M_b] with a
// finite evaluation grid.
struct ParamBox {
  double rho_bar = 0.1;
  double m_a = 0.5;
  double M_a = 1.0;
  double m_b = 0.01;
  double M_b = 0.04;
  double p = 7.0;
  InnovationLaw innovation = InnovationLaw::gaussian();
  std::vector<ModelParams> grid;

  // Fills grid with an nr x na x nb lattice (rho outermost, b innermost)
  // spanning the box, and validates every point.
  static ParamBox lattice(double rho_bar, double m_a, double M_a, double m_b,
                          double M_b, double p, int nr = 5, int na = 3,
                          int nb = 3,
                          InnovationLaw law = InnovationLaw::gaussian());

  void validate_fields() const;  // box bounds only, not the iota condition
};

}  // namespace bemc
