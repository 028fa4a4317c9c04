#pragma once

#include <string>
#include <vector>

#include "bemc/model.hpp"

namespace bemc {

struct DriftReport {
  double iota = 0.0;
  double varrho = 0.0;   // contraction factor used for the search, (iota+1)/2
  double s = 0.0;        // small-set radius found, S = [-s, s]
  double varsigma = 0.0; // sup of QV over S and the box grid
  double minorization_mass = 0.0;
  bool iota_pass = false;
  bool drift_pass = false;
  bool minorization_pass = false;
  bool pass = false;
};

// iota = (rho_bar + sqrt(M_b))^p * integral (1+|y|)^p f_eps(y) dy, the
// contraction bound for V(x) = (1+|x|)^p at infinity. Quadrature carries an
// absolute tolerance of 1e-8 on the integral factor.
double check_iota(const ParamBox& box);

// Verifies the geometric-drift package on the box: iota < 1, a radius s from
// s_grid with sup_{|x| >= s, theta} QV(x)/V(x) <= (iota+1)/2, the constant
// varsigma = sup_{|x| <= s, theta} QV(x), and a positive minorization mass
// for the uniform component of Q on S = [-s, s]. A missing radius yields a
// fail verdict, not an exception.
DriftReport check_drift(const ParamBox& box, double p,
                        const std::vector<double>& s_grid);
DriftReport check_drift(const ParamBox& box);

// Ratio QV(x)/V(x) for one theta, evaluated by adaptive quadrature with the
// innovation tail truncated below 1e-10 of the ratio scale. Exposed for
// tests.
double drift_ratio(const ModelParams& theta, double x, double p);

std::string drift_report_json(const DriftReport& report);

}  // namespace bemc
