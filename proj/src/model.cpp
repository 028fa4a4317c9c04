#include "bemc/model.hpp"

#include <cstdio>

#include "bemc/errors.hpp"

namespace bemc {

void ModelParams::validate() const {
  if (!(std::abs(rho0) < 1.0)) {
    throw DomainError("ModelParams: |rho0| < 1 required, got rho0=" +
                      std::to_string(rho0));
  }
  if (!(a0 > 0.0)) {
    throw DomainError("ModelParams: a0 > 0 required, got a0=" +
                      std::to_string(a0));
  }
  if (!(b0 >= 0.0 && b0 < 1.0)) {
    throw DomainError("ModelParams: b0 in [0,1) required, got b0=" +
                      std::to_string(b0));
  }
  if (!(rho0 * rho0 + b0 < 1.0)) {
    throw DomainError("ModelParams: rho0^2 + b0 < 1 required (second moment)");
  }
  if (!(p > 0.0)) {
    throw DomainError("ModelParams: moment order p must be positive");
  }
  if (!innovation.has_moment(p)) {
    throw MomentOrderError("ModelParams: innovation " + innovation.name() +
                           " lacks moment order p=" + std::to_string(p));
  }
}

bool ModelParams::fourth_moment_ok() const {
  const double e4 = innovation.fourth_moment();
  return 1.0 - std::pow(rho0, 4) - 6.0 * rho0 * rho0 * b0 - e4 * b0 * b0 > 0.0;
}

std::string ModelParams::id() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "r=%g;a=%g;b=%g", rho0, a0, b0);
  return buf;
}

ModelParams make_theta(double rho0, double a0, double b0, InnovationLaw law,
                       double p) {
  ModelParams t{rho0, a0, b0, law, p};
  t.validate();
  return t;
}

void ParamBox::validate_fields() const {
  if (!(rho_bar > 0.0 && rho_bar < 1.0)) {
    throw DomainError("ParamBox: rho_bar in (0,1) required");
  }
  if (!(0.0 < m_a && m_a < M_a)) {
    throw DomainError("ParamBox: 0 < m_a < M_a required");
  }
  if (!(0.0 < m_b && m_b < M_b && M_b < 1.0)) {
    throw DomainError("ParamBox: 0 < m_b < M_b < 1 required");
  }
  if (!(p > 0.0)) {
    throw DomainError("ParamBox: p must be positive");
  }
  for (const auto& t : grid) {
    t.validate();
    if (std::abs(t.rho0) > rho_bar || t.a0 < m_a || t.a0 > M_a ||
        t.b0 < m_b || t.b0 > M_b) {
      throw DomainError("ParamBox: grid point " + t.id() + " outside the box");
    }
  }
}

ParamBox ParamBox::lattice(double rho_bar, double m_a, double M_a, double m_b,
                           double M_b, double p, int nr, int na, int nb,
                           InnovationLaw law) {
  ParamBox box{rho_bar, m_a, M_a, m_b, M_b, p, law, {}};
  auto linspace = [](double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return v;
  };
  for (double r : linspace(-rho_bar, rho_bar, nr)) {
    for (double a : linspace(m_a, M_a, na)) {
      for (double b : linspace(m_b, M_b, nb)) {
        box.grid.push_back(ModelParams{r, a, b, law, p});
      }
    }
  }
  box.validate_fields();
  return box;
}

}  // namespace bemc
