#include "bemc/trajectory.hpp"

#include <cstdio>

#include "bemc/errors.hpp"

namespace bemc {

Trajectory simulate(const ModelParams& theta, std::size_t n,
                    std::uint64_t seed) {
  theta.validate();
  if (n < 1) throw DomainError("simulate: n >= 1 required");
  Trajectory traj;
  traj.seed = seed;
  traj.theta = theta;
  traj.x.resize(n + 1);
  traj.x[0] = 0.0;
  InnovationSampler sampler(theta.innovation, seed);
  double x = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    x = theta.rho0 * x + theta.sigma(x) * sampler.next();
    traj.x[k] = x;
  }
  return traj;
}

Trajectory simulate_with_innovations(const ModelParams& theta,
                                     std::span<const double> eps) {
  theta.validate();
  Trajectory traj;
  traj.seed = 0;
  traj.theta = theta;
  traj.x.resize(eps.size() + 1);
  traj.x[0] = 0.0;
  double x = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!std::isfinite(eps[k])) {
      throw DomainError("simulate_with_innovations: non-finite innovation");
    }
    x = theta.rho0 * x + theta.sigma(x) * eps[k];
    traj.x[k + 1] = x;
  }
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  os << "k,x\n";
  char buf[40];
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.x[k]);
    os << k << ',' << buf << '\n';
  }
}

}  // namespace bemc
