#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "bemc/model.hpp"

namespace bemc {

// A simulated path X_0..X_n started at the Dirac mass at zero, together with
// its seed provenance. Deterministic function of (seed, theta, n).
struct Trajectory {
  std::vector<double> x;  // length n+1, x[0] = 0
  std::uint64_t seed = 0;
  ModelParams theta;

  std::size_t n() const { return x.empty() ? 0 : x.size() - 1; }
};

Trajectory simulate(const ModelParams& theta, std::size_t n,
                    std::uint64_t seed);

// Applies the recursion verbatim to supplied innovations (test injection).
Trajectory simulate_with_innovations(const ModelParams& theta,
                                     std::span<const double> eps);

// CSV with header `k,x`, one row per state.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace bemc
