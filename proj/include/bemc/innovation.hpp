#pragma once

#include <cstdint>
#include <string>

#include "bemc/rng.hpp"

namespace bemc {

// Innovation law of the recursion. Every law is normalized to mean 0 and
// variance 1; the scaled Student-t divides a t(df) variate by its standard
// deviation sqrt(df/(df-2)).
struct InnovationLaw {
  enum class Kind { standard_gaussian, scaled_student };

  Kind kind = Kind::standard_gaussian;
  int df = 0;  // only for scaled_student

  static InnovationLaw gaussian();
  static InnovationLaw student(int df);  // requires df > 12

  double density(double y) const;

  // E[eps^4]: 3 for Gaussian, 3(df-2)/(df-4) for scaled Student-t.
  double fourth_moment() const;

  // True iff E|eps|^p is finite.
  bool has_moment(double p) const;

  // Upper bound on the two-sided tail mass of (1+|y|)^p f(y) beyond |y|=T.
  double tail_bound(double p, double T) const;

  // Smallest T (doubling search) whose tail_bound is below tail_tol.
  double support_halfwidth(double p, double tail_tol) const;

  // integral of (1+|y|)^p f(y) dy by adaptive Simpson, absolute tolerance
  // abs_tol, truncated where the tail bound is below abs_tol/100.
  double weighted_polynomial_mass(double p, double abs_tol) const;

  std::string name() const;
};

// Draws from one law on one reproducible stream. Owns the Box-Muller spare,
// so a sampler is per-replication state, never shared.
class InnovationSampler {
 public:
  InnovationSampler(const InnovationLaw& law, std::uint64_t seed)
      : law_(law), stream_(seed) {}

  double next();

  rng::Stream& stream() { return stream_; }

 private:
  double next_gaussian();
  double next_student();

  InnovationLaw law_;
  rng::Stream stream_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bemc
