#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bemc/model.hpp"
#include "bemc/samples.hpp"

namespace bemc {

enum class Correction { none, log };

const char* correction_name(Correction c);
Correction correction_from_name(const std::string& name);

struct CurvePoint {
  std::int64_t n = 0;
  double d = 0.0;  // Kolmogorov distance at this n
};

struct BECurve {
  std::string theta_scope;  // single theta id or "sup"
  std::string estimator;    // rho, b, fprime, fsecond, or a synthetic label
  std::int64_t R = 0;
  std::vector<CurvePoint> points;  // sorted ascending in n
  double slope = 0.0;
  double intercept = 0.0;
  Correction correction = Correction::none;
};

// Least squares of log D on log n (correction none, slope near -1/2 under a
// root-n rate), or of log(D sqrt(n) / log n) on log n (correction log, slope
// near 0 when D behaves like log n / sqrt(n)). Fills curve.slope/intercept
// and returns them.
std::pair<double, double> rate_fit(BECurve& curve);

// max over points of sqrt(n) D divided by the min.
double sqrtn_stability_ratio(const BECurve& curve);

// Ladder samples -> Kolmogorov distances -> fitted curve. For the b
// estimator the scale is self-normalized: raw sqrt(n)(b_hat - b0) values are
// divided by their sample standard deviation at the largest n, and the fit
// uses the log correction.
BECurve build_estimator_curve(const ModelParams& theta,
                              const std::vector<std::int64_t>& ladder,
                              std::int64_t R, std::uint64_t master_seed,
                              EstimatorKind kind,
                              const SampleOptions& opts = {},
                              std::vector<StandardizedSample>* samples_out =
                                  nullptr);

// Pointwise sup of the per-theta distances over the box grid.
BECurve build_sup_curve(const ParamBox& box,
                        const std::vector<std::int64_t>& ladder,
                        std::int64_t R, std::uint64_t master_seed,
                        EstimatorKind kind, const SampleOptions& opts = {});

BECurve build_additive_curve(const ModelParams& theta,
                             const std::vector<std::int64_t>& ladder,
                             std::int64_t R, std::uint64_t master_seed,
                             FunctionalKind kind,
                             const SampleOptions& opts = {},
                             std::vector<StandardizedSample>* samples_out =
                                 nullptr);

// Flat rows `scope,estimator,n,R,D,slope,intercept,correction`; one row per
// curve point with the fit repeated.
void write_becurve_csv(std::ostream& os, const std::vector<BECurve>& curves);
std::vector<BECurve> read_becurve_csv(std::istream& is);

}  // namespace bemc
