#include "bemc/ratefit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bemc/errors.hpp"
#include "bemc/kolmogorov.hpp"
#include "bemc/rng.hpp"

namespace bemc {

const char* correction_name(Correction c) {
  return c == Correction::none ? "none" : "log";
}

Correction correction_from_name(const std::string& name) {
  if (name == "none") {
    return Correction::none;
  }
  if (name == "log") {
    return Correction::log;
  }
  throw DomainError("unknown correction '" + name + "'");
}

std::pair<double, double> rate_fit(BECurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) {
    throw DomainError("rate_fit: need at least 3 points, got " +
                      std::to_string(pts.size()));
  }
  std::vector<double> xs(pts.size());
  std::vector<double> ys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].d > 0.0)) {
      throw DegenerateDataError(
          "rate_fit: D=0 at n=" + std::to_string(pts[i].n) +
          " gives a degenerate fit; increase R");
    }
    const double n = static_cast<double>(pts[i].n);
    xs[i] = std::log(n);
    if (curve.correction == Correction::log) {
      if (pts[i].n < 2) {
        throw DomainError("rate_fit: log correction needs n >= 2");
      }
      ys[i] = std::log(pts[i].d * std::sqrt(n) / std::log(n));
    } else {
      ys[i] = std::log(pts[i].d);
    }
  }
  double xbar = 0.0;
  double ybar = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(xs.size());
  ybar /= static_cast<double>(xs.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx <= 0.0) {
    throw DomainError("rate_fit: all n equal");
  }
  curve.slope = sxy / sxx;
  curve.intercept = ybar - curve.slope * xbar;
  return {curve.slope, curve.intercept};
}

double sqrtn_stability_ratio(const BECurve& curve) {
  if (curve.points.empty()) {
    throw DomainError("sqrtn_stability_ratio: empty curve");
  }
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& pt : curve.points) {
    const double v = std::sqrt(static_cast<double>(pt.n)) * pt.d;
    if (!(v > 0.0)) {
      throw DegenerateDataError("sqrtn_stability_ratio: D=0 point");
    }
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return hi / lo;
}

namespace {

// Sample standard deviation of the rung at the largest n; the b estimator's
// curve is measured on values divided by this common scale.
double self_normalize(std::vector<StandardizedSample>* samples) {
  const std::vector<double>& top = samples->back().values;
  double mean = 0.0;
  for (double v : top) {
    mean += v;
  }
  mean /= static_cast<double>(top.size());
  double ss = 0.0;
  for (double v : top) {
    ss += (v - mean) * (v - mean);
  }
  if (top.size() < 2 || !(ss > 0.0)) {
    throw DegenerateDataError(
        "self-normalization: zero spread at the largest n");
  }
  const double sd = std::sqrt(ss / static_cast<double>(top.size() - 1));
  for (auto& sample : *samples) {
    for (double& v : sample.values) {
      v /= sd;
    }
  }
  return sd;
}

BECurve curve_from_samples(std::string scope, std::string estimator,
                           std::int64_t R, Correction corr,
                           const std::vector<StandardizedSample>& samples) {
  BECurve curve;
  curve.theta_scope = std::move(scope);
  curve.estimator = std::move(estimator);
  curve.R = R;
  curve.correction = corr;
  curve.points.reserve(samples.size());
  for (const auto& sample : samples) {
    curve.points.push_back(
        {sample.n, kolmogorov_distance_sorted(sample.values)});
  }
  rate_fit(curve);
  return curve;
}

}  // namespace

BECurve build_estimator_curve(const ModelParams& theta,
                              const std::vector<std::int64_t>& ladder,
                              std::int64_t R, std::uint64_t master_seed,
                              EstimatorKind kind, const SampleOptions& opts,
                              std::vector<StandardizedSample>* samples_out) {
  std::vector<StandardizedSample> samples =
      estimator_ladder_samples(theta, ladder, R, master_seed, kind, opts);
  Correction corr = Correction::none;
  if (kind == EstimatorKind::b) {
    corr = Correction::log;
    if (opts.scale_override <= 0.0) {
      self_normalize(&samples);
    }
  }
  BECurve curve = curve_from_samples(theta.id(), estimator_name(kind), R,
                                     corr, samples);
  if (samples_out) {
    *samples_out = std::move(samples);
  }
  return curve;
}

BECurve build_sup_curve(const ParamBox& box,
                        const std::vector<std::int64_t>& ladder,
                        std::int64_t R, std::uint64_t master_seed,
                        EstimatorKind kind, const SampleOptions& opts) {
  box.validate_fields();
  if (box.grid.empty()) {
    throw DomainError("build_sup_curve: box grid is empty");
  }
  std::vector<double> sup(ladder.size(), -1.0);
  for (std::size_t j = 0; j < box.grid.size(); ++j) {
    std::vector<StandardizedSample> samples = estimator_ladder_samples(
        box.grid[j], ladder, R,
        rng::derive_stream_seed(master_seed, static_cast<std::int64_t>(j)), kind,
        opts);
    if (kind == EstimatorKind::b && opts.scale_override <= 0.0) {
      self_normalize(&samples);
    }
    for (std::size_t r = 0; r < samples.size(); ++r) {
      sup[r] =
          std::max(sup[r], kolmogorov_distance_sorted(samples[r].values));
    }
  }
  BECurve curve;
  curve.theta_scope = "sup";
  curve.estimator = estimator_name(kind);
  curve.R = R;
  curve.correction =
      kind == EstimatorKind::b ? Correction::log : Correction::none;
  for (std::size_t r = 0; r < ladder.size(); ++r) {
    curve.points.push_back({ladder[r], sup[r]});
  }
  rate_fit(curve);
  return curve;
}

BECurve build_additive_curve(const ModelParams& theta,
                             const std::vector<std::int64_t>& ladder,
                             std::int64_t R, std::uint64_t master_seed,
                             FunctionalKind kind, const SampleOptions& opts,
                             std::vector<StandardizedSample>* samples_out) {
  std::vector<StandardizedSample> samples =
      additive_ladder_samples(theta, ladder, R, master_seed, kind, opts);
  BECurve curve = curve_from_samples(theta.id(), functional_name(kind), R,
                                     Correction::none, samples);
  if (samples_out) {
    *samples_out = std::move(samples);
  }
  return curve;
}

void write_becurve_csv(std::ostream& os, const std::vector<BECurve>& curves) {
  os << "scope,estimator,n,R,D,slope,intercept,correction\n";
  char num[192];
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      std::snprintf(num, sizeof num, "%.17g,%.17g,%.17g", pt.d, curve.slope,
                    curve.intercept);
      os << curve.theta_scope << ',' << curve.estimator << ',' << pt.n << ','
         << curve.R << ',' << num << ',' << correction_name(curve.correction)
         << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

const char* kColumns[8] = {"scope", "estimator",  "n",         "R",
                           "D",     "slope",      "intercept", "correction"};

double parse_double_field(const std::string& field, int col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    throw DomainError("becurve csv: column '" + std::string(kColumns[col]) +
                      "' is not a number: '" + field + "'");
  }
}

std::int64_t parse_int_field(const std::string& field, int col) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(field, &used);
    if (used != field.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    throw DomainError("becurve csv: column '" + std::string(kColumns[col]) +
                      "' is not an integer: '" + field + "'");
  }
}

}  // namespace

std::vector<BECurve> read_becurve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw DomainError("becurve csv: empty file");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const std::vector<std::string> header = split_csv_line(line);
  for (int c = 0; c < 8; ++c) {
    if (static_cast<std::size_t>(c) >= header.size() ||
        header[c] != kColumns[c]) {
      throw DomainError("becurve csv: expected column '" +
                        std::string(kColumns[c]) + "' at position " +
                        std::to_string(c + 1));
    }
  }
  if (header.size() != 8) {
    throw DomainError("becurve csv: unexpected extra columns");
  }

  std::vector<BECurve> curves;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8) {
      throw DomainError("becurve csv: row with " + std::to_string(f.size()) +
                        " fields, expected 8");
    }
    const std::int64_t n = parse_int_field(f[2], 2);
    const std::int64_t r = parse_int_field(f[3], 3);
    const double d = parse_double_field(f[4], 4);
    const double slope = parse_double_field(f[5], 5);
    const double intercept = parse_double_field(f[6], 6);
    const Correction corr = correction_from_name(f[7]);
    const bool fresh = curves.empty() || curves.back().theta_scope != f[0] ||
                       curves.back().estimator != f[1] ||
                       curves.back().R != r ||
                       curves.back().correction != corr;
    if (fresh) {
      BECurve curve;
      curve.theta_scope = f[0];
      curve.estimator = f[1];
      curve.R = r;
      curve.correction = corr;
      curve.slope = slope;
      curve.intercept = intercept;
      curves.push_back(std::move(curve));
    }
    curves.back().points.push_back({n, d});
  }
  if (curves.empty()) {
    throw DomainError("becurve csv: no data rows");
  }
  return curves;
}

}  // namespace bemc
