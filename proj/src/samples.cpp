#include "bemc/samples.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "bemc/batch_means.hpp"
#include "bemc/errors.hpp"
#include "bemc/estimators.hpp"
#include "bemc/kolmogorov.hpp"
#include "bemc/parallel.hpp"
#include "bemc/rng.hpp"
#include "bemc/theory.hpp"
#include "bemc/trajectory.hpp"

namespace bemc {

const char* estimator_name(EstimatorKind kind) {
  return kind == EstimatorKind::rho ? "rho" : "b";
}

const char* functional_name(FunctionalKind kind) {
  return kind == FunctionalKind::Fprime ? "fprime" : "fsecond";
}

namespace {

constexpr std::uint64_t kFallbackTag = 0xfa11bacc00000001ull;
constexpr std::uint64_t kScaleTag = 0x5ca1e5eed0000001ull;

void validate_ladder(const std::vector<std::int64_t>& ladder) {
  if (ladder.empty()) {
    throw DomainError("sample ladder is empty");
  }
  std::int64_t prev = 0;
  for (std::int64_t n : ladder) {
    if (n <= prev) {
      throw DomainError("sample ladder must be strictly increasing and >= 1");
    }
    prev = n;
  }
}

// One replication: a single innovation stream drives the chain to the largest
// checkpoint, and running moment sums yield the estimate at every rung of the
// ladder on the shared prefix. Returns false on degenerate data.
bool run_estimator_replication(const ModelParams& theta,
                               const std::vector<std::int64_t>& ladder,
                               std::uint64_t seed, EstimatorKind kind,
                               double b_lo, double b_hi,
                               std::vector<double>* out) {
  InnovationSampler sampler(theta.innovation, seed);
  LsMomentSums sums;
  double x = 0.0;
  std::size_t rung = 0;
  const std::int64_t n_max = ladder.back();
  for (std::int64_t k = 1; k <= n_max; ++k) {
    const double eps = sampler.next();
    const double y = theta.rho0 * x + theta.sigma(x) * eps;
    sums.add(x, y);
    x = y;
    if (k == ladder[rung]) {
      try {
        if (kind == EstimatorKind::rho) {
          (*out)[rung] = sums.rho();
        } else {
          const double r = sums.rho();
          (*out)[rung] = sums.bhat_closed(r, sums.tausq(), b_lo, b_hi);
        }
      } catch (const DegenerateDataError&) {
        return false;
      }
      ++rung;
      if (rung == ladder.size()) {
        break;
      }
    }
  }
  return true;
}

void run_additive_replication(const ModelParams& theta,
                              const std::vector<std::int64_t>& ladder,
                              std::uint64_t seed, FunctionalKind kind,
                              double m_theta, std::vector<double>* out) {
  InnovationSampler sampler(theta.innovation, seed);
  CompensatedSum s;
  double x = 0.0;
  std::size_t rung = 0;
  const std::int64_t n_max = ladder.back();
  for (std::int64_t k = 1; k <= n_max; ++k) {
    const double eps = sampler.next();
    const double y = theta.rho0 * x + theta.sigma(x) * eps;
    if (kind == FunctionalKind::Fprime) {
      s.add(-2.0 * x * (y - theta.rho0 * x));
    } else {
      s.add(2.0 * x * x - m_theta);
    }
    x = y;
    if (k == ladder[rung]) {
      (*out)[rung] = s.value();
      ++rung;
      if (rung == ladder.size()) {
        break;
      }
    }
  }
}

StandardizedSample make_sample(const ModelParams& theta, std::int64_t n,
                               std::int64_t R, std::uint64_t master_seed,
                               std::vector<double> values,
                               std::int64_t fallback_count) {
  std::sort(values.begin(), values.end());
  StandardizedSample s;
  s.theta_id = theta.id();
  s.n = n;
  s.R = R;
  s.master_seed = master_seed;
  s.values = std::move(values);
  s.fallback_count = fallback_count;
  return s;
}

}  // namespace

std::vector<StandardizedSample> estimator_ladder_samples(
    const ModelParams& theta, const std::vector<std::int64_t>& ladder,
    std::int64_t R, std::uint64_t master_seed, EstimatorKind kind,
    const SampleOptions& opts) {
  theta.validate();
  validate_ladder(ladder);
  if (R < 1) {
    throw DomainError("estimator_ladder_samples: R >= 1 required");
  }
  const std::size_t rungs = ladder.size();
  std::vector<double> raw(static_cast<std::size_t>(R) * rungs);
  std::vector<std::uint8_t> fell(R, 0);

  parallel_for_index(R, opts.threads, [&](std::int64_t i) {
    std::vector<double> est(rungs);
    const std::uint64_t seed = rng::derive_stream_seed(master_seed, i);
    if (!run_estimator_replication(theta, ladder, seed, kind, opts.b_lo,
                                   opts.b_hi, &est)) {
      fell[i] = 1;
      const std::uint64_t retry =
          rng::derive_stream_seed(master_seed ^ kFallbackTag, i);
      if (!run_estimator_replication(theta, ladder, retry, kind, opts.b_lo,
                                     opts.b_hi, &est)) {
        throw DegenerateDataError("estimator sample: replication " +
                                  std::to_string(i) +
                                  " degenerate after fallback redraw");
      }
    }
    std::copy(est.begin(), est.end(),
              raw.begin() + static_cast<std::size_t>(i) * rungs);
  });

  std::int64_t fallback_count = 0;
  for (std::uint8_t f : fell) {
    fallback_count += f;
  }
  if (fallback_count * 100 > R) {
    throw DataQualityError(
        "estimator sample: more than 1% of replications were degenerate (" +
        std::to_string(fallback_count) + " of " + std::to_string(R) + ")");
  }

  const double alpha0 =
      (kind == EstimatorKind::rho) ? theta.rho0 : theta.b0;
  double scale = opts.scale_override;
  if (scale <= 0.0) {
    scale = (kind == EstimatorKind::rho) ? theory::tau(theta) : 1.0;
  }

  std::vector<StandardizedSample> out;
  out.reserve(rungs);
  for (std::size_t j = 0; j < rungs; ++j) {
    const double root_n = std::sqrt(static_cast<double>(ladder[j]));
    std::vector<double> vals(R);
    for (std::int64_t i = 0; i < R; ++i) {
      vals[i] =
          root_n * (raw[static_cast<std::size_t>(i) * rungs + j] - alpha0) /
          scale;
    }
    out.push_back(make_sample(theta, ladder[j], R, master_seed,
                              std::move(vals), fallback_count));
  }
  return out;
}

StandardizedSample standardized_estimator_sample(const ModelParams& theta,
                                                 std::int64_t n,
                                                 std::int64_t R,
                                                 std::uint64_t master_seed,
                                                 EstimatorKind kind,
                                                 const SampleOptions& opts) {
  return estimator_ladder_samples(theta, {n}, R, master_seed, kind,
                                  opts)[0];
}

double additive_scale(const ModelParams& theta, FunctionalKind kind,
                      std::uint64_t master_seed) {
  if (kind == FunctionalKind::Fprime) {
    return std::sqrt(theory::sigma1_sq(theta));
  }
  // No closed form is claimed for the long-run variance of the centered
  // second derivative; estimate it once from an auxiliary path.
  const std::int64_t n = 1000000;
  const double m_theta = theory::m_of_theta(theta);
  const Trajectory traj =
      simulate(theta, n, rng::derive_stream_seed(master_seed ^ kScaleTag, 0));
  std::vector<double> y(n);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double x = traj.x[k - 1];
    y[k - 1] = 2.0 * x * x - m_theta;
  }
  return std::sqrt(batch_means_variance(y));
}

std::vector<StandardizedSample> additive_ladder_samples(
    const ModelParams& theta, const std::vector<std::int64_t>& ladder,
    std::int64_t R, std::uint64_t master_seed, FunctionalKind kind,
    const SampleOptions& opts) {
  theta.validate();
  validate_ladder(ladder);
  if (R < 1) {
    throw DomainError("additive_ladder_samples: R >= 1 required");
  }
  const std::size_t rungs = ladder.size();
  const double m_theta = theory::m_of_theta(theta);
  double scale = opts.scale_override;
  if (scale <= 0.0) {
    scale = additive_scale(theta, kind, master_seed);
  }
  std::vector<double> raw(static_cast<std::size_t>(R) * rungs);

  parallel_for_index(R, opts.threads, [&](std::int64_t i) {
    std::vector<double> sums(rungs);
    run_additive_replication(theta, ladder,
                             rng::derive_stream_seed(master_seed, i), kind,
                             m_theta, &sums);
    std::copy(sums.begin(), sums.end(),
              raw.begin() + static_cast<std::size_t>(i) * rungs);
  });

  std::vector<StandardizedSample> out;
  out.reserve(rungs);
  for (std::size_t j = 0; j < rungs; ++j) {
    const double denom = scale * std::sqrt(static_cast<double>(ladder[j]));
    std::vector<double> vals(R);
    for (std::int64_t i = 0; i < R; ++i) {
      vals[i] = raw[static_cast<std::size_t>(i) * rungs + j] / denom;
    }
    out.push_back(
        make_sample(theta, ladder[j], R, master_seed, std::move(vals), 0));
  }
  return out;
}

StandardizedSample standardized_additive_sample(const ModelParams& theta,
                                                std::int64_t n, std::int64_t R,
                                                std::uint64_t master_seed,
                                                FunctionalKind kind,
                                                const SampleOptions& opts) {
  return additive_ladder_samples(theta, {n}, R, master_seed, kind, opts)[0];
}

double batch_means_sigma1_sq(const ModelParams& theta, std::int64_t n,
                             std::uint64_t seed) {
  const Trajectory traj = simulate(theta, n, seed);
  std::vector<double> y(n);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double x = traj.x[k - 1];
    y[k - 1] = -2.0 * x * (traj.x[k] - theta.rho0 * x);
  }
  return batch_means_variance(y);
}

UniformSup uniform_sup_distance(const ParamBox& box, std::int64_t n,
                                std::int64_t R, std::uint64_t master_seed,
                                EstimatorKind kind, const SampleOptions& opts) {
  box.validate_fields();
  if (box.grid.empty()) {
    throw DomainError("uniform_sup_distance: box grid is empty");
  }
  UniformSup sup;
  sup.value = -1.0;
  for (std::size_t j = 0; j < box.grid.size(); ++j) {
    const StandardizedSample sample = standardized_estimator_sample(
        box.grid[j], n, R,
        rng::derive_stream_seed(master_seed, static_cast<std::int64_t>(j)), kind,
        opts);
    const double d = kolmogorov_distance_sorted(sample.values);
    if (d > sup.value) {
      sup.value = d;
      sup.argmax_id = sample.theta_id;
    }
  }
  return sup;
}

ConditionAudit audit_conditions(const ModelParams& theta, std::int64_t n,
                                std::int64_t R, std::uint64_t master_seed,
                                EstimatorKind kind, double r_n, double d,
                                const SampleOptions& opts) {
  theta.validate();
  if (R < 1 || n < 1) {
    throw DomainError("audit_conditions: need n >= 1 and R >= 1");
  }
  if (!(d > 0.0)) {
    throw DomainError("audit_conditions: consistency radius d must be > 0");
  }
  double r_eff = r_n;
  if (kind == EstimatorKind::rho) {
    r_eff = std::max(r_n, 1e-9);
  } else if (!(r_n > 0.0)) {
    throw DomainError("audit_conditions: r_n must be > 0 for the b estimator");
  }
  const double tausq0 = 0.5 * theory::m_of_theta(theta);

  std::vector<std::uint8_t> v3(R, 0);
  std::vector<std::uint8_t> v6(R, 0);
  parallel_for_index(R, opts.threads, [&](std::int64_t i) {
    std::uint64_t seed = rng::derive_stream_seed(master_seed, i);
    for (int attempt = 0;; ++attempt) {
      try {
        const Trajectory traj = simulate(theta, n, seed);
        if (kind == EstimatorKind::rho) {
          CompensatedSum sxx;
          CompensatedSum sxy;
          for (std::int64_t k = 1; k <= n; ++k) {
            sxx.add(traj.x[k - 1] * traj.x[k - 1]);
            sxy.add(traj.x[k - 1] * traj.x[k]);
          }
          if (sxx.value() <= 0.0) {
            throw DegenerateDataError("audit: all-zero path");
          }
          const double rho = sxy.value() / sxx.value();
          const double m_prime =
              -2.0 * (sxy.value() - rho * sxx.value()) / static_cast<double>(n);
          v3[i] = std::abs(m_prime) >= r_eff;
          v6[i] = std::abs(rho - theta.rho0) >= d;
        } else {
          const double rh = rho_hat(traj);
          const double th = tau_hat_sq(traj);
          const EstimationResult est =
              b_hat(traj, rh, th, opts.b_lo, opts.b_hi);
          const V3Decomposition dec =
              v3_residual(traj, theta.rho0, tausq0, est.alpha_hat);
          v3[i] = dec.m_prime_abs >= r_eff;
          v6[i] = std::abs(est.alpha_hat - theta.b0) >= d;
        }
        break;
      } catch (const DegenerateDataError&) {
        if (attempt >= 1) {
          throw;
        }
        seed = rng::derive_stream_seed(master_seed ^ kFallbackTag, i);
      }
    }
  });

  std::int64_t c3 = 0;
  std::int64_t c6 = 0;
  for (std::int64_t i = 0; i < R; ++i) {
    c3 += v3[i];
    c6 += v6[i];
  }
  ConditionAudit audit;
  audit.v3_freq = static_cast<double>(c3) / static_cast<double>(R);
  audit.v6_freq = static_cast<double>(c6) / static_cast<double>(R);
  audit.r_n_used = r_eff;
  audit.d_used = d;
  return audit;
}

std::string condition_audit_json(const ConditionAudit& audit) {
  nlohmann::json j;
  j["v3_freq"] = audit.v3_freq;
  j["v6_freq"] = audit.v6_freq;
  j["r_n_used"] = audit.r_n_used;
  j["d_used"] = audit.d_used;
  return j.dump(2) + "\n";
}

void write_sample_csv(std::ostream& os, const StandardizedSample& sample,
                      bool header) {
  if (header) {
    os << "theta_id,n,rep,value\n";
  }
  char buf[64];
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", sample.values[i]);
    os << sample.theta_id << ',' << sample.n << ',' << i << ',' << buf
       << '\n';
  }
}

}  // namespace bemc
