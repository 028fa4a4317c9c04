#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bemc/config.hpp"
#include "bemc/drift.hpp"
#include "bemc/errors.hpp"
#include "bemc/ratefit.hpp"
#include "bemc/samples.hpp"
#include "bemc/spectral.hpp"
#include "bemc/theory.hpp"
#include "bemc/trajectory.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  int threads = 0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw bemc::ConfigError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw bemc::DomainError("cannot write '" + path.string() + "'");
  }
  out << content;
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// The manifest records provenance for every run. The timestamp field is the
// only part allowed to differ between byte-identical reruns.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = args.config_path;
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(read_file(args.config_path))));
  j["config_fnv1a"] = hash;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = args.threads;
  j["version"] = kVersion;
  j["timestamp"] = iso_now();
  write_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

bemc::ExperimentConfig load_config(CommonArgs* args) {
  bemc::ExperimentConfig cfg = bemc::ExperimentConfig::load(args->config_path);
  if (args->seed_set) {
    cfg.master_seed = args->seed_override;
  }
  if (!args->out_override.empty()) {
    cfg.out_dir = args->out_override;
  }
  if (args->threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    args->threads = hw > 0 ? static_cast<int>(hw) : 1;
  }
  return cfg;
}

fs::path prepare_out_dir(const bemc::ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

const bemc::ModelParams& require_model(const bemc::ExperimentConfig& cfg) {
  if (!cfg.has_model) {
    throw bemc::ConfigError("this command needs a [model] section");
  }
  return cfg.theta;
}

const bemc::ParamBox& require_box(const bemc::ExperimentConfig& cfg) {
  if (!cfg.has_box) {
    throw bemc::ConfigError("this command needs a [box] section");
  }
  return cfg.box;
}

bemc::SampleOptions sample_options(const bemc::ExperimentConfig& cfg,
                                   const CommonArgs& args) {
  bemc::SampleOptions opts;
  opts.threads = args.threads;
  opts.b_lo = cfg.b_lo;
  opts.b_hi = cfg.b_hi;
  return opts;
}

int cmd_simulate(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::ModelParams& theta = require_model(cfg);
  const bemc::Trajectory traj = bemc::simulate(
      theta, static_cast<std::size_t>(cfg.n), cfg.master_seed);
  const fs::path out = prepare_out_dir(cfg);
  std::ofstream os(out / "trajectory.csv", std::ios::binary);
  bemc::write_trajectory_csv(traj, os);
  write_manifest(out, "simulate", args, cfg);
  std::cout << "wrote " << (out / "trajectory.csv").string() << " (n=" << cfg.n
            << ")\n";
  return 0;
}

int cmd_theory(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::ModelParams& theta = require_model(cfg);
  const bemc::TheoryReport report = bemc::theory::report(theta);
  const fs::path out = prepare_out_dir(cfg);
  write_file(out / "theory_report.json",
             bemc::theory_report_json(theta, report));
  write_manifest(out, "theory", args, cfg);
  std::cout << "theta " << theta.id() << ": m=" << report.m_theta
            << " sigma1_sq=" << report.sigma1_sq << " tau=" << report.tau
            << "\n";
  return 0;
}

int cmd_drift(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::ParamBox& box = require_box(cfg);
  const bemc::DriftReport report = bemc::check_drift(box);
  const fs::path out = prepare_out_dir(cfg);
  write_file(out / "drift_report.json", bemc::drift_report_json(report));
  write_manifest(out, "drift", args, cfg);
  std::cout << "iota=" << report.iota << " s=" << report.s
            << " varrho=" << report.varrho
            << " mass=" << report.minorization_mass << " -> "
            << (report.pass ? "pass" : "fail") << "\n";
  return report.pass ? 0 : 2;
}

int cmd_spectral(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::ModelParams& theta = require_model(cfg);
  const bemc::SpectralReport report =
      bemc::spectral_report(theta, cfg.functional, cfg.spectral);
  const fs::path out = prepare_out_dir(cfg);
  write_file(out / "spectral_report.json",
             bemc::spectral_report_json(report));
  write_manifest(out, "spectral", args, cfg);
  std::cout << "theta " << report.theta_id << ": lambda0=" << report.lambda0
            << " |lambda'(0)|=" << report.lambda_prime_abs
            << " sigma_sq=" << report.sigma_sq << "\n";
  return 0;
}

int cmd_becurve(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::SampleOptions opts = sample_options(cfg, args);
  bemc::BECurve curve;
  std::vector<bemc::StandardizedSample> samples;
  if (cfg.target == "functional") {
    if (cfg.scope == "sup") {
      throw bemc::ConfigError(
          "scope=sup is only available for estimator curves");
    }
    curve = bemc::build_additive_curve(require_model(cfg), cfg.n_ladder,
                                       cfg.R, cfg.master_seed, cfg.functional,
                                       opts, &samples);
  } else if (cfg.scope == "sup") {
    curve = bemc::build_sup_curve(require_box(cfg), cfg.n_ladder, cfg.R,
                                  cfg.master_seed, cfg.estimator, opts);
  } else {
    curve = bemc::build_estimator_curve(require_model(cfg), cfg.n_ladder,
                                        cfg.R, cfg.master_seed, cfg.estimator,
                                        opts, &samples);
  }

  const fs::path out = prepare_out_dir(cfg);
  {
    std::ofstream os(out / "becurve.csv", std::ios::binary);
    bemc::write_becurve_csv(os, {curve});
  }
  if (!samples.empty()) {
    std::ofstream os(out / "samples.csv", std::ios::binary);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      bemc::write_sample_csv(os, samples[i], i == 0);
    }
  }
  write_manifest(out, "be-curve", args, cfg);
  std::cout << curve.theta_scope << " " << curve.estimator
            << ": slope=" << curve.slope << " intercept=" << curve.intercept
            << " correction=" << bemc::correction_name(curve.correction)
            << "\n";
  return 0;
}

int cmd_audit(const CommonArgs& args, const bemc::ExperimentConfig& cfg) {
  const bemc::ModelParams& theta = require_model(cfg);
  const bemc::SampleOptions opts = sample_options(cfg, args);
  const bemc::ConditionAudit audit = bemc::audit_conditions(
      theta, cfg.n, cfg.R, cfg.master_seed, cfg.estimator,
      cfg.resolve_r_n(cfg.n), cfg.d, opts);
  const fs::path out = prepare_out_dir(cfg);
  write_file(out / "condition_audit.json", bemc::condition_audit_json(audit));
  write_manifest(out, "audit", args, cfg);
  std::cout << "v3_freq=" << audit.v3_freq << " v6_freq=" << audit.v6_freq
            << " r_n=" << audit.r_n_used << " d=" << audit.d_used << "\n";
  return 0;
}

int cmd_ratefit(const std::vector<std::string>& csv_paths) {
  for (const std::string& path : csv_paths) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
      throw bemc::DomainError("cannot open '" + path + "'");
    }
    std::vector<bemc::BECurve> curves = bemc::read_becurve_csv(is);
    for (bemc::BECurve& curve : curves) {
      bemc::rate_fit(curve);
      std::cout << curve.theta_scope << " " << curve.estimator << " "
                << bemc::correction_name(curve.correction)
                << " slope=" << curve.slope
                << " intercept=" << curve.intercept << "\n";
    }
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& csv_paths,
               const bemc::ReportBands& bands) {
  bool all_pass = true;
  std::printf("%-24s %-10s %-5s %10s %10s %6s\n", "scope", "estimator",
              "corr", "slope", "ratio", "verdict");
  for (const std::string& path : csv_paths) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
      throw bemc::DomainError("cannot open '" + path + "'");
    }
    std::vector<bemc::BECurve> curves = bemc::read_becurve_csv(is);
    for (bemc::BECurve& curve : curves) {
      bemc::rate_fit(curve);
      const double ratio = bemc::sqrtn_stability_ratio(curve);
      bool pass = false;
      if (curve.correction == bemc::Correction::log) {
        pass = std::abs(curve.slope) <= bands.corrected_slope_abs;
      } else {
        pass = curve.slope >= bands.slope_lo &&
               curve.slope <= bands.slope_hi && ratio <= bands.ratio_max;
      }
      all_pass = all_pass && pass;
      std::printf("%-24s %-10s %-5s %10.4f %10.4f %6s\n",
                  curve.theta_scope.c_str(), curve.estimator.c_str(),
                  bemc::correction_name(curve.correction), curve.slope, ratio,
                  pass ? "pass" : "FAIL");
    }
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for Berry-Esseen rates of M-estimators on the "
      "AR(1)-ARCH(1) chain"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::string> csv_paths;

  const auto add_common = [&args](CLI::App* cmd, bool config_required) {
    auto* c = cmd->add_option("--config", args.config_path,
                              "experiment config file");
    if (config_required) {
      c->required();
    }
    cmd->add_option("--threads", args.threads,
                    "worker threads (default: machine parallelism)");
    cmd->add_option("--out", args.out_override, "output directory override");
    auto* s = cmd->add_option("--seed", args.seed_override,
                              "master seed override");
    cmd->callback([&args, s]() { args.seed_set = s->count() > 0; });
  };

  CLI::App* simulate = app.add_subcommand("simulate", "write one trajectory");
  add_common(simulate, true);
  CLI::App* drift = app.add_subcommand("drift", "drift/minorization verdict");
  add_common(drift, true);
  CLI::App* theory =
      app.add_subcommand("theory", "closed-form theory report");
  add_common(theory, true);
  CLI::App* spectral =
      app.add_subcommand("spectral", "Fourier-operator eigenvalue report");
  add_common(spectral, true);
  CLI::App* becurve =
      app.add_subcommand("be-curve", "Berry-Esseen distance curve");
  add_common(becurve, true);
  CLI::App* audit = app.add_subcommand("audit", "condition (V3)/(V6) audit");
  add_common(audit, true);

  CLI::App* ratefit =
      app.add_subcommand("rate-fit", "refit slopes of curve CSVs");
  ratefit->add_option("csv", csv_paths, "BECurve CSV files")->required();
  CLI::App* report =
      app.add_subcommand("report", "summary table with verdicts");
  report->add_option("csv", csv_paths, "BECurve CSV files");
  add_common(report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(args, load_config(&args));
    }
    if (drift->parsed()) {
      return cmd_drift(args, load_config(&args));
    }
    if (theory->parsed()) {
      return cmd_theory(args, load_config(&args));
    }
    if (spectral->parsed()) {
      return cmd_spectral(args, load_config(&args));
    }
    if (becurve->parsed()) {
      return cmd_becurve(args, load_config(&args));
    }
    if (audit->parsed()) {
      return cmd_audit(args, load_config(&args));
    }
    if (ratefit->parsed()) {
      return cmd_ratefit(csv_paths);
    }
    if (report->parsed()) {
      bemc::ReportBands bands;
      if (!args.config_path.empty()) {
        bands = bemc::ExperimentConfig::load(args.config_path).bands;
      }
      return cmd_report(csv_paths, bands);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
