#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bemc/model.hpp"
#include "bemc/samples.hpp"
#include "bemc/spectral.hpp"

namespace bemc {

// Flat key-value configuration with [section] headers, '#' comments, and a
// closed vocabulary: unknown sections or keys are rejected at parse time with
// the offending line number.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& origin);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section,
                         const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  std::int64_t get_int(const std::string& section,
                       const std::string& key) const;
  std::int64_t get_int_or(const std::string& section, const std::string& key,
                          std::int64_t fallback) const;
  std::uint64_t get_uint_or(const std::string& section, const std::string& key,
                            std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key,
                   bool fallback) const;
  std::vector<std::int64_t> get_int_list_or(
      const std::string& section, const std::string& key,
      const std::vector<std::int64_t>& fallback) const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_;

  const Entry& require(const std::string& section,
                       const std::string& key) const;
};

struct ReportBands {
  double slope_lo = -0.65;
  double slope_hi = -0.35;
  double ratio_max = 2.5;
  double corrected_slope_abs = 0.15;
};

// Typed view of a full experiment description. [model] and [box] are each
// optional; commands that need one fail with a named error when absent.
struct ExperimentConfig {
  bool has_model = false;
  ModelParams theta;
  bool has_box = false;
  ParamBox box;

  std::int64_t n = 4000;
  std::vector<std::int64_t> n_ladder = {250, 500, 1000, 2000, 4000, 8000};
  std::int64_t R = 2000;
  std::uint64_t master_seed = 20260814;
  std::string target = "estimator";  // estimator | functional
  EstimatorKind estimator = EstimatorKind::rho;
  FunctionalKind functional = FunctionalKind::Fprime;
  std::string scope = "theta";  // theta | sup
  double b_lo = 0.05;
  double b_hi = 0.5;
  double d = 0.25;
  std::string r_n_rule = "log_over_n";

  SpectralOptions spectral;
  std::string out_dir = "out";
  ReportBands bands;

  double resolve_r_n(std::int64_t at_n) const;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_config(const ConfigFile& cfg);
};

}  // namespace bemc
