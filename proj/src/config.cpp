#include "bemc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bemc/errors.hpp"

namespace bemc {

namespace {

const std::map<std::string, std::set<std::string>>& key_registry() {
  static const std::map<std::string, std::set<std::string>> registry = {
      {"model", {"rho0", "a0", "b0", "innovation", "df", "p"}},
      {"box",
       {"rho_bar", "m_a", "M_a", "m_b", "M_b", "p", "innovation", "df",
        "grid_rho", "grid_a", "grid_b"}},
      {"experiment",
       {"n", "n_ladder", "R", "master_seed", "target", "estimator",
        "functional", "scope", "b_lo", "b_hi", "d", "r_n"}},
      {"spectral",
       {"N", "L_mult", "h_init", "power_tol", "max_iterations", "doubling"}},
      {"output", {"dir"}},
      {"report", {"slope_lo", "slope_hi", "ratio_max", "corrected_slope_abs"}},
      {"tolerances", {"c_n", "min_width", "grid_points"}},
  };
  return registry;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
    ++a;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
    --b;
  }
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

InnovationLaw innovation_from(const ConfigFile& cfg,
                              const std::string& section) {
  const std::string name =
      cfg.get_string_or(section, "innovation", "gaussian");
  if (name == "gaussian") {
    return InnovationLaw::gaussian();
  }
  if (name == "student") {
    return InnovationLaw::student(static_cast<int>(cfg.get_int(section, "df")));
  }
  throw ConfigError("[" + section + "] innovation must be gaussian or " +
                    "student, got '" + name + "'");
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  const auto& registry = key_registry();

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(origin, line_no, "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (registry.find(section) == registry.end()) {
        fail(origin, line_no, "unknown section '" + section + "'");
      }
      cfg.sections_[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(origin, line_no, "expected key = value");
    }
    if (section.empty()) {
      fail(origin, line_no, "key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      fail(origin, line_no, "empty key");
    }
    const auto& allowed = registry.at(section);
    if (allowed.find(key) == allowed.end()) {
      fail(origin, line_no,
           "unknown key '" + key + "' in section [" + section + "]");
    }
    auto& entries = cfg.sections_[section];
    if (entries.count(key)) {
      fail(origin, line_no,
           "duplicate key '" + key + "' in section [" + section + "]");
    }
    entries[key] = Entry{value, line_no};
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section,
                                             const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end() || !it->second.count(key)) {
    throw ConfigError(origin_ + ": missing required key '" + key +
                      "' in section [" + section + "]");
  }
  return it->second.at(key);
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigFile::get_string_or(const std::string& section,
                                      const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  const Entry& e = require(section, key);
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    fail(origin_, e.line, "key '" + key + "' is not a number: '" + e.value +
                              "'");
  }
}

double ConfigFile::get_double_or(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& section,
                                 const std::string& key) const {
  const Entry& e = require(section, key);
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(e.value, &used);
    if (used != e.value.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    fail(origin_, e.line,
         "key '" + key + "' is not an integer: '" + e.value + "'");
  }
}

std::int64_t ConfigFile::get_int_or(const std::string& section,
                                    const std::string& key,
                                    std::int64_t fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_uint_or(const std::string& section,
                                      const std::string& key,
                                      std::uint64_t fallback) const {
  if (!has(section, key)) {
    return fallback;
  }
  const Entry& e = require(section, key);
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(e.value, &used);
    if (used != e.value.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    fail(origin_, e.line,
         "key '" + key + "' is not an unsigned integer: '" + e.value + "'");
  }
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
  if (!has(section, key)) {
    return fallback;
  }
  const Entry& e = require(section, key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") {
    return true;
  }
  if (e.value == "false" || e.value == "0" || e.value == "no") {
    return false;
  }
  fail(origin_, e.line, "key '" + key + "' is not a boolean: '" + e.value +
                            "'");
}

std::vector<std::int64_t> ConfigFile::get_int_list_or(
    const std::string& section, const std::string& key,
    const std::vector<std::int64_t>& fallback) const {
  if (!has(section, key)) {
    return fallback;
  }
  const Entry& e = require(section, key);
  std::vector<std::int64_t> out;
  std::string token;
  std::istringstream in(e.value);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) {
      fail(origin_, e.line, "key '" + key + "' has an empty list element");
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(token, &used));
      if (used != token.size()) {
        throw std::invalid_argument("trailing data");
      }
    } catch (const std::exception&) {
      fail(origin_, e.line,
           "key '" + key + "' has a non-integer element: '" + token + "'");
    }
  }
  if (out.empty()) {
    fail(origin_, e.line, "key '" + key + "' is an empty list");
  }
  return out;
}

double ExperimentConfig::resolve_r_n(std::int64_t at_n) const {
  if (r_n_rule == "log_over_n") {
    if (at_n < 2) {
      throw ConfigError("r_n rule log_over_n needs n >= 2");
    }
    return std::log(static_cast<double>(at_n)) / static_cast<double>(at_n);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(r_n_rule, &used);
    if (used != r_n_rule.size()) {
      throw std::invalid_argument("trailing data");
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("r_n must be 'log_over_n' or a number, got '" +
                      r_n_rule + "'");
  }
}

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& cfg) {
  ExperimentConfig out;

  if (cfg.has_section("model")) {
    out.has_model = true;
    out.theta = make_theta(cfg.get_double("model", "rho0"),
                           cfg.get_double("model", "a0"),
                           cfg.get_double("model", "b0"),
                           innovation_from(cfg, "model"),
                           cfg.get_double_or("model", "p", 7.0));
  }
  if (cfg.has_section("box")) {
    out.has_box = true;
    out.box = ParamBox::lattice(
        cfg.get_double("box", "rho_bar"), cfg.get_double("box", "m_a"),
        cfg.get_double("box", "M_a"), cfg.get_double("box", "m_b"),
        cfg.get_double("box", "M_b"), cfg.get_double_or("box", "p", 7.0),
        static_cast<int>(cfg.get_int_or("box", "grid_rho", 5)),
        static_cast<int>(cfg.get_int_or("box", "grid_a", 3)),
        static_cast<int>(cfg.get_int_or("box", "grid_b", 3)),
        innovation_from(cfg, "box"));
  }

  out.n = cfg.get_int_or("experiment", "n", out.n);
  out.n_ladder = cfg.get_int_list_or("experiment", "n_ladder", out.n_ladder);
  out.R = cfg.get_int_or("experiment", "R", out.R);
  out.master_seed =
      cfg.get_uint_or("experiment", "master_seed", out.master_seed);
  out.target = cfg.get_string_or("experiment", "target", out.target);
  if (out.target != "estimator" && out.target != "functional") {
    throw ConfigError("target must be estimator or functional, got '" +
                      out.target + "'");
  }
  const std::string est =
      cfg.get_string_or("experiment", "estimator", "rho");
  if (est == "rho") {
    out.estimator = EstimatorKind::rho;
  } else if (est == "b") {
    out.estimator = EstimatorKind::b;
  } else {
    throw ConfigError("estimator must be rho or b, got '" + est + "'");
  }
  std::string fun = cfg.get_string_or("experiment", "functional", "fprime");
  for (char& c : fun) c = static_cast<char>(std::tolower(c));
  if (fun == "fprime") {
    out.functional = FunctionalKind::Fprime;
  } else if (fun == "fsecond" || fun == "fsecond_centered") {
    out.functional = FunctionalKind::Fsecond_centered;
  } else {
    throw ConfigError("functional must be fprime or fsecond, got '" + fun +
                      "'");
  }
  out.scope = cfg.get_string_or("experiment", "scope", out.scope);
  if (out.scope != "theta" && out.scope != "sup") {
    throw ConfigError("scope must be theta or sup, got '" + out.scope + "'");
  }
  out.b_lo = cfg.get_double_or("experiment", "b_lo", out.b_lo);
  out.b_hi = cfg.get_double_or("experiment", "b_hi", out.b_hi);
  out.d = cfg.get_double_or("experiment", "d", out.d);
  out.r_n_rule = cfg.get_string_or("experiment", "r_n", out.r_n_rule);

  out.spectral.N = static_cast<int>(
      cfg.get_int_or("spectral", "N", out.spectral.N));
  out.spectral.L_mult =
      cfg.get_double_or("spectral", "L_mult", out.spectral.L_mult);
  out.spectral.h_init =
      cfg.get_double_or("spectral", "h_init", out.spectral.h_init);
  out.spectral.power_tol =
      cfg.get_double_or("spectral", "power_tol", out.spectral.power_tol);
  out.spectral.max_iterations = static_cast<int>(cfg.get_int_or(
      "spectral", "max_iterations", out.spectral.max_iterations));
  out.spectral.doubling_check =
      cfg.get_bool_or("spectral", "doubling", out.spectral.doubling_check);

  out.out_dir = cfg.get_string_or("output", "dir", out.out_dir);

  out.bands.slope_lo =
      cfg.get_double_or("report", "slope_lo", out.bands.slope_lo);
  out.bands.slope_hi =
      cfg.get_double_or("report", "slope_hi", out.bands.slope_hi);
  out.bands.ratio_max =
      cfg.get_double_or("report", "ratio_max", out.bands.ratio_max);
  out.bands.corrected_slope_abs = cfg.get_double_or(
      "report", "corrected_slope_abs", out.bands.corrected_slope_abs);

  return out;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_config(ConfigFile::parse_file(path));
}

}  // namespace bemc
