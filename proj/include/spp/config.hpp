#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spp/experiments.hpp"

namespace spp {

/// Run configuration in user-facing units; key names carry their unit suffix.
struct RunConfig {
  double lambda0_um = 10.0;
  double E_F_eV = 0.15;
  double mobility_cm2_per_Vs = 6e4;
  double v_F_m_per_s = 1e6;
  double thickness_nm = 0.33;
  double gamma_per_s = 2e12;  // explicit override; <= 0 selects the mobility-derived value
  double eps_h = 3.9;
  double R_nm = 800.0;
  double delta_nm = 200.0;
  double d_min_nm = 20.0;
  double L_um = 1.0;
  std::size_t n_samples = kDefaultSamples;
  std::size_t step_divisor = 1;
  double quad_rel_tol = 1e-12;
  double quad_abs_tol = 1e-30;
  std::size_t quad_max_subdivisions = 200000;
  std::string out_dir = "out";
  std::string formats = "csv,json,svg";

  GrapheneSheet sheet() const {
    std::optional<double> g;
    if (gamma_per_s > 0) g = gamma_per_s;
    return GrapheneSheet::from_user_units(E_F_eV, mobility_cm2_per_Vs, v_F_m_per_s, thickness_nm, g);
  }
  Medium medium() const { return Medium{eps_h}; }
  Excitation excitation() const { return Excitation::from_wavelength(units::from_um(lambda0_um)); }
  DeviceGeometry geometry() const {
    return {units::from_nm(R_nm), units::from_nm(delta_nm), units::from_nm(d_min_nm), units::from_um(L_um)};
  }
  DevicePoint device_point() const {
    DevicePoint p;
    p.excitation = excitation();
    p.sheet = sheet();
    p.medium = medium();
    p.geometry = geometry();
    return p;
  }
  bool wants(const std::string& format) const { return formats.find(format) != std::string::npos; }
};

namespace detail {

struct ConfigKey {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError(key, "trailing characters in '" + text + "'");
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (!(v >= 1) || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw ConfigError(key, "expected a positive integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

inline const std::map<std::string, ConfigKey>& config_keys() {
  static const std::map<std::string, ConfigKey> keys = [] {
    std::map<std::string, ConfigKey> k;
    auto real = [&](const char* name, double RunConfig::*field) {
      k[name] = {[=](RunConfig& c, const std::string& v) { c.*field = parse_number(name, v); },
                 [=](const RunConfig& c) { return format_double(c.*field); }};
    };
    auto count = [&](const char* name, std::size_t RunConfig::*field) {
      k[name] = {[=](RunConfig& c, const std::string& v) { c.*field = parse_count(name, v); },
                 [=](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    auto text = [&](const char* name, std::string RunConfig::*field) {
      k[name] = {[=](RunConfig& c, const std::string& v) { c.*field = v; },
                 [=](const RunConfig& c) { return c.*field; }};
    };
    real("lambda0_um", &RunConfig::lambda0_um);
    real("E_F_eV", &RunConfig::E_F_eV);
    real("mobility_cm2_per_Vs", &RunConfig::mobility_cm2_per_Vs);
    real("v_F_m_per_s", &RunConfig::v_F_m_per_s);
    real("thickness_nm", &RunConfig::thickness_nm);
    real("gamma_per_s", &RunConfig::gamma_per_s);
    real("eps_h", &RunConfig::eps_h);
    real("R_nm", &RunConfig::R_nm);
    real("delta_nm", &RunConfig::delta_nm);
    real("d_min_nm", &RunConfig::d_min_nm);
    real("L_um", &RunConfig::L_um);
    count("n_samples", &RunConfig::n_samples);
    count("step_divisor", &RunConfig::step_divisor);
    real("quad_rel_tol", &RunConfig::quad_rel_tol);
    real("quad_abs_tol", &RunConfig::quad_abs_tol);
    count("quad_max_subdivisions", &RunConfig::quad_max_subdivisions);
    text("out_dir", &RunConfig::out_dir);
    text("formats", &RunConfig::formats);
    return k;
  }();
  return keys;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "R_um" -> "R"; "eps_h" -> "eps_h" (no recognised unit suffix).
inline std::string key_stem(const std::string& key) {
  static const std::vector<std::string> suffixes{"_um", "_nm", "_m", "_eV", "_meV", "_J", "_per_s", "_per_um",
                                                 "_per_m", "_cm2_per_Vs", "_m2_per_Vs", "_m_per_s", "_mm", "_s"};
  for (const auto& suf : suffixes)
    if (key.size() > suf.size() && key.compare(key.size() - suf.size(), suf.size(), suf) == 0)
      return key.substr(0, key.size() - suf.size());
  return key;
}

}  // namespace detail

/// Re-checks every physical invariant of the referenced modules.
inline void validate(const RunConfig& c) {
  auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  need(c.lambda0_um > 0, "lambda0_um", "vacuum wavelength > 0");
  need(c.E_F_eV > 0, "E_F_eV", "fermi level > 0");
  need(c.mobility_cm2_per_Vs > 0, "mobility_cm2_per_Vs", "mobility > 0");
  need(c.v_F_m_per_s > 0, "v_F_m_per_s", "fermi velocity > 0");
  need(c.thickness_nm > 0, "thickness_nm", "thickness > 0");
  need(c.eps_h >= 1, "eps_h", "permittivity >= 1");
  need(c.R_nm > 0, "R_nm", "radius > 0");
  need(c.delta_nm >= 0, "delta_nm", "offset >= 0");
  need(c.d_min_nm > 0, "d_min_nm", "min gap > 0");
  need(c.L_um > 0, "L_um", "length > 0");
  need(0.5 * c.L_um * 1e3 + 0.5 * c.delta_nm <= c.R_nm, "L_um", "L/2 + delta/2 <= R");
  need(c.n_samples >= 64, "n_samples", "n_samples >= 64");
  need(c.quad_rel_tol > 0, "quad_rel_tol", "tolerance > 0");
  need(c.quad_abs_tol > 0, "quad_abs_tol", "tolerance > 0");
  need(c.quad_max_subdivisions >= 16, "quad_max_subdivisions", "subdivisions >= 16");
  need(!c.out_dir.empty(), "out_dir", "non-empty directory");
}

/// Flat `key = value` text; `#` starts a comment. Absent keys keep their defaults.
inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  const auto& keys = detail::config_keys();
  std::istringstream in(text);
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      const std::string stem = detail::key_stem(key);
      for (const auto& [known, unused] : keys)
        if (stem != key && detail::key_stem(known) == stem)
          throw ConfigError(key, "unit-suffix mismatch, expected '" + known + "'");
      throw ConfigError(key, "unknown key");
    }
    if (seen[key]++) throw ConfigError(key, "duplicate key");
    it->second.set(c, value);
  }
  validate(c);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Canonical `key = value` listing of every key, sorted.
inline std::string canonical_config(const RunConfig& c) {
  std::string s;
  for (const auto& [key, k] : detail::config_keys()) s += key + " = " + k.get(c) + "\n";
  return s;
}

/// Hash of the physics/numerics keys. Output location and format selection are excluded.
inline std::string config_hash(const RunConfig& c) {
  std::string s;
  for (const auto& [key, k] : detail::config_keys())
    if (key != "out_dir" && key != "formats") s += key + "=" + k.get(c) + ";";
  return hex64(fnv1a(s));
}

}  // namespace spp
