#pragma once

// Experiment configuration: one declarative file of `key = value` lines with
// [grid] and [tolerances] tables, read with Boost.PropertyTree's INI parser.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tfd/solver.hpp"

namespace tfd {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& registered_scenarios() {
  static const std::vector<std::string> names{"A", "B", "C"};
  return names;
}

inline const std::vector<std::string>& registered_data() {
  static const std::vector<std::string> names{"zero", "ones", "cosine", "flux", "quadratic"};
  return names;
}

/// Named tolerances and their defaults.
inline const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"w_tol", 1e-9},         // absolute quadrature error of w
      {"v_tol", 1e-9},         // absolute quadrature error of the v moments
      {"theta_abs", 1e-14},    // image-sum tail of the theta kernels
      {"laplace_rel", 1e-4},   // relative mismatch in Laplace-domain identities
      {"laplace_tail", 1e-6},  // relative truncation tail of numeric transforms
      {"kappa", 10.0},         // "identically zero" means below kappa x error budget
  };
  return tol;
}

struct ExperimentConfig {
  double alpha = 0.5;
  double T = 1.0;
  SpaceTimeGrid grid{};
  std::string scenario = "A";
  /// Standard test datum used by `solve` and `bench`.
  std::string datum = "cosine";
  std::map<std::string, double> tolerances = default_tolerances();
  std::string output_dir = "out";
  std::uint64_t seed = 20240601;
  int threads = 1;
  /// Right end of the trace window for growth checks.
  double t_large = 10.0;
  /// Horizon of numeric Laplace transforms of traces.
  double t_horizon = 16.0;
  bool dump_intermediates = false;

  double tol(const std::string& name) const {
    const auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + name + "'");
    return it->second;
  }

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive");
    try {
      grid.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const auto& sc = registered_scenarios();
    if (std::find(sc.begin(), sc.end(), scenario) == sc.end())
      throw ConfigError("scenario '" + scenario + "' is not registered (A, B, C)");
    const auto& dn = registered_data();
    if (std::find(dn.begin(), dn.end(), datum) == dn.end())
      throw ConfigError("datum '" + datum + "' is not registered (zero, ones, cosine, flux, quadratic)");
    for (const auto& [k, v] : tolerances) {
      if (!default_tolerances().contains(k)) throw ConfigError("unknown tolerance '" + k + "'");
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerance '" + k + "' must be positive");
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(t_large >= T)) throw ConfigError("t_large must be >= T");
    if (!(t_horizon > T + 1.0)) throw ConfigError("t_horizon must exceed T + 1");
  }

  SolverOptions solver_options() const {
    SolverOptions o;
    o.w_tol = tol("w_tol");
    o.v_tol = tol("v_tol");
    o.trunc.abs_tol = tol("theta_abs");
    o.threads = threads;
    return o;
  }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("'" + key + "': expected true or false, got '" + text + "'");
}

inline std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

// shortest form that round-trips
inline std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw ConfigError("cannot format number");
  return std::string(buf, p);
}

}  // namespace detail

/// Applies `NAME=VALUE` to the tolerance table.
inline void apply_tolerance_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--tol expects NAME=VALUE, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  if (!default_tolerances().contains(name)) throw ConfigError("unknown tolerance '" + name + "'");
  cfg.tolerances[name] = detail::parse_double(name, assignment.substr(eq + 1));
}

inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  const std::set<std::string> top{"alpha", "T", "scenario", "datum", "output_dir", "seed", "threads",
                                  "t_large", "t_horizon", "dump_intermediates"};
  for (const auto& [key, node] : tree) {
    const std::string val = detail::unquote(node.data());
    if (!node.empty()) {
      if (key == "grid") {
        for (const auto& [k, n] : node) {
          const std::string v = detail::unquote(n.data());
          if (k == "nx")
            cfg.grid.nx = static_cast<int>(detail::parse_integer("grid.nx", v));
          else if (k == "nt")
            cfg.grid.nt = static_cast<int>(detail::parse_integer("grid.nt", v));
          else if (k == "t_max")
            cfg.grid.t_max = detail::parse_double("grid.t_max", v);
          else
            throw ConfigError("unknown key 'grid." + k + "'");
        }
      } else if (key == "tolerances") {
        for (const auto& [k, n] : node) apply_tolerance_override(cfg, k + "=" + detail::unquote(n.data()));
      } else {
        throw ConfigError("unknown table [" + key + "]");
      }
      continue;
    }
    if (!top.contains(key)) throw ConfigError("unknown key '" + key + "'");
    if (key == "alpha")
      cfg.alpha = detail::parse_double(key, val);
    else if (key == "T")
      cfg.T = detail::parse_double(key, val);
    else if (key == "scenario")
      cfg.scenario = val;
    else if (key == "datum")
      cfg.datum = val;
    else if (key == "output_dir")
      cfg.output_dir = val;
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(detail::parse_integer(key, val));
    else if (key == "threads")
      cfg.threads = static_cast<int>(detail::parse_integer(key, val));
    else if (key == "t_large")
      cfg.t_large = detail::parse_double(key, val);
    else if (key == "t_horizon")
      cfg.t_horizon = detail::parse_double(key, val);
    else if (key == "dump_intermediates")
      cfg.dump_intermediates = detail::parse_bool(key, val);
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
inline std::string to_config_text(const ExperimentConfig& c) {
  using detail::format_double;
  std::ostringstream os;
  os << "alpha = " << format_double(c.alpha) << "\n"
     << "T = " << format_double(c.T) << "\n"
     << "scenario = " << c.scenario << "\n"
     << "datum = " << c.datum << "\n"
     << "output_dir = " << c.output_dir << "\n"
     << "seed = " << c.seed << "\n"
     << "threads = " << c.threads << "\n"
     << "t_large = " << format_double(c.t_large) << "\n"
     << "t_horizon = " << format_double(c.t_horizon) << "\n"
     << "dump_intermediates = " << (c.dump_intermediates ? "true" : "false") << "\n"
     << "\n[grid]\n"
     << "nx = " << c.grid.nx << "\n"
     << "nt = " << c.grid.nt << "\n"
     << "t_max = " << format_double(c.grid.t_max) << "\n"
     << "\n[tolerances]\n";
  for (const auto& [k, v] : c.tolerances) os << k << " = " << format_double(v) << "\n";
  return os.str();
}

}  // namespace tfd
