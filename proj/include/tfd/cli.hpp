#pragma once

// Subcommands of the command-line tool. Each returns a JSON document and an
// exit code (0 pass, 1 verification failure, 2 usage error) so they can be
// driven from tests without spawning processes.

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfd/analysis.hpp"
#include "tfd/bounds.hpp"
#include "tfd/config.hpp"
#include "tfd/io.hpp"
#include "tfd/kernel.hpp"
#include "tfd/manifest.hpp"
#include "tfd/oracle.hpp"
#include "tfd/solver.hpp"
#include "tfd/specfun.hpp"

namespace tfd::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownFunction : public UsageError {
 public:
  using UsageError::UsageError;
};

class BadParams : public UsageError {
 public:
  using UsageError::UsageError;
};

struct CommandResult {
  Json document;
  int exit_code = kPass;
};

// ---------------------------------------------------------------------------
// eval

inline const std::map<std::string, std::vector<std::string>>& eval_signatures() {
  static const std::map<std::string, std::vector<std::string>> sig{
      {"wright_m", {"alpha", "z"}},
      {"mittag_leffler", {"alpha", "beta", "z"}},
      {"k_alpha", {"alpha", "x", "t"}},
      {"k_alpha_rl", {"alpha", "x", "t"}},
      {"theta", {"alpha", "x", "t"}},
      {"theta_rl", {"alpha", "x", "t"}},
      {"theta_laplace_closed", {"alpha", "x", "s"}},
      {"theta_rl_laplace_closed", {"alpha", "s"}},
      {"moment_functional", {"u0", "c", "z"}},
  };
  return sig;
}

inline std::string eval_usage() {
  std::ostringstream os;
  os << "usage: eval FUNCTION key=value ...\n";
  for (const auto& [f, keys] : eval_signatures()) {
    os << "  " << f;
    for (const auto& k : keys) os << ' ' << k << "=...";
    os << '\n';
  }
  os << "  (mittag_leffler: beta defaults to 1; moment_functional: u0 in {zero, ones, cosine, quadratic, ramp},\n"
        "   c is the left end of the support of the ramp ((x-c)/(1-c))^2, default 0)\n";
  return os.str();
}

/// The u0 profiles accepted by `eval moment_functional`.
inline ScalarFunction named_profile(const std::string& name, double c) {
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "ones") return [](double) { return 1.0; };
  if (name == "cosine") return [](double x) { return std::cos(std::numbers::pi * x); };
  if (name == "quadratic") return [](double x) { return x * x; };
  if (name == "ramp") {
    if (!(c >= 0.0 && c < 1.0)) throw BadParams("ramp: c must lie in [0, 1)");
    return [c](double x) {
      if (x < c) return 0.0;
      const double r = (x - c) / (1.0 - c);
      return r * r;
    };
  }
  throw BadParams("unknown u0 profile '" + name + "'");
}

inline CommandResult cmd_eval(const std::string& function, const std::vector<std::string>& params) {
  const auto& sig = eval_signatures();
  const auto it = sig.find(function);
  if (it == sig.end()) throw UnknownFunction("unknown function '" + function + "'\n" + eval_usage());
  std::map<std::string, std::string> raw;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw BadParams("expected key=value, got '" + p + "'\n" + eval_usage());
    const std::string key = p.substr(0, eq);
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw BadParams("unknown parameter '" + key + "' for " + function + "\n" + eval_usage());
    raw[key] = p.substr(eq + 1);
  }
  auto num = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto r = raw.find(key);
    if (r == raw.end()) {
      if (fallback) return *fallback;
      throw BadParams("missing parameter '" + key + "' for " + function + "\n" + eval_usage());
    }
    try {
      return detail::parse_double(key, r->second);
    } catch (const ConfigError& e) {
      throw BadParams(e.what());
    }
  };
  Json p = Json::object();
  double value = 0.0, error = 0.0;
  try {
    if (function == "wright_m") {
      const Evaluation e = wright_m_eval(num("alpha"), num("z"));
      value = e.value;
      error = e.error;
    } else if (function == "mittag_leffler") {
      const Evaluation e = mittag_leffler_eval(num("alpha"), num("beta", 1.0), num("z"));
      value = e.value;
      error = e.error;
    } else if (function == "k_alpha" || function == "k_alpha_rl") {
      const FractionalOrder o(num("alpha"));
      const Evaluation e =
          function == "k_alpha" ? k_alpha_eval(o, num("x"), num("t")) : k_alpha_rl_eval(o, num("x"), num("t"));
      value = e.value;
      error = e.error;
    } else if (function == "theta" || function == "theta_rl") {
      const FractionalOrder o(num("alpha"));
      const ImageSum s = function == "theta" ? theta_eval(o, num("x"), num("t")) : theta_rl_eval(o, num("x"), num("t"));
      value = s.value;
      error = s.tail_bound;
    } else if (function == "theta_laplace_closed") {
      value = theta_laplace_closed(FractionalOrder(num("alpha")), num("x"), num("s"));
    } else if (function == "theta_rl_laplace_closed") {
      value = theta_rl_laplace_closed(FractionalOrder(num("alpha")), num("s"));
    } else {
      const auto u = raw.find("u0");
      if (u == raw.end()) throw BadParams("missing parameter 'u0' for moment_functional\n" + eval_usage());
      const MomentValue m = moment_functional(named_profile(u->second, num("c", 0.0)), num("z"));
      value = m.value();
      p["log_abs"] = json_number(m.log_abs);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw BadParams(std::string(e.what()) + "\n" + eval_usage());
  }
  Json params_json = Json::object();
  for (const auto& [k, v] : raw) params_json[k] = v;
  Json out{{"function", function},
           {"params", std::move(params_json)},
           {"value", json_number(value)},
           {"error_estimate", json_number(error)}};
  for (auto& [k, v] : p.items()) out[k] = v;
  return {out, kPass};
}

// ---------------------------------------------------------------------------
// solve

/// Runs the representation solver, the L1 oracle and (for cosine data with
/// g = 0) the spectral oracle on the configured datum; writes CSV and JSON
/// fields plus a manifest under cfg.output_dir.
inline CommandResult cmd_solve(const ExperimentConfig& cfg) {
  cfg.validate();
  const FractionalOrder order(cfg.alpha);
  const TestDatum datum = find_test_datum(cfg.datum, cfg.T);
  ManifestWriter out(cfg.output_dir);
  Json summary{{"schema_version", kSchemaVersion}, {"command", "solve"}, {"config", to_json(cfg)}};
  Json fields = Json::object();

  const IbvpSolution rep = solve_ibvp(datum.data, order, cfg.grid, cfg.solver_options());
  auto emit = [&](const std::string& name, const SolutionField& f) {
    out.write("field_" + name + ".csv", field_csv_text(f));
    out.write("field_" + name + ".json", dump_json(to_json(f)));
    fields[name] = Json{{"sup_norm", f.sup_norm()}};
  };
  emit("representation", rep.field);
  fields["representation"]["w_error"] = rep.w_error;
  fields["representation"]["v_error"] = rep.v_error;
  fields["representation"]["flux_stencil_error"] = rep.flux_stencil_error;

  L1Config l1;
  l1.t_max = cfg.grid.t_max;
  const SolutionField fd = l1_solve(datum.data, [](double) { return 0.0; }, order, l1);
  // the oracle grid is finer; report it sampled on the solver grid
  std::vector<double> resampled;
  for (int k = 0; k < cfg.grid.nt; ++k)
    for (int i = 0; i < cfg.grid.nx; ++i) resampled.push_back(fd.sample(cfg.grid.x(i), cfg.grid.t(k)));
  const SolutionField fd_coarse(cfg.grid, Provenance::l1_oracle, std::move(resampled));
  emit("l1_oracle", fd_coarse);
  fields["l1_oracle"]["max_diff_vs_representation"] = max_abs_difference(rep.field, fd);

  if (!datum.cosine_coeffs.empty()) {
    const SolutionField sp = spectral_solve(datum.cosine_coeffs, order, cfg.grid);
    emit("spectral_oracle", sp);
    fields["spectral_oracle"]["max_diff_vs_representation"] = max_abs_difference(rep.field, sp);
  }
  if (cfg.dump_intermediates) {
    out.write("trace_left.csv", series_csv_text(rep.trace_left));
    out.write("trace_right.csv", series_csv_text(rep.trace_right));
    out.write("flux_left.csv", series_csv_text(rep.flux_left));
  }
  summary["datum"] = cfg.datum;
  summary["fields"] = std::move(fields);
  out.write("solve_summary.json", dump_json(summary));
  out.finish(Json{{"command", "solve"}});
  return {summary, kPass};
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

inline Json to_json(const Check& c) {
  return Json{{"name", c.name}, {"pass", c.pass}, {"value", json_number(c.value)}, {"limit", json_number(c.limit)}};
}

/// One suite's results; `expected_fail` reports are contrapositive checks
/// that must fail for the suite to pass.
struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, BoundReport>> reports;
  std::vector<std::pair<std::string, BoundReport>> expected_fail;
  Json extra = Json::object();

  void check(std::string n, double value, double limit) { checks.push_back({std::move(n), value <= limit, value, limit}); }

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    for (const auto& [_, r] : reports)
      if (!r.pass) return false;
    for (const auto& [_, r] : expected_fail)
      if (r.pass) return false;
    return true;
  }

  Json json() const {
    Json c = Json::array(), r = Json::array(), f = Json::array();
    for (const auto& x : checks) c.push_back(to_json(x));
    for (const auto& [tag, x] : reports) {
      Json j = tfd::to_json(x);
      j["context"] = tag;
      r.push_back(std::move(j));
    }
    for (const auto& [tag, x] : expected_fail) {
      Json j = tfd::to_json(x);
      j["context"] = tag;
      f.push_back(std::move(j));
    }
    Json out{{"suite", name}, {"pass", pass()}, {"checks", c}, {"bound_reports", r}, {"expected_failures", f}};
    if (!extra.empty()) out["extra"] = extra;
    return out;
  }
};

namespace suites {

inline double rel_err(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a / b - 1.0); }

inline SuiteResult specfun() {
  SuiteResult s{"specfun"};
  double w = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double z = 0.1 * k;
    w = std::max(w, rel_err(wright_m(0.5, z), std::exp(-0.25 * z * z) / std::sqrt(std::numbers::pi)));
  }
  s.check("wright_m_half_gaussian", w, 1e-10);
  double m = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double x = 0.05 * k;
    m = std::max(m, rel_err(mittag_leffler(0.5, 1.0, -x), std::exp(x * x) * boost::math::erfc(x)));
  }
  s.check("mittag_leffler_half_erfc", m, 1e-8);
  double z0 = 0.0;
  for (double a : {0.25, 0.5, 0.75}) z0 = std::max(z0, rel_err(wright_m(a, 0.0), 1.0 / std::tgamma(1.0 - a)));
  s.check("wright_m_at_zero", z0, 1e-14);
  double e1 = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double x = 0.25 * k;
    // absolute: the algebraic tail ~ (1 - alpha)/x outweighs e^{-x} for large x
    e1 = std::max(e1, std::abs(mittag_leffler(0.999999, 1.0, -x) - std::exp(-x)));
  }
  s.check("mittag_leffler_near_exponential", e1, 1e-5);
  return s;
}

inline SuiteResult kernel() {
  SuiteResult s{"kernel"};
  double lap = 0.0, even = 0.0, mass = 0.0, pos = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    const FractionalOrder o(a);
    for (double sv : log_spaced(0.5, 40.0, 20)) {
      for (double x : {0.0, 0.5, 1.0}) {
        const LaplaceNodes n = laplace_nodes_for(sv, x == 0.0 ? -o.half() : 0.0);
        lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return k_alpha(o, x, t); }, sv, n).value,
                                    k_alpha_laplace_closed(o, x, sv)));
        lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return theta(o, x, t); }, sv, n).value,
                                    theta_laplace_closed(o, x, sv)));
      }
      const LaplaceNodes n = laplace_nodes_for(sv, 0.0);
      lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return theta_rl(o, 1.0, t); }, sv, n).value,
                                  theta_rl_laplace_closed(o, sv)));
    }
    for (double t : {0.01, 0.1, 1.0, 5.0}) {
      for (double x : {0.1, 0.4, 0.9, 1.7}) {
        even = std::max(even, std::abs(theta(o, x, t) - theta(o, -x, t)));
        even = std::max(even, std::abs(theta_rl(o, x, t) - theta_rl(o, -x, t)));
        if (!(theta(o, x, t) > 0.0)) pos = 1.0;
      }
      const Representation r(CauchyData{[](double) { return 1.0; }, [](double) { return 0.0; }, 1.0}, o);
      for (double x : {0.2, 0.5, 0.8}) mass = std::max(mass, std::abs(r.w(x, t).value - 1.0));
    }
  }
  s.check("laplace_consistency", lap, 1e-5);
  s.check("evenness", even, 1e-15);
  s.check("theta_mass", mass, 1e-9);
  s.check("theta_positive_violations", pos, 0.0);
  return s;
}

inline SuiteResult bounds(const ExperimentConfig& cfg) {
  SuiteResult s{"bounds"};
  const FractionalOrder o(cfg.alpha);
  for (const auto& r : kernel_bound_suite(o)) s.reports.emplace_back("kernel", r);
  for (const auto& r : theta_growth_suite(o)) s.reports.emplace_back("theta", r);
  const auto ts = log_spaced(cfg.T, cfg.t_large, 24);
  const SolverOptions opts = cfg.solver_options();
  for (const auto& d : standard_test_data(cfg.T)) s.reports.emplace_back(d.name, growth_bound_check(o, d.data, ts, opts));
  s.reports.emplace_back("g=1", esti_v0_check(o, log_spaced(1e-3, 1.0, 20), opts));
  return s;
}

inline SuiteResult solver(const ExperimentConfig& cfg) {
  SuiteResult s{"solver"};
  const FractionalOrder o(cfg.alpha);
  const SolverOptions opts = cfg.solver_options();
  const SpaceTimeGrid grid = cfg.grid;
  {
    const TestDatum d = find_test_datum("cosine", cfg.T);
    const IbvpSolution sol = solve_ibvp(d.data, o, grid, opts);
    const SolutionField sp = spectral_solve(d.cosine_coeffs, o, grid);
    double e = 0.0;
    for (int k = 0; k < grid.nt; ++k)
      if (grid.t(k) >= 0.05)
        for (int i = 0; i < grid.nx; ++i) e = std::max(e, std::abs(sol.field(i, k) - sp(i, k)));
    s.check("cosine_vs_spectral", e, 1e-4);
  }
  {
    const TestDatum d = find_test_datum("ones", cfg.T);
    const IbvpSolution sol = solve_ibvp(d.data, o, grid, opts);
    double e = 0.0;
    for (double v : sol.field.values()) e = std::max(e, std::abs(v - 1.0));
    s.check("ones_constant", e, 1e-6);
  }
  {
    const TestDatum d = find_test_datum("zero", cfg.T);
    s.check("zero_field", solve_ibvp(d.data, o, grid, opts).field.sup_norm(), 0.0);
  }
  {
    const TestDatum d = find_test_datum("flux", cfg.T);
    SpaceTimeGrid g2 = grid;
    g2.nt = std::max(grid.nt, 32);
    const IbvpSolution sol = solve_ibvp(d.data, o, g2, opts);
    L1Config l1;
    l1.t_max = g2.t_max;
    const SolutionField fd = l1_solve(d.data, [](double) { return 0.0; }, o, l1);
    s.check("flux_vs_l1", max_abs_difference(sol.field, fd), 1e-3);
  }
  return s;
}

inline SuiteResult analysis(const ExperimentConfig& cfg, ManifestWriter* dump) {
  SuiteResult s{"analysis"};
  const FractionalOrder o(cfg.alpha);
  const SolverOptions opts = cfg.solver_options();
  const double rel = cfg.tol("laplace_rel");
  for (const auto& d : standard_test_data(cfg.T)) {
    LaplaceProbe probe = LaplaceProbe::log_spaced(1.0, 20.0, 20, cfg.t_horizon);
    const Representation rep(d.data, o, opts);
    const TraceTransform tr(rep, probe, cfg.threads, cfg.tol("laplace_tail"));
    s.reports.emplace_back(d.name, laplace_identity_check(d.data, o, probe, tr, rel));
    s.reports.emplace_back(d.name, decomposition_identity_check(d.data, o, probe, tr, rel));
    const auto decay = decay_bounds_check(d.data, o, probe, tr);
    for (const auto& r : decay) {
      const std::string& id = r.estimate_id;
      if (id == "I2_explicit" || id == "Lg_explicit" || id == "I1_exponential") {
        s.reports.emplace_back(d.name, r);
      } else if (d.name == "zero" || d.name == "flux") {
        // lateral-Cauchy-type data: u0 has no mass, every decay bound holds
        s.reports.emplace_back(d.name, r);
      } else if (d.name == "ones") {
        s.expected_fail.emplace_back(d.name, r);
      }
    }
    if (dump) {
      std::ostringstream os;
      os << "s,I1_tail,I1_full,I2,I3,Lg\n";
      for (double sv : probe.s_values) {
        const DecayTerms t = decay_terms(d.data, o, tr, sv);
        os << format_number(sv) << ',' << format_number(t.I1_tail) << ',' << format_number(t.I1_full) << ','
           << format_number(t.I2) << ',' << format_number(t.I3) << ',' << format_number(t.Lg) << '\n';
      }
      dump->write("decay_terms_" + d.name + ".csv", os.str());
    }
  }
  Json rates = Json::array();
  for (double c : {0.25, 0.5, 0.75}) {
    const double rate = moment_growth_rate(named_profile("ramp", c), 20.0, 200.0, 37, {c});
    s.check("moment_rate_c=" + format_number(c), rate, 1.0 - c + 0.02);
    rates.push_back(Json{{"c", c}, {"rate", rate}});
  }
  s.extra["moment_rates"] = rates;
  const TimeSeries kern = titchmarsh_kernel_trace(o, 1024, 1.0, opts.trunc);
  const double h = kern.t[1] - kern.t[0];
  TimeSeries zero{kern.t, std::vector<double>(kern.size(), 0.0)};
  const TitchmarshReport tit = titchmarsh_demo(
      kern, {{"g=0", zero},
             {"T2=0.5", mollified_indicator(kern, 0.5, 1.0, 2.0 * h)},
             {"T2=0.25", mollified_indicator(kern, 0.25, 1.0, 2.0 * h)}});
  s.check("titchmarsh_onset", tit.pass ? 0.0 : 1.0, 0.0);
  s.extra["titchmarsh"] = tfd::to_json(tit);
  return s;
}

inline SuiteResult ucp(const ExperimentConfig& cfg, const std::vector<std::string>& scenarios, ManifestWriter* dump) {
  SuiteResult s{"ucp"};
  Json reports = Json::array();
  for (const auto& sc : scenarios) {
    ExperimentConfig c = cfg;
    c.scenario = sc;
    ExperimentReport r = ucp_experiment(c);
    if (dump) {
      for (const auto& [name, f] : r.fields) {
        const std::string file = "ucp_" + sc + "_" + name + ".csv";
        dump->write(file, field_csv_text(f));
        r.artifacts.push_back(file);
      }
      for (const auto& [name, ser] : r.series) {
        const std::string file = "ucp_" + sc + "_" + name + ".csv";
        dump->write(file, series_csv_text(ser));
        r.artifacts.push_back(file);
      }
    }
    s.check("scenario_" + sc, r.pass ? 0.0 : 1.0, 0.0);
    reports.push_back(tfd::to_json(r));
  }
  s.extra["experiments"] = reports;
  return s;
}

}  // namespace suites

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"specfun", "kernel", "bounds", "solver", "analysis", "ucp", "all",
                                              "manifest"};
  return names;
}

/// Runs a suite, writes verify_<suite>.json (and intermediates on request)
/// with a manifest under cfg.output_dir.
inline CommandResult cmd_verify(const std::string& suite, const ExperimentConfig& cfg) {
  const auto& names = verify_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw UsageError("unknown suite '" + suite + "' (specfun, kernel, bounds, solver, analysis, ucp, all, manifest)");
  cfg.validate();
  if (suite == "manifest") {
    const ManifestCheck m = verify_manifest(cfg.output_dir);
    Json doc{{"schema_version", kSchemaVersion}, {"suite", "manifest"}, {"pass", m.ok},
             {"files", m.files},                 {"problems", m.problems}};
    return {doc, m.ok ? kPass : kFail};
  }
  ManifestWriter out(cfg.output_dir);
  ManifestWriter* dump = cfg.dump_intermediates ? &out : nullptr;
  std::vector<SuiteResult> results;
  const bool all = suite == "all";
  if (all || suite == "specfun") results.push_back(suites::specfun());
  if (all || suite == "kernel") results.push_back(suites::kernel());
  if (all || suite == "bounds") results.push_back(suites::bounds(cfg));
  if (all || suite == "solver") results.push_back(suites::solver(cfg));
  if (all || suite == "analysis") results.push_back(suites::analysis(cfg, dump));
  if (all || suite == "ucp")
    results.push_back(suites::ucp(cfg, all ? registered_scenarios() : std::vector<std::string>{cfg.scenario}, dump));
  bool pass = true;
  Json arr = Json::array();
  for (const auto& r : results) {
    pass = pass && r.pass();
    arr.push_back(r.json());
  }
  Json doc{{"schema_version", kSchemaVersion}, {"suite", suite},   {"config", to_json(cfg)},
           {"pass", pass},                     {"suites", arr}};
  out.write("verify_" + suite + ".json", dump_json(doc));
  out.finish(Json{{"command", "verify"}, {"suite", suite}});
  return {doc, pass ? kPass : kFail};
}

/// Human-readable summary of a verify document.
inline std::string verify_summary(const Json& doc) {
  std::ostringstream os;
  if (doc.contains("suites")) {
    for (const auto& s : doc["suites"]) {
      os << (s["pass"].get<bool>() ? "PASS " : "FAIL ") << s["suite"].get<std::string>() << '\n';
      for (const auto& c : s["checks"])
        if (!c["pass"].get<bool>()) os << "  failed check " << c["name"].get<std::string>() << '\n';
      for (const auto& r : s["bound_reports"])
        if (!r["pass"].get<bool>())
          os << "  failed bound " << r["estimate_id"].get<std::string>() << " (" << r["context"].get<std::string>()
             << ")\n";
      for (const auto& r : s["expected_failures"])
        if (r["pass"].get<bool>())
          os << "  bound expected to fail passed: " << r["estimate_id"].get<std::string>() << '\n';
    }
  }
  os << (doc["pass"].get<bool>() ? "verify: PASS" : "verify: FAIL") << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// bench

/// Wall time, Wright evaluations and accuracy against the spectral solution
/// on the cosine datum for the representation solver, the L1 oracle and the
/// spectral solver, at nt and 2 nt; plus the L1 per-step cost ratio under
/// doubling of the step count.
inline CommandResult cmd_bench(const ExperimentConfig& cfg, int l1_nt = 1024) {
  cfg.validate();
  const FractionalOrder o(cfg.alpha);
  const TestDatum d = find_test_datum("cosine", cfg.T);
  using clock = std::chrono::steady_clock;
  Json rows = Json::array();
  std::ostringstream text;
  text << "method            nx    nt      wall_s     wright_evals  max_err_vs_spectral\n";
  auto record = [&](const std::string& method, int nx, int nt, double wall, std::uint64_t evals, double err) {
    rows.push_back(Json{{"method", method},
                        {"nx", nx},
                        {"nt", nt},
                        {"wall_seconds", wall},
                        {"wright_evals", evals},
                        {"max_err_vs_spectral", json_number(err)}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %4d %6d %11.4f %16llu %20.3e\n", method.c_str(), nx, nt, wall,
                  static_cast<unsigned long long>(evals), err);
    text << buf;
  };
  auto timed = [&](auto&& fn) {
    const auto c0 = wright_evaluation_count().load();
    const auto t0 = clock::now();
    auto result = fn();
    const double wall = std::chrono::duration<double>(clock::now() - t0).count();
    return std::tuple{std::move(result), wall, wright_evaluation_count().load() - c0};
  };
  auto err_vs = [&](const SolutionField& f, const SpaceTimeGrid& g) {
    const SolutionField sp = spectral_solve(d.cosine_coeffs, o, g);
    double e = 0.0;
    for (int k = 0; k < g.nt; ++k)
      if (g.t(k) >= 0.05)
        for (int i = 0; i < g.nx; ++i) e = std::max(e, std::abs(f.sample(g.x(i), g.t(k)) - sp(i, k)));
    return e;
  };
  for (int nt : {cfg.grid.nt, 2 * cfg.grid.nt}) {
    SpaceTimeGrid g = cfg.grid;
    g.nt = nt;
    auto [sol, wall, evals] = timed([&] { return solve_ibvp(d.data, o, g, cfg.solver_options()); });
    record("representation", g.nx, g.nt, wall, evals, err_vs(sol.field, g));
    auto [sp, wall2, evals2] = timed([&] { return spectral_solve(d.cosine_coeffs, o, g); });
    record("spectral", g.nx, g.nt, wall2, evals2, 0.0);
  }
  double per_step[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    L1Config l1;
    l1.nt_fd = l1_nt << k;
    l1.t_max = cfg.grid.t_max;
    auto [f, wall, evals] = timed([&] { return l1_solve(d.data, [](double) { return 0.0; }, o, l1); });
    record("l1_oracle", l1.nx_fd, l1.nt_fd, wall, evals, err_vs(f, cfg.grid));
    per_step[k] = wall / l1.nt_fd;
  }
  const double ratio = per_step[1] / per_step[0];
  text << "l1 per-step cost ratio under nt doubling: " << ratio << " (history sum predicts 2)\n";
  Json doc{{"schema_version", kSchemaVersion},
           {"command", "bench"},
           {"config", to_json(cfg)},
           {"rows", rows},
           {"l1_per_step_cost_ratio", ratio},
           {"l1_ratio_within_50_percent", ratio >= 1.0 && ratio <= 3.0}};
  ManifestWriter out(cfg.output_dir);
  out.write("bench.json", dump_json(doc));
  out.write("bench.txt", text.str());
  out.finish(Json{{"command", "bench"}});
  doc["text"] = text.str();
  return {doc, kPass};
}

}  // namespace tfd::cli
