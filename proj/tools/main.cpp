// tfd: evaluate kernels, solve, verify and benchmark from the command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tfd/cli.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::optional<double> alpha;
  std::optional<std::string> scenario;
  std::optional<std::string> datum;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<int> nx, nt;
  std::vector<std::string> tol;
  bool dump = false;
  bool print_config = false;
};

tfd::ExperimentConfig build_config(const GlobalFlags& f) {
  tfd::ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw tfd::ConfigError("cannot open config file '" + f.config_path + "'");
    cfg = tfd::parse_config(in);
  }
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.scenario) cfg.scenario = *f.scenario;
  if (f.datum) cfg.datum = *f.datum;
  if (f.out) cfg.output_dir = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.nx) cfg.grid.nx = *f.nx;
  if (f.nt) cfg.grid.nt = *f.nt;
  for (const auto& t : f.tol) tfd::apply_tolerance_override(cfg, t);
  if (f.dump) cfg.dump_intermediates = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Theta-function solver and checks for 1-D time-fractional diffusion"};
  app.require_subcommand(0, 1);
  GlobalFlags f;
  app.add_option("--config", f.config_path, "Experiment config file (key = value, [grid], [tolerances])");
  app.add_option("--alpha", f.alpha, "Fractional order in (0, 1)");
  app.add_option("--scenario", f.scenario, "UCP scenario (A, B, C)");
  app.add_option("--datum", f.datum, "Test datum (zero, ones, cosine, flux, quadratic)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--threads", f.threads, "Worker threads");
  app.add_option("--nx", f.nx, "Spatial grid points");
  app.add_option("--nt", f.nt, "Time steps");
  app.add_option("--tol", f.tol, "Tolerance override NAME=VALUE (repeatable)");
  app.add_flag("--dump-intermediates", f.dump, "Write intermediate series as CSV");
  app.add_flag("--print-config", f.print_config, "Print the effective config and exit");

  auto* eval = app.add_subcommand("eval", "Evaluate a special function or kernel")->fallthrough();
  std::string function;
  std::vector<std::string> params;
  eval->add_option("function", function, "Function name")->required();
  eval->add_option("params", params, "key=value parameters");

  auto* solve = app.add_subcommand("solve", "Solve the configured datum with all methods")->fallthrough();

  auto* verify = app.add_subcommand("verify", "Run a verification suite")->fallthrough();
  std::string suite = "all";
  verify->add_option("suite", suite, "specfun, kernel, bounds, solver, analysis, ucp, all, manifest");

  auto* bench = app.add_subcommand("bench", "Time the solvers on the cosine datum")->fallthrough();
  int l1_nt = 1024;
  bench->add_option("--l1-nt", l1_nt, "L1 step count (doubled for the cost ratio)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : tfd::cli::kUsage;
  }

  try {
    const tfd::ExperimentConfig cfg = build_config(f);
    if (f.print_config) {
      std::cout << tfd::to_config_text(cfg);
      return 0;
    }
    if (*eval) {
      std::cout << tfd::cli::cmd_eval(function, params).document.dump(2) << '\n';
      return 0;
    }
    if (*solve) {
      const auto r = tfd::cli::cmd_solve(cfg);
      std::cout << "wrote " << cfg.output_dir << "/manifest.json\n";
      return r.exit_code;
    }
    if (*verify) {
      const auto r = tfd::cli::cmd_verify(suite, cfg);
      std::cout << tfd::cli::verify_summary(r.document);
      return r.exit_code;
    }
    if (*bench) {
      const auto r = tfd::cli::cmd_bench(cfg, l1_nt);
      std::cout << r.document["text"].get<std::string>();
      return r.exit_code;
    }
    std::cout << app.help();
    return 0;
  } catch (const tfd::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tfd::cli::kUsage;
  } catch (const tfd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return tfd::cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tfd::cli::kFail;
  }
}
