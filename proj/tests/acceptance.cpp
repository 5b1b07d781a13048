// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance PATH_TO_TFD [WORKDIR]
#include <sys/wait.h>

#include <boost/math/special_functions/erf.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include "tfd/analysis.hpp"
#include "tfd/config.hpp"
#include "tfd/manifest.hpp"
#include "tfd/oracle.hpp"

using namespace tfd;

namespace {

const std::vector<double> kOrders{0.3, 0.5, 0.7};

double rel_err(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a / b - 1.0); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome special_functions() {
  double w = 0.0, m = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double z = 0.1 * k;
    w = std::max(w, rel_err(wright_m(0.5, z), std::exp(-0.25 * z * z) / std::sqrt(std::numbers::pi)));
    const double x = 0.05 * k;
    m = std::max(m, rel_err(mittag_leffler(0.5, 1.0, -x), std::exp(x * x) * boost::math::erfc(x)));
  }
  return {w <= 1e-10 && m <= 1e-8, fmt("wright_m rel %.2e", w) + fmt(", mittag_leffler rel %.2e", m)};
}

Outcome laplace_consistency() {
  double lap = 0.0;
  for (double a : kOrders) {
    const FractionalOrder o(a);
    for (double s : log_spaced(0.5, 40.0, 20)) {
      for (double x : {0.0, 0.5, 1.0}) {
        const LaplaceNodes n = laplace_nodes_for(s, x == 0.0 ? -o.half() : 0.0);
        lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return k_alpha(o, x, t); }, s, n).value,
                                    k_alpha_laplace_closed(o, x, s)));
        lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return theta(o, x, t); }, s, n).value,
                                    theta_laplace_closed(o, x, s)));
      }
      const LaplaceNodes n = laplace_nodes_for(s, 0.0);
      lap = std::max(lap, rel_err(numeric_laplace([&](double t) { return theta_rl(o, 1.0, t); }, s, n).value,
                                  theta_rl_laplace_closed(o, s)));
    }
  }
  return {lap <= 1e-5, fmt("max rel %.2e", lap)};
}

Outcome kernel_bounds() {
  bool pass = true;
  double worst = 0.0;
  for (double a : kOrders)
    for (const auto& r : kernel_bound_suite(FractionalOrder(a))) {
      pass = pass && r.pass;
      worst = std::max(worst, r.worst_ratio);
    }
  return {pass, fmt("worst validation ratio %.3f", worst)};
}

Outcome representation() {
  const ScalarFunction zero = [](double) { return 0.0; };
  const ScalarFunction cosine = [](double x) { return std::cos(std::numbers::pi * x); };
  double e_cos = 0.0, e_one = 0.0, e_l1 = 0.0;
  for (double a : kOrders) {
    const FractionalOrder o(a);
    const SpaceTimeGrid g{21, 40, 1.0};
    const IbvpSolution s = solve_ibvp({cosine, zero, 1.0}, o, g);
    const SolutionField sp = spectral_solve({0.0, 1.0}, o, g);
    for (int k = 0; k < g.nt; ++k)
      if (g.t(k) >= 0.05)
        for (int i = 0; i < g.nx; ++i) e_cos = std::max(e_cos, std::abs(s.field(i, k) - sp(i, k)));
    for (double v : solve_ibvp({[](double) { return 1.0; }, zero, 1.0}, o, g).field.values())
      e_one = std::max(e_one, std::abs(v - 1.0));
  }
  const FractionalOrder o(0.5);
  const CauchyData flux{zero, [](double t) { return t * (1.0 - 0.5 * t); }, 1.0};
  const IbvpSolution s = solve_ibvp(flux, o, {21, 32, 1.0});
  e_l1 = max_abs_difference(s.field, l1_solve(flux, zero, o, L1Config{}));
  return {e_cos <= 1e-4 && e_one <= 1e-6 && e_l1 <= 1e-3,
          fmt("cosine vs spectral %.2e", e_cos) + fmt(", constant %.2e", e_one) + fmt(", flux vs L1 %.2e", e_l1)};
}

Outcome growth() {
  bool pass = true;
  double worst = 0.0;
  const auto ts = log_spaced(1.0, 10.0, 24);
  for (double a : kOrders)
    for (const auto& d : standard_test_data(1.0)) {
      const BoundReport r = growth_bound_check(FractionalOrder(a), d.data, ts);
      pass = pass && r.pass && r.validation_range.hi >= 10.0;
      worst = std::max(worst, r.worst_ratio);
    }
  return {pass, fmt("worst validation ratio %.3f", worst)};
}

Outcome decomposition() {
  const FractionalOrder o(0.5);
  bool pass = true;
  double worst_id = 0.0, worst_explicit = 0.0;
  for (const auto& d : standard_test_data(1.0)) {
    LaplaceProbe probe = LaplaceProbe::log_spaced(1.0, 20.0, 20, 16.0);
    const Representation rep(d.data, o);
    const TraceTransform tr(rep, probe, 1, 1e-6);
    for (const BoundReport& r :
         {laplace_identity_check(d.data, o, probe, tr, 1e-4), decomposition_identity_check(d.data, o, probe, tr, 1e-4)}) {
      pass = pass && r.pass;
      worst_id = std::max(worst_id, r.worst_ratio);
    }
    for (const auto& r : decay_bounds_check(d.data, o, probe, tr))
      if (r.estimate_id == "I2_explicit" || r.estimate_id == "Lg_explicit") {
        pass = pass && r.pass;
        worst_explicit = std::max(worst_explicit, r.worst_ratio);
      }
  }
  return {pass, fmt("identity worst ratio %.3f", worst_id) + fmt(", explicit bounds worst ratio %.3f", worst_explicit)};
}

Outcome moment_rates() {
  bool pass = true;
  std::string detail;
  for (double c : {0.25, 0.5, 0.75}) {
    const ScalarFunction u0 = [c](double x) {
      if (x < c) return 0.0;
      const double r = (x - c) / (1.0 - c);
      return r * r;
    };
    const double rate = moment_growth_rate(u0, 20.0, 200.0, 37, {c});
    pass = pass && rate <= 1.0 - c + 0.02;
    detail += (detail.empty() ? "" : ", ") + fmt("c=%.2f", c) + fmt(" rate %.3f", rate);
  }
  return {pass, detail};
}

Outcome ucp_scenarios() {
  bool pass = true;
  std::string detail;
  for (const char* sc : {"A", "B", "C"})
    for (int n : {20, 40}) {
      ExperimentConfig c;
      c.scenario = sc;
      c.grid = {n + 1, n, 1.0};
      const ExperimentReport r = ucp_experiment(c);
      pass = pass && r.pass;
      detail += std::string(detail.empty() ? "" : ", ") + sc + "@" + std::to_string(n) + (r.pass ? " ok" : " FAILED");
    }
  return {pass, detail};
}

Outcome titchmarsh() {
  const FractionalOrder o(0.5);
  const TimeSeries kern = titchmarsh_kernel_trace(o, 1024, 1.0);
  const double h = kern.t[1] - kern.t[0];
  const TitchmarshReport r =
      titchmarsh_demo(kern, {{"T2=0.25", mollified_indicator(kern, 0.25, 1.0, 2.0 * h)},
                             {"T2=0.5", mollified_indicator(kern, 0.5, 1.0, 2.0 * h)}});
  return {r.pass, fmt("step %.3e", r.step) + (r.monotone ? ", onsets ordered" : ", onsets out of order")};
}

Outcome determinism(const std::string& tfd, const std::filesystem::path& work) {
  const auto out = work / "acceptance_determinism";
  std::filesystem::remove_all(out);
  std::string reports[2];
  for (auto& rep : reports) {
    const std::string cmd = tfd + " --out " + out.string() + " verify all >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "verify all exited with failure"};
    rep = read_file(out / "verify_all.json");
  }
  std::filesystem::remove_all(out);
  return {reports[0] == reports[1], std::to_string(reports[0].size()) + " bytes" +
                                        (reports[0] == reports[1] ? ", identical" : ", reports differ")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s PATH_TO_TFD [WORKDIR]\n", argv[0]);
    return 2;
  }
  const std::string tfd = argv[1];
  const std::filesystem::path work = argc > 2 ? argv[2] : std::filesystem::temp_directory_path();

  struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "special-function identities", 1.0, special_functions},
      {2, "Laplace consistency of kernels", 60.0, laplace_consistency},
      {3, "kernel bound suite", 0.0, kernel_bounds},
      {4, "representation formula vs oracles", 300.0, representation},
      {5, "trace growth bound to t=10", 0.0, growth},
      {6, "Laplace-domain decomposition", 0.0, decomposition},
      {7, "moment functional exponential rates", 0.0, moment_rates},
      {8, "UCP scenarios at two resolutions", 0.0, ucp_scenarios},
      {9, "Titchmarsh onset", 0.0, titchmarsh},
      {10, "determinism of verify all", 0.0, [&] { return determinism(tfd, work); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && wall >= c.time_limit) {
      o.pass = false;
      o.detail += fmt(", over time limit %.0f s", c.time_limit);
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d  %-38s %8.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, wall,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
