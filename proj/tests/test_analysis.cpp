#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "tfd/analysis.hpp"

using namespace tfd;

namespace {

const ScalarFunction kZero = [](double) { return 0.0; };
const ScalarFunction kOne = [](double) { return 1.0; };

double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a / b - 1.0); }

// One trace transform per standard datum, shared by the tests below.
struct Transforms {
  FractionalOrder order{0.5};
  std::vector<TestDatum> data = standard_test_data(1.0);
  std::map<std::string, std::unique_ptr<Representation>> reps;
  std::map<std::string, std::unique_ptr<TraceTransform>> tr;
  LaplaceProbe probe = LaplaceProbe::log_spaced(1.0, 20.0, 20, 16.0);

  Transforms() {
    for (const auto& d : data) {
      reps[d.name] = std::make_unique<Representation>(d.data, order);
      tr[d.name] = std::make_unique<TraceTransform>(*reps[d.name], probe);
    }
  }

  static const Transforms& get() {
    static const Transforms t;
    return t;
  }
};

const BoundReport& find(const std::vector<BoundReport>& v, const std::string& id) {
  for (const auto& r : v)
    if (r.estimate_id == id) return r;
  throw std::runtime_error("no report " + id);
}

}  // namespace

TEST(NumericLaplace, ExponentialOnUniformSamples) {
  TimeSeries f;
  for (int j = 0; j <= 4000; ++j) {
    f.t.push_back(j * 5e-3);
    f.values.push_back(std::exp(-f.t.back()));
  }
  const LaplaceResult r = numeric_laplace(f, 1.0, 0.0);
  // linear interpolation: O(h^2) error; the stride-2 estimate is asymptotically exact
  EXPECT_NEAR(r.value, 0.5 * (1.0 - std::exp(-40.0)), 2e-6);
  const double actual = std::abs(r.value - 0.5);
  EXPECT_NEAR(r.error, actual, 0.05 * actual);
}

TEST(NumericLaplace, ThetaOnGradedSamples) {
  const FractionalOrder o(0.5);
  TimeSeries f;
  for (double t : log_spaced(1e-6, 0.05, 400)) {
    f.t.push_back(t);
    f.values.push_back(theta(o, 0.5, t));
  }
  for (int j = 1; j <= 4000; ++j) {
    f.t.push_back(0.05 + j * (20.0 - 0.05) / 4000);
    f.values.push_back(theta(o, 0.5, f.t.back()));
  }
  const LaplaceResult r = numeric_laplace(f, 4.0, 0.0);
  EXPECT_LT(rel(r.value, theta_laplace_closed(o, 0.5, 4.0)), 1e-5);
  EXPECT_LT(r.error, 1e-5 * r.value);
}

TEST(NumericLaplace, SingularHeadIsIntegratedExactly) {
  // f = t^{-1/4} e^{-t}: L = Gamma(3/4) (s + 1)^{-3/4}
  TimeSeries f;
  for (double t : log_spaced(1e-8, 30.0, 6000)) {
    f.t.push_back(t);
    f.values.push_back(std::pow(t, -0.25) * std::exp(-t));
  }
  const LaplaceResult r = numeric_laplace(f, 2.0, -0.25);
  EXPECT_LT(rel(r.value, std::tgamma(0.75) * std::pow(3.0, -0.75)), 1e-5);
}

TEST(NumericLaplace, ZeroAndTailGuard) {
  TimeSeries z{{0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}};
  EXPECT_EQ(numeric_laplace(z, 1.0, 0.0).value, 0.0);
  TimeSeries one{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  EXPECT_THROW(numeric_laplace(one, 1.0, 0.0), TailDominates);
  EXPECT_THROW(numeric_laplace(one, -1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(numeric_laplace(one, 1.0, -1.5), std::invalid_argument);
}

TEST(NumericLaplace, NodeRuleMatchesClosedFormWithSingularity) {
  // t^{-1/2} has transform sqrt(pi / s)
  for (double s : {0.5, 3.0, 30.0}) {
    const LaplaceNodes n = laplace_nodes_for(s, -0.5);
    const LaplaceResult r = numeric_laplace([](double t) { return 1.0 / std::sqrt(t); }, s, n, 1.0);
    EXPECT_LT(rel(r.value, std::sqrt(std::numbers::pi / s)), 1e-9) << "s = " << s;
  }
}

TEST(CauchyResidual, Examples) {
  const FractionalOrder o(0.5);
  const SpaceTimeGrid g{11, 10, 1.0};
  EXPECT_EQ(cauchy_residual({kZero, kZero, 1.0}, o, g).sup_norm(), 0.0);
  for (double v : cauchy_residual({kOne, kZero, 1.0}, o, g).values) EXPECT_NEAR(v, 1.0, 1e-9);
  const TimeSeries c = cauchy_residual({[](double x) { return std::cos(std::numbers::pi * x); }, kZero, 1.0}, o, g);
  for (std::size_t k = 0; k < c.size(); ++k)
    EXPECT_NEAR(c.values[k], mittag_leffler(0.5, 1.0, -std::numbers::pi * std::numbers::pi * std::sqrt(c.t[k])), 1e-8);
}

TEST(LaplaceIdentity, ZeroAndConstant) {
  const auto& T = Transforms::get();
  LaplaceProbe p = T.probe;
  const BoundReport z = laplace_identity_check(find_test_datum("zero").data, T.order, p, *T.tr.at("zero"));
  EXPECT_TRUE(z.pass);
  EXPECT_EQ(z.worst_ratio, 0.0);
  for (double s : p.s_values)
    EXPECT_LT(rel(T.tr.at("ones")->full(s).value, -std::expm1(-16.0 * s) / s), 1e-12) << "s = " << s;
  EXPECT_TRUE(laplace_identity_check(find_test_datum("ones").data, T.order, p, *T.tr.at("ones")).pass);
  EXPECT_EQ(p.tail_bound.size(), p.s_values.size());
}

TEST(LaplaceIdentity, AllStandardData) {
  const auto& T = Transforms::get();
  for (const auto& d : T.data) {
    LaplaceProbe p = T.probe;
    const BoundReport r = laplace_identity_check(d.data, T.order, p, *T.tr.at(d.name), 1e-4);
    EXPECT_TRUE(r.pass) << d.name << " worst " << r.worst_ratio;
  }
}

TEST(LaplaceIdentity, MismatchShrinksWithHorizon) {
  const FractionalOrder o(0.5);
  const CauchyData d = find_test_datum("quadratic").data;
  const Representation rep(d, o);
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {6.0, 10.0, 16.0}) {
    LaplaceProbe p = LaplaceProbe::log_spaced(1.0, 20.0, 6, h);
    const TraceTransform tr(rep, p, 1, 1.0);
    double worst = 0.0;
    for (double s : p.s_values) {
      LaplaceProbe one{{s}, h, {}};
      worst = std::max(worst, laplace_identity_check(d, o, one, tr, 1.0).worst_ratio * 1.0);
    }
    EXPECT_LT(worst, prev) << "horizon " << h;
    prev = worst;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(DecayTerms, Examples) {
  const auto& T = Transforms::get();
  for (double s : {1.0, 5.0, 20.0}) {
    const DecayTerms z = decay_terms(find_test_datum("zero").data, T.order, *T.tr.at("zero"), s);
    EXPECT_EQ(z.I1_tail, 0.0);
    EXPECT_EQ(z.I2, 0.0);
    EXPECT_EQ(z.I3, 0.0);
    EXPECT_EQ(z.Lg, 0.0);
    const DecayTerms f = decay_terms(find_test_datum("flux").data, T.order, *T.tr.at("flux"), s);
    EXPECT_EQ(f.I2, 0.0);
    EXPECT_EQ(f.I3, 0.0);
    const DecayTerms one = decay_terms(find_test_datum("ones").data, T.order, *T.tr.at("ones"), s);
    const double zz = std::sqrt(std::sqrt(s));
    EXPECT_LT(rel(one.I3, 0.5 * std::pow(s, -0.75) * std::expm1(zz)), 1e-13) << "s = " << s;
  }
}

TEST(DecayTerms, IdentityAndExplicitBoundsForAllData) {
  const auto& T = Transforms::get();
  for (const auto& d : T.data) {
    const BoundReport id = decomposition_identity_check(d.data, T.order, T.probe, *T.tr.at(d.name), 1e-4);
    EXPECT_TRUE(id.pass) << d.name << " mismatch " << id.worst_ratio;
    const auto reports = decay_bounds_check(d.data, T.order, T.probe, *T.tr.at(d.name));
    EXPECT_TRUE(find(reports, "I2_explicit").pass) << d.name;
    EXPECT_TRUE(find(reports, "Lg_explicit").pass) << d.name;
    EXPECT_TRUE(find(reports, "I1_exponential").pass) << d.name;
  }
}

TEST(DecayBounds, LateralCauchyDataPassEverything) {
  const auto& T = Transforms::get();
  for (const std::string name : {"zero", "flux"}) {
    const auto reports = decay_bounds_check(find_test_datum(name).data, T.order, T.probe, *T.tr.at(name));
    EXPECT_EQ(reports.size(), 5u);
    for (const auto& r : reports) EXPECT_TRUE(r.pass) << name << " " << r.estimate_id << " " << r.worst_ratio;
  }
}

TEST(DecayBounds, ConstantInitialDataFailsTheI3AndMomentChecks) {
  const auto& T = Transforms::get();
  const auto reports = decay_bounds_check(find_test_datum("ones").data, T.order, T.probe, *T.tr.at("ones"));
  EXPECT_FALSE(find(reports, "I3_combined").pass);
  EXPECT_FALSE(find(reports, "moment_decay").pass);
  EXPECT_GT(find(reports, "moment_decay").fitted_constants.at("C2"), 0.0);
}

TEST(MomentFunctional, Examples) {
  EXPECT_EQ(moment_functional(kZero, 5.0).value(), 0.0);
  for (double z : {0.5, 3.0, 40.0}) EXPECT_LT(rel(moment_functional(kOne, z).value(), std::expm1(z) / z), 1e-12);
  // far past overflow of e^z the log form is still exact
  const MomentValue big = moment_functional(kOne, 1000.0);
  EXPECT_NEAR(big.log_abs, 1000.0 - std::log(1000.0), 1e-9);
  EXPECT_EQ(big.sign, 1);
  EXPECT_THROW(moment_functional(kOne, 0.0), std::invalid_argument);
}

class MomentRate : public ::testing::TestWithParam<double> {};

TEST_P(MomentRate, BoundedBySupportLength) {
  const double c = GetParam();
  const ScalarFunction u0 = [c](double x) { return x < c ? 0.0 : (x - c) * (x - c) / ((1 - c) * (1 - c)); };
  const double rate = moment_growth_rate(u0, 20.0, 200.0, 37, {c});
  EXPECT_LE(rate, 1.0 - c + 0.02);
  EXPECT_GT(rate, 1.0 - c - 0.1);
}

INSTANTIATE_TEST_SUITE_P(Supports, MomentRate, ::testing::Values(0.25, 0.5, 0.75));

class Ucp : public ::testing::TestWithParam<std::string> {};

TEST_P(Ucp, PassesAtTwoResolutions) {
  for (int n : {20, 40}) {
    ExperimentConfig cfg;
    cfg.scenario = GetParam();
    cfg.grid = {n + 1, n, 1.0};
    const ExperimentReport r = ucp_experiment(cfg);
    EXPECT_TRUE(r.pass) << "scenario " << cfg.scenario << " n = " << n;
    EXPECT_FALSE(r.fields.empty());
  }
}

INSTANTIATE_TEST_SUITE_P(Scenarios, Ucp, ::testing::Values("A", "B", "C"));

TEST(UcpScenarios, ZeroScenarioAtThreeResolutions) {
  double prev_margin = std::numeric_limits<double>::infinity();
  for (int n : {10, 20, 40}) {
    ExperimentConfig cfg;
    cfg.grid = {n + 1, n, 1.0};
    const ExperimentReport r = ucp_experiment(cfg);
    ASSERT_TRUE(r.pass) << "n = " << n;
    const double margin = r.metrics.at("field_sup") / (cfg.tol("kappa") * r.metrics.at("error_budget"));
    EXPECT_LE(margin, prev_margin);
    prev_margin = margin;
  }
}

TEST(UcpScenarios, ContrapositiveTraceFloor) {
  ExperimentConfig cfg;
  cfg.scenario = "B";
  const ExperimentReport r = ucp_experiment(cfg);
  EXPECT_GE(r.metrics.at("trace_min"), r.metrics.at("trace_floor"));
  EXPECT_NEAR(r.metrics.at("trace_floor"), 0.9 * mittag_leffler(0.5, 1.0, -std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_EQ(r.metrics.at("moment_check_failed"), 1.0);
}

TEST(UcpScenarios, UnknownScenarioRejected) {
  ExperimentConfig cfg;
  cfg.scenario = "Z";
  EXPECT_THROW(ucp_experiment(cfg), std::invalid_argument);
}

TEST(RestrictToPiece, MapsDataOntoUnitInterval) {
  const FractionalOrder o(0.5);
  const CauchyData d{[](double x) { return x; }, [](double t) { return t; }, 1.0};
  const CauchyData right = restrict_to_piece(d, d.g, o, 0.25, 0.5, false);
  EXPECT_DOUBLE_EQ(right.u0(0.0), 0.5);
  EXPECT_DOUBLE_EQ(right.u0(1.0), 1.0);
  EXPECT_DOUBLE_EQ(right.T, 1.0 / std::pow(0.5, 4.0));
  const CauchyData left = restrict_to_piece(d, d.g, o, 0.25, 0.5, true);
  EXPECT_DOUBLE_EQ(left.u0(0.0), 0.25);
  EXPECT_DOUBLE_EQ(left.u0(1.0), 0.0);
  EXPECT_THROW(restrict_to_piece(d, d.g, o, 0.5, 0.25, true), std::invalid_argument);
}

TEST(Titchmarsh, OnsetTracksLeadingSupport) {
  const FractionalOrder o(0.5);
  const TimeSeries k = titchmarsh_kernel_trace(o, 1024, 1.0);
  const double h = k.t[1] - k.t[0];
  TimeSeries zero{k.t, std::vector<double>(k.size(), 0.0)};
  const TitchmarshReport r = titchmarsh_demo(
      k, {{"zero", zero}, {"half", mollified_indicator(k, 0.5, 1.0, 2 * h)}, {"quarter", mollified_indicator(k, 0.25, 1.0, 2 * h)}});
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.monotone);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_TRUE(std::isinf(r.entries[0].onset));
  EXPECT_NEAR(r.entries[1].onset, 0.5, 2 * h + 1e-12);
  EXPECT_NEAR(r.entries[2].onset, 0.25, 2 * h + 1e-12);
  EXPECT_LT(r.entries[2].onset, r.entries[1].onset);
}

TEST(Titchmarsh, RejectsMismatchedNodes) {
  const TimeSeries k = titchmarsh_kernel_trace(FractionalOrder(0.5), 64, 1.0);
  TimeSeries g{{0.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(titchmarsh_demo(k, {{"g", g}}), std::invalid_argument);
}

TEST(ProbeAndSpacing, Validation) {
  EXPECT_THROW(LaplaceProbe::log_spaced(0.0, 1.0, 5, 10.0), std::invalid_argument);
  LaplaceProbe p{{2.0, 1.0}, 10.0, {}};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  const auto v = log_spaced(1.0, 100.0, 3);
  EXPECT_DOUBLE_EQ(v[1], 10.0);
  EXPECT_EQ(v[2], 100.0);
}
