#include <gtest/gtest.h>

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "mp_oracle.hpp"
#include "tfd/specfun.hpp"

using namespace tfd;

namespace {

double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a / b - 1.0); }

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

}  // namespace

TEST(RecipGamma, Examples) {
  EXPECT_EQ(recip_gamma(1.0), 1.0);
  EXPECT_NEAR(recip_gamma(0.5), kInvSqrtPi, 1e-15);
  EXPECT_EQ(recip_gamma(0.0), 0.0);
  EXPECT_EQ(recip_gamma(-3.0), 0.0);
  EXPECT_EQ(recip_gamma(-7.0), 0.0);
}

TEST(RecipGamma, Recurrence) {
  for (int k = 0; k <= 400; ++k) {
    const double x = 0.1 + (50.0 - 0.1) * k / 400.0;
    EXPECT_LT(rel(recip_gamma(x + 1.0), recip_gamma(x) / x), 1e-12) << "x = " << x;
  }
}

TEST(RecipGamma, NegativeNonIntegerMatchesOracle) {
  for (double x : {-0.5, -1.25, -2.75, -5.5}) {
    const double ref = static_cast<double>(mp_oracle::recip_gamma(mp_oracle::real(x)));
    EXPECT_LT(rel(recip_gamma(x), ref), 1e-13) << "x = " << x;
  }
}

TEST(WrightM, Examples) {
  EXPECT_NEAR(wright_m(0.5, 0.0), 0.5641895835477563, 1e-15);
  EXPECT_LT(rel(wright_m(0.5, 1.0), std::exp(-0.25) * kInvSqrtPi), 1e-14);
  EXPECT_LT(rel(wright_m(0.5, 1.0), 0.4393912894), 1e-9);
  EXPECT_LT(rel(wright_m(0.25, 2.0), mp_oracle::wright_m(0.25, 2.0)), 1e-12);
}

TEST(WrightM, HalfOrderGaussianOnZeroToTen) {
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double z = 0.1 * k;
    worst = std::max(worst, rel(wright_m(0.5, z), kInvSqrtPi * std::exp(-0.25 * z * z)));
  }
  EXPECT_LT(worst, 1e-10);
}

// The high-precision series is the reference across orders and arguments,
// including the large-argument path (z >= 0.5).
TEST(WrightM, MatchesHighPrecisionSeries) {
  // the series peak grows like exp(z^{1/(1-alpha)}), which caps z near alpha = 1
  const std::vector<std::pair<double, double>> orders{{0.1, 8.0}, {0.25, 8.0}, {0.4, 8.0}, {0.5, 8.0},
                                                      {0.6, 8.0}, {0.75, 5.0}, {0.9, 2.0}};
  for (const auto& [a, z_max] : orders) {
    for (double z : {0.0, 0.1, 0.3, 0.7, 1.0, 2.0, 3.5, 5.0, 8.0}) {
      if (z > z_max) continue;
      const double ref = mp_oracle::wright_m(a, z);
      ASSERT_TRUE(std::isfinite(ref)) << "oracle did not converge at alpha = " << a << ", z = " << z;
      const Evaluation e = wright_m_eval(a, z);
      EXPECT_LT(rel(e.value, ref), 1e-9) << "alpha = " << a << ", z = " << z;
      EXPECT_LE(std::abs(e.value - ref), std::max(10.0 * e.error, 1e-13 * std::abs(ref)))
          << "error estimate too small at alpha = " << a << ", z = " << z;
    }
  }
}

// Strictly positive wherever the leading asymptotic exp(-B z^{1/(1-alpha)}),
// B = (1 - alpha) alpha^{alpha/(1-alpha)}, is representable; never negative.
TEST(WrightM, PositiveForAllOrders) {
  for (int ia = 1; ia <= 9; ++ia) {
    const double a = 0.1 * ia;
    const double B = (1.0 - a) * std::pow(a, a / (1.0 - a));
    for (int k = 0; k <= 200; ++k) {
      const double z = 0.1 * k;
      const double v = wright_m(a, z);
      EXPECT_GE(v, 0.0) << "alpha = " << a << ", z = " << z;
      if (B * std::pow(z, 1.0 / (1.0 - a)) < 600.0) EXPECT_GT(v, 0.0) << "alpha = " << a << ", z = " << z;
    }
  }
}

TEST(WrightW, Examples) {
  EXPECT_NEAR(wright_w({-0.5, 0.5}, 0.0), 0.5641895835477563, 1e-15);
  EXPECT_LT(rel(wright_w({-0.25, 0.25}, -1.5), mp_oracle::wright(-0.25, 0.25, -1.5)), 1e-12);
}

TEST(WrightW, MFunctionIsTheSameCodePath) {
  for (double a : {0.2, 0.5, 0.8})
    for (double z : {0.0, 0.4, 1.0, 3.0, 9.0}) EXPECT_EQ(wright_m(a, z), wright_w({-a, 1.0 - a}, -z));
}

TEST(WrightW, RlKernelFamilyMatchesOracle) {
  // W_{-a/2, a/2}(-z) enters the RL derivative of the fundamental solution
  for (double a : {0.3, 0.5, 0.7})
    for (double z : {0.0, 0.2, 1.0, 2.5, 6.0}) {
      const double ref = mp_oracle::wright(-0.5 * a, 0.5 * a, -z);
      EXPECT_LT(std::abs(wright_w({-0.5 * a, 0.5 * a}, -z) - ref), 1e-10 * std::max(1.0, std::abs(ref)))
          << "alpha = " << a << ", z = " << z;
    }
}

TEST(WrightW, EvaluationCounterAdvances) {
  const auto before = wright_evaluation_count().load();
  (void)wright_m(0.5, 1.0);
  (void)wright_m(0.5, 2.0);
  EXPECT_GE(wright_evaluation_count().load(), before + 2);
}

TEST(MittagLeffler, Examples) {
  EXPECT_NEAR(mittag_leffler(1.0, 1.0, -2.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(mittag_leffler(1.0, 1.0, -2.0), 0.1353352832, 1e-10);
  EXPECT_EQ(mittag_leffler(0.5, 1.0, 0.0), 1.0);
  EXPECT_NEAR(mittag_leffler(0.5, 1.0, -1.0), 0.4275835762, 1e-9);
  EXPECT_LT(rel(mittag_leffler(0.5, 1.0, -1.0), std::exp(1.0) * boost::math::erfc(1.0)), 1e-13);
}

TEST(MittagLeffler, HalfOrderErfcOnZeroToFive) {
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double x = 0.05 * k;
    worst = std::max(worst, rel(mittag_leffler(0.5, 1.0, -x), std::exp(x * x) * boost::math::erfc(x)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(MittagLeffler, MatchesHighPrecisionSeries) {
  // the series peak is near exp(|z|^{1/alpha}), so small orders stay at small |z|
  const std::vector<std::pair<double, double>> orders{{0.2, 1.5}, {0.5, 9.0}, {0.8, 9.0}};
  for (const auto& [a, z_max] : orders)
    for (double b : {1.0, 0.5, 1.5})
      for (double z : {-0.3, -1.0, -1.5, -4.0, -9.0}) {
        if (-z > z_max) continue;
        const double ref = mp_oracle::mittag_leffler(a, b, z);
        ASSERT_TRUE(std::isfinite(ref)) << "oracle did not converge at alpha = " << a << ", z = " << z;
        EXPECT_LT(std::abs(mittag_leffler(a, b, z) - ref), 1e-9 * std::max(std::abs(ref), 1e-3))
            << "alpha = " << a << ", beta = " << b << ", z = " << z;
      }
}

TEST(MittagLeffler, MonotoneDecreasingOnNegativeAxis) {
  for (double a : {0.2, 0.5, 0.8, 1.0}) {
    double prev = mittag_leffler(a, 1.0, 0.0);
    for (int k = 1; k <= 500; ++k) {
      const double v = mittag_leffler(a, 1.0, -0.1 * k);
      EXPECT_LE(v, prev) << "alpha = " << a << ", z = " << -0.1 * k;
      EXPECT_GT(v, 0.0);
      prev = v;
    }
  }
}

TEST(MittagLeffler, LargeArgumentAlgebraicTail) {
  // E_{a,1}(-x) ~ x^{-1} / Gamma(1 - a) for large x
  for (double a : {0.3, 0.6}) {
    const double x = 1e4;
    EXPECT_LT(rel(mittag_leffler(a, 1.0, -x), 1.0 / (x * std::tgamma(1.0 - a))), 1e-3);
  }
}

TEST(SeriesTolerance, RejectsBadValues) {
  EXPECT_THROW((SeriesTolerance{0.0, 10}.validate()), std::invalid_argument);
  EXPECT_THROW((SeriesTolerance{1e-12, 0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW(SeriesTolerance{}.validate());
}
