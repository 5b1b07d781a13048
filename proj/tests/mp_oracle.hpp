#pragma once

// Brute-force power series in 100-digit decimal arithmetic. Used only as an
// independent reference for the double-precision special functions.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>

namespace mp_oracle {

using real = boost::multiprecision::cpp_dec_float_100;

inline real recip_gamma(const real& x) {
  // poles at 0, -1, -2, ...
  if (x <= 0 && boost::multiprecision::floor(x) == x) return real(0);
  return 1 / boost::math::tgamma(x);
}

/// sum_k z^k / (k! Gamma(lambda k + mu)), summed until 40 consecutive terms
/// fall below 1e-90 of the running maximum. NaN when that does not happen or
/// when cancellation leaves fewer than 20 digits.
inline double wright(double lambda, double mu, double z) {
  const real Z(z), L(lambda), M(mu);
  real sum = 0, zk = 1, fact = 1, peak = 0;
  int small = 0;
  for (int k = 0; k < 4000 && small < 40; ++k) {
    if (k > 0) {
      zk *= Z;
      fact *= k;
    }
    const real term = zk / fact * recip_gamma(L * k + M);
    sum += term;
    const real a = boost::multiprecision::abs(term);
    if (a > peak) peak = a;
    small = (k > 5 && a < peak * real("1e-90")) ? small + 1 : 0;
  }
  if (small < 40 || boost::multiprecision::abs(sum) < peak * real("1e-80")) return std::nan("");
  return static_cast<double>(sum);
}

inline double wright_m(double alpha, double z) { return wright(-alpha, 1.0 - alpha, -z); }

/// sum_k z^k / Gamma(alpha k + beta).
inline double mittag_leffler(double alpha, double beta, double z) {
  const real Z(z), A(alpha), B(beta);
  real sum = 0, zk = 1, peak = 0;
  int small = 0;
  for (int k = 0; k < 20000 && small < 40; ++k) {
    if (k > 0) zk *= Z;
    const real term = zk * recip_gamma(A * k + B);
    sum += term;
    const real a = boost::multiprecision::abs(term);
    if (a > peak) peak = a;
    small = (k > 5 && a < peak * real("1e-90")) ? small + 1 : 0;
  }
  if (small < 40 || boost::multiprecision::abs(sum) < peak * real("1e-80")) return std::nan("");
  return static_cast<double>(sum);
}

}  // namespace mp_oracle
