#pragma once

// Fundamental solution K_alpha of the free-space time-fractional diffusion
// equation, its Riemann-Liouville derivative D_t^{1-alpha} K_alpha, the
// periodized (theta) kernels on [-2, 2] and their Laplace transforms.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tfd/error.hpp"
#include "tfd/specfun.hpp"

namespace tfd {

/// Order alpha in (0, 1) of the Caputo derivative, with the exponents that
/// appear in the kernel estimates.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      std::ostringstream msg;
      msg << "FractionalOrder: alpha = " << alpha << " outside (0, 1)";
      throw std::invalid_argument(msg.str());
    }
  }

  double alpha() const { return alpha_; }
  double half() const { return 0.5 * alpha_; }
  double co() const { return 1.0 - alpha_; }
  /// Exponent 2/(2-alpha) of |x| in the Gaussian-type decay.
  double sigma_exp() const { return 2.0 / (2.0 - alpha_); }
  /// Exponent alpha/(2-alpha) of t in the same decay.
  double t_exp() const { return alpha_ / (2.0 - alpha_); }

  friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

 private:
  double alpha_;
};

/// Image-sum truncation for the theta kernels.
struct ThetaTruncation {
  double abs_tol = 1e-14;
  int max_m = 64;
  /// Constant C of the majorant C t^p exp(-sigma (|y| t^{-alpha/2})^{2/(2-alpha)}).
  double majorant_c = 10.0;

  void validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("ThetaTruncation: abs_tol must be positive");
    if (max_m < 1) throw std::invalid_argument("ThetaTruncation: max_m must be >= 1");
  }
};

/// Sharp exponential rate of M_{alpha/2}: with nu = alpha/2,
/// M_nu(z) ~ exp(-(1-nu) nu^{nu/(1-nu)} z^{1/(1-nu)}).
inline double asymptotic_decay_rate(const FractionalOrder& order) {
  const double nu = order.half();
  return (1.0 - nu) * std::pow(nu, nu / (1.0 - nu));
}

/// Rate used in the truncation majorant (10% below the sharp rate, which
/// absorbs the algebraic prefactor of the asymptotics).
inline double majorant_rate(const FractionalOrder& order) { return 0.9 * asymptotic_decay_rate(order); }

inline void require_positive_time(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    std::ostringstream msg;
    msg << who << ": t must be positive and finite (got " << t << ")";
    throw std::invalid_argument(msg.str());
  }
}

/// K_alpha(x, t) = 1/2 t^{-alpha/2} M_{alpha/2}(|x| t^{-alpha/2}).
inline Evaluation k_alpha_eval(const FractionalOrder& order, double x, double t) {
  require_positive_time(t, "k_alpha");
  const double scale = std::pow(t, -order.half());
  const Evaluation m = wright_m_eval(order.half(), std::abs(x) * scale);
  return {0.5 * scale * m.value, 0.5 * scale * m.error};
}

inline double k_alpha(const FractionalOrder& order, double x, double t) { return k_alpha_eval(order, x, t).value; }

/// D_t^{1-alpha} K_alpha(x, t) = 1/2 t^{alpha/2 - 1} W_{-alpha/2, alpha/2}(-|x| t^{-alpha/2}),
/// the inverse transform of 1/2 s^{-alpha/2} exp(-|x| s^{alpha/2}).
inline Evaluation k_alpha_rl_eval(const FractionalOrder& order, double x, double t) {
  require_positive_time(t, "k_alpha_rl");
  const double nu = order.half();
  const double scale = std::pow(t, -nu);
  const double pref = 0.5 * std::pow(t, nu - 1.0);
  const Evaluation w = wright_w_eval(WrightSpec{-nu, nu}, -std::abs(x) * scale);
  return {pref * w.value, pref * w.error};
}

inline double k_alpha_rl(const FractionalOrder& order, double x, double t) {
  return k_alpha_rl_eval(order, x, t).value;
}

/// Laplace transform of t -> K_alpha(x, t): 1/2 s^{alpha/2-1} exp(-|x| s^{alpha/2}).
inline double k_alpha_laplace_closed(const FractionalOrder& order, double x, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("k_alpha_laplace_closed: s must be positive");
  return 0.5 * std::pow(s, order.half() - 1.0) * std::exp(-std::abs(x) * std::pow(s, order.half()));
}

/// Laplace transform of t -> D_t^{1-alpha} K_alpha(x, t): 1/2 s^{-alpha/2} exp(-|x| s^{alpha/2}).
inline double k_alpha_rl_laplace_closed(const FractionalOrder& order, double x, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("k_alpha_rl_laplace_closed: s must be positive");
  return 0.5 * std::pow(s, -order.half()) * std::exp(-std::abs(x) * std::pow(s, order.half()));
}

/// Partial image sum with the majorant bound on the omitted images.
struct ImageSum {
  double value = 0.0;
  double tail_bound = 0.0;
  int images = 0;  // M: images m = -M..M were summed
};

namespace detail {

// Smallest M >= 1 such that sum_{|m| > M} of the majorant is below abs_tol.
// For |x| <= 2 every omitted image has |x + 2m| >= 2|m| - 2. The majorant
// ratio b(k+1)/b(k) decreases in k (the exponent 2/(2-alpha) exceeds 1), so
// the tail past M is bounded by the geometric series 2 b(M+1) / (1 - ratio).
inline ImageSum plan_images(const FractionalOrder& order, double t, double prefactor,
                            const ThetaTruncation& trunc, const char* who) {
  const double r = std::pow(t, -order.half());
  const double q = order.sigma_exp();
  const double sigma = majorant_rate(order);
  auto log_bound = [&](int k) {
    const double d = std::max(0.0, 2.0 * k - 2.0) * r;
    return std::log(trunc.majorant_c * prefactor) - sigma * std::pow(d, q);
  };
  double tail = std::numeric_limits<double>::infinity();
  for (int M = 1; M <= trunc.max_m; ++M) {
    const double lb = log_bound(M + 1);
    const double ratio = std::exp(log_bound(M + 2) - lb);
    tail = ratio < 1.0 ? 2.0 * std::exp(lb) / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    if (tail <= trunc.abs_tol) return ImageSum{0.0, tail, M};
  }
  std::ostringstream msg;
  msg << who << ": " << trunc.max_m << " images leave a tail bound of " << tail << " > " << trunc.abs_tol
      << " at t = " << t;
  throw TruncationCapReached(msg.str(), tail);
}

inline void require_theta_domain(double x, const char* who) {
  if (!(std::abs(x) <= 2.0 + 1e-12)) {
    std::ostringstream msg;
    msg << who << ": x = " << x << " outside [-2, 2]";
    throw std::invalid_argument(msg.str());
  }
}

template <class Kernel>
ImageSum image_sum(const FractionalOrder& order, double x, double t, double prefactor,
                   const ThetaTruncation& trunc, const char* who, Kernel&& kern) {
  trunc.validate();
  require_theta_domain(x, who);
  ImageSum plan = plan_images(order, t, prefactor, trunc, who);
  double sum = kern(x);
  for (int m = 1; m <= plan.images; ++m) sum += kern(x + 2.0 * m) + kern(x - 2.0 * m);
  plan.value = sum;
  return plan;
}

}  // namespace detail

/// theta_alpha(x, t) = sum_m K_alpha(x + 2m, t) for |x| <= 2.
inline ImageSum theta_eval(const FractionalOrder& order, double x, double t, const ThetaTruncation& trunc = {}) {
  require_positive_time(t, "theta");
  return detail::image_sum(order, x, t, std::pow(t, -order.half()), trunc, "theta",
                           [&](double y) { return k_alpha(order, y, t); });
}

inline double theta(const FractionalOrder& order, double x, double t, const ThetaTruncation& trunc = {}) {
  return theta_eval(order, x, t, trunc).value;
}

/// D_t^{1-alpha} theta_alpha(x, t) = sum_m D_t^{1-alpha} K_alpha(x + 2m, t) for |x| <= 2.
inline ImageSum theta_rl_eval(const FractionalOrder& order, double x, double t, const ThetaTruncation& trunc = {}) {
  require_positive_time(t, "theta_rl");
  return detail::image_sum(order, x, t, std::pow(t, order.half() - 1.0), trunc, "theta_rl",
                           [&](double y) { return k_alpha_rl(order, y, t); });
}

inline double theta_rl(const FractionalOrder& order, double x, double t, const ThetaTruncation& trunc = {}) {
  return theta_rl_eval(order, x, t, trunc).value;
}

/// theta_alpha(., t) or D_t^{1-alpha} theta_alpha(., t) at one fixed t, with
/// the image count planned once for all x.
class ThetaAtTime {
 public:
  enum class Kind { theta, theta_rl };

  ThetaAtTime(const FractionalOrder& order, double t, Kind kind, const ThetaTruncation& trunc = {})
      : order_(order), t_(t), kind_(kind) {
    require_positive_time(t, "ThetaAtTime");
    trunc.validate();
    const double pref = kind == Kind::theta ? std::pow(t, -order.half()) : std::pow(t, order.half() - 1.0);
    plan_ = detail::plan_images(order, t, pref, trunc, kind == Kind::theta ? "theta" : "theta_rl");
  }

  double operator()(double x) const {
    detail::require_theta_domain(x, "ThetaAtTime");
    double sum = kern(x);
    for (int m = 1; m <= plan_.images; ++m) sum += kern(x + 2.0 * m) + kern(x - 2.0 * m);
    return sum;
  }

  double t() const { return t_; }
  int images() const { return plan_.images; }
  double tail_bound() const { return plan_.tail_bound; }

 private:
  double kern(double y) const {
    return kind_ == Kind::theta ? k_alpha(order_, y, t_) : k_alpha_rl(order_, y, t_);
  }

  FractionalOrder order_;
  double t_;
  Kind kind_;
  ImageSum plan_;
};

/// Laplace transform of t -> theta_alpha(x, t) for x in [0, 1]:
/// 1/2 s^{alpha/2-1} (e^{x z} + e^{(2-x) z}) / (e^{2z} - 1), z = s^{alpha/2},
/// evaluated with negative exponents only.
inline double theta_laplace_closed(const FractionalOrder& order, double x, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("theta_laplace_closed: s must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("theta_laplace_closed: x must lie in [0, 1]");
  const double z = std::pow(s, order.half());
  const double num = std::exp((x - 2.0) * z) + std::exp(-x * z);
  return 0.5 * std::pow(s, order.half() - 1.0) * num / (-std::expm1(-2.0 * z));
}

/// Laplace transform of t -> D_t^{1-alpha} theta_alpha(1, t):
/// s^{-alpha/2} e^{z} / (e^{2z} - 1) = 1/2 s^{-alpha/2} / sinh(z).
inline double theta_rl_laplace_closed(const FractionalOrder& order, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("theta_rl_laplace_closed: s must be positive");
  const double z = std::pow(s, order.half());
  return std::pow(s, -order.half()) * std::exp(-z) / (-std::expm1(-2.0 * z));
}

}  // namespace tfd
