#pragma once

// Special functions for time-fractional diffusion: the reciprocal Gamma
// function, Wright functions W_{lambda,mu} with -1 < lambda < 0 (the
// M-function in particular) and the two-parameter Mittag-Leffler function on
// the negative real axis.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tfd/error.hpp"
#include "tfd/quadrature.hpp"

namespace tfd {

/// Truncation control for power series.
struct SeriesTolerance {
  double rel_tol = 1e-12;
  int max_terms = 500;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("SeriesTolerance: rel_tol must lie in (0, 1)");
    if (max_terms < 1) throw std::invalid_argument("SeriesTolerance: max_terms must be >= 1");
  }
};

/// Index pair of the Wright series sum_k z^k / (k! Gamma(lambda k + mu)).
struct WrightSpec {
  double lambda;
  double mu;
};

/// Value together with an absolute error estimate.
struct Evaluation {
  double value = 0.0;
  double error = 0.0;
};

/// Series are abandoned once the largest term exceeds the sum by this factor.
inline constexpr double kMaxSeriesLoss = 1e3;

/// 1/Gamma(x). Exactly zero at the poles x = 0, -1, -2, ...; the reflection
/// formula is used for x < 0.5. Returns 0 where Gamma overflows (x > 171.6) and
/// a signed infinity where 1/Gamma itself overflows (x < -171 or so).
inline double recip_gamma(double x) {
  if (!std::isfinite(x)) {
    if (std::isnan(x)) return x;
    return x > 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x >= 0.5) {
    if (x > 171.7) return 0.0;
    return 1.0 / std::tgamma(x);
  }
  // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi; sin(pi x) via range reduction
  const double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  double s;
  if (r > 0.5)
    s = std::sin(std::numbers::pi * (1.0 - r));
  else if (r < -0.5)
    s = -std::sin(std::numbers::pi * (1.0 + r));
  else
    s = std::sin(std::numbers::pi * r);
  const double g = std::tgamma(1.0 - x);
  if (std::isinf(g)) return s > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return g * s / std::numbers::pi;
}

namespace detail {

struct SeriesOutcome {
  double sum = 0.0;
  double error = 0.0;
  double max_term = 0.0;
  int terms = 0;
  bool converged = false;
};

inline double log_abs_recip_gamma(double x, int& sign) {
  int sg = 1;
  const double lg = ::lgamma_r(x, &sg);
  sign = sg;
  return -lg;
}

// Direct summation of the Wright series with the three-small-terms tail rule.
inline SeriesOutcome wright_series(const WrightSpec& spec, double z, const SeriesTolerance& tol) {
  SeriesOutcome out;
  double p = 1.0;  // z^k / k!
  int small_run = 0;
  double last_small = std::numeric_limits<double>::infinity();
  double first_term = 0.0;
  double tail_mag = 0.0;
  for (int k = 0; k < tol.max_terms; ++k) {
    if (k > 0) p *= z / static_cast<double>(k);
    const double arg = spec.lambda * k + spec.mu;
    double term;
    const double rg = recip_gamma(arg);
    if (rg == 0.0) {
      term = 0.0;
    } else if (std::isfinite(rg) && std::abs(p) > 1e-250) {
      term = p * rg;
    } else {
      int sg = 1;
      const double lr = log_abs_recip_gamma(arg, sg);
      const double lz = (z == 0.0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(z));
      const double lt = k * lz - std::lgamma(static_cast<double>(k) + 1.0) + lr;
      term = std::exp(lt) * sg * ((z < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0);
    }
    if (k == 0) first_term = std::abs(term);
    out.sum += term;
    out.max_term = std::max(out.max_term, std::abs(term));
    out.terms = k + 1;

    const double mag = std::abs(term);
    if (mag <= tol.rel_tol * std::abs(out.sum)) {
      if (mag == 0.0 || mag <= last_small) {
        ++small_run;
        tail_mag += mag;
        if (mag != 0.0) last_small = mag;
      } else {
        small_run = 1;
        tail_mag = mag;
        last_small = mag;
      }
    } else {
      small_run = 0;
      tail_mag = 0.0;
      last_small = std::numeric_limits<double>::infinity();
    }
    if (small_run >= 3 && k >= 2) {
      out.converged = true;
      break;
    }
    // Hopeless cancellation: the answer cannot exceed the largest partial sums by
    // much, and we already lost more digits than the budget allows.
    if (out.max_term > kMaxSeriesLoss * std::max(first_term, std::abs(out.sum)) * 1e3) break;
  }
  out.error = tail_mag + 8.0 * std::numeric_limits<double>::epsilon() * out.max_term *
                             std::sqrt(static_cast<double>(out.terms));
  return out;
}

// Upper incomplete gamma Gamma(a, y) by the Legendre continued fraction
// (modified Lentz), valid and fast for y > a + 1; Boost elsewhere.
// Returns Gamma(a, y) * exp(shift); shift lets callers avoid underflow.
inline double upper_incomplete_gamma(double a, double y, double shift = 0.0) {
  if (!(y > a + 1.0)) return boost::math::tgamma(a, y) * std::exp(shift);
  constexpr double tiny = 1e-300;
  double b = y + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 300; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-y + shift + a * std::log(y)) * h;
}

// Kanter-type integral representations of the two Wright families used by
// the fundamental solution:
//   M_nu(z)        = z^{nu/(1-nu)} / ((1-nu) pi) int_0^pi a(phi) exp(-Z a(phi)) dphi
//   W_{-nu,nu}(-z) = nu / pi int_0^pi a(phi)^{nu-1} Gamma(2-nu, Z a(phi)) dphi
// with Z = z^{1/(1-nu)} and
//   a(phi) = sin(nu phi)^{nu/(1-nu)} sin((1-nu) phi) / sin(phi)^{1/(1-nu)}.
// The second follows from W_{-nu,nu}(-z) = nu int_z^inf r M_nu(r) dr.
// a is increasing on (0, pi), so the integrands are positive and free of
// cancellation; this is the large-argument path.
class KanterTable {
 public:
  explicit KanterTable(double nu) : nu_(nu) {
    const QuadratureRule gl = gauss_legendre(16);
    constexpr int levels = 26;
    const double half = 0.5 * std::numbers::pi;
    // lower half, graded toward phi = 0 where the integrand concentrates for
    // large Z (width ~ Z^{-1/2}; Z stays below ~2e3 before underflow)
    std::vector<double> lower = graded_breaks(0.0, half, 12);
    for (std::size_t p = 0; p + 1 < lower.size(); ++p) {
      const double a = lower[p], b = lower[p + 1];
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double phi = a + (b - a) * gl.nodes[i];
        push(phi, std::numbers::pi - phi, gl.weights[i] * (b - a));
      }
    }
    // upper half in u = pi - phi, graded toward u = 0
    // a ~ u^{-1/(1-nu)} near pi: finer grading keeps the exponent change per
    // panel bounded as nu -> 1
    const double ratio = std::max(0.5, std::pow(0.5, 2.0 * (1.0 - nu)));
    const int upper_levels = static_cast<int>(std::ceil(levels * std::log(0.5) / std::log(ratio)));
    std::vector<double> upper = graded_breaks(0.0, half, upper_levels, ratio);
    std::vector<Node> tmp;
    for (std::size_t p = 0; p + 1 < upper.size(); ++p) {
      const double a = upper[p], b = upper[p + 1];
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double u = a + (b - a) * gl.nodes[i];
        tmp.push_back(make_node(std::numbers::pi - u, u, gl.weights[i] * (b - a)));
      }
    }
    std::reverse(tmp.begin(), tmp.end());
    nodes_.insert(nodes_.end(), tmp.begin(), tmp.end());
    a_min_ = nodes_.front().a;
    for (const auto& n : nodes_) a_min_ = std::min(a_min_, n.a);
  }

  double nu() const { return nu_; }
  double a_min() const { return a_min_; }

  /// M_nu(z) for z > 0.
  double wright_m(double z) const {
    const double Z = std::pow(z, 1.0 / (1.0 - nu_));
    if (Z * a_min_ > 745.0) return 0.0;
    return scaled_wright_m(z) * std::exp(-Z * a_min_);
  }

  /// M_nu(z) exp(a_min Z), free of underflow.
  double scaled_wright_m(double z) const {
    const double q = 1.0 / (1.0 - nu_);
    const double Z = std::pow(z, q);
    const double log_pref = (nu_ * q) * std::log(z) - std::log((1.0 - nu_) * std::numbers::pi);
    double s = 0.0;
    for (const auto& n : nodes_) {
      const double e = Z * (n.a - a_min_);
      if (e > 45.0) break;  // a is increasing along the table
      s += n.w * n.a * std::exp(-e);
    }
    return std::exp(log_pref) * s;
  }

  /// W_{-nu,nu}(-z) for z > 0.
  double wright_rl(double z) const {
    const double Z = std::pow(z, 1.0 / (1.0 - nu_));
    if (Z * a_min_ > 745.0) return 0.0;
    return scaled_wright_rl(z) * std::exp(-Z * a_min_);
  }

  /// W_{-nu,nu}(-z) exp(a_min Z), free of underflow.
  double scaled_wright_rl(double z) const {
    const double q = 1.0 / (1.0 - nu_);
    const double Z = std::pow(z, q);
    const double shift = Z * a_min_;
    double s = 0.0;
    const double shape = 2.0 - nu_;
    for (const auto& n : nodes_) {
      const double y = Z * n.a;
      if (y - shift > 45.0) break;
      s += n.w * n.a_pow * upper_incomplete_gamma(shape, y, shift);
    }
    return nu_ / std::numbers::pi * s;
  }

  std::size_t size() const { return nodes_.size(); }

  /// a(phi) sampled at the table nodes (ascending phi), for tests.
  std::vector<double> a_values() const {
    std::vector<double> v;
    v.reserve(nodes_.size());
    for (const auto& n : nodes_) v.push_back(n.a);
    return v;
  }

 private:
  struct Node {
    double w;
    double a;
    double a_pow;  // a^{nu-1}
  };

  Node make_node(double phi, double u, double w) const {
    // sin(phi) = sin(u) keeps full relative precision near pi
    const double sphi = (phi <= 0.5 * std::numbers::pi) ? std::sin(phi) : std::sin(u);
    const double q = 1.0 / (1.0 - nu_);
    const double a = std::pow(std::sin(nu_ * phi), nu_ * q) * std::sin((1.0 - nu_) * phi) / std::pow(sphi, q);
    return Node{w, a, std::pow(a, nu_ - 1.0)};
  }
  void push(double phi, double u, double w) { nodes_.push_back(make_node(phi, u, w)); }

  double nu_;
  double a_min_ = 0.0;
  std::vector<Node> nodes_;
};

// Piecewise Chebyshev interpolant of g(z) = log f(z) + a_min z^{1/(1-nu)} on
// (built from the pre-scaled f exp(a_min Z))
// dyadic panels [z0 2^k, z0 2^{k+1}] up to the underflow point of f. Removing
// the dominant exponential leaves a slowly varying, analytic g.
class LargeArgumentInterpolant {
 public:
  static constexpr int kDegree = 24;

  template <class F>
  LargeArgumentInterpolant(double nu, double a_min, double z0, F&& f) : q_(1.0 / (1.0 - nu)), a_min_(a_min), z0_(z0) {
    // f underflows once a_min Z exceeds ~740
    z_max_ = std::pow(740.0 / a_min_, 1.0 - nu);
    double lo = z0_;
    while (lo < z_max_) {
      const double hi = 2.0 * lo;
      Panel p;
      p.lo = lo;
      p.hi = hi;
      std::array<double, kDegree> vals{};
      for (int j = 0; j < kDegree; ++j) {
        const double c = std::cos(std::numbers::pi * (j + 0.5) / kDegree);
        const double z = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
        vals[static_cast<std::size_t>(j)] = std::log(f(z));  // f is pre-scaled by exp(a_min Z)
      }
      for (int k = 0; k < kDegree; ++k) {
        double sum = 0.0;
        for (int j = 0; j < kDegree; ++j)
          sum += vals[static_cast<std::size_t>(j)] * std::cos(std::numbers::pi * k * (j + 0.5) / kDegree);
        p.coef[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * sum / kDegree;
      }
      panels_.push_back(p);
      lo = hi;
    }
  }

  double z0() const { return z0_; }
  double z_max() const { return z_max_; }

  double operator()(double z) const {
    if (z >= z_max_) return 0.0;
    return std::exp(log_scaled(z) - a_min_ * std::pow(z, q_));
  }

  /// Interpolated log(f(z)) + a_min z^{1/(1-nu)} for z0 <= z < z_max.
  double log_scaled(double z) const {
    std::size_t k = static_cast<std::size_t>(std::max(0.0, std::floor(std::log2(z / z0_))));
    if (k >= panels_.size()) k = panels_.size() - 1;
    if (k > 0 && z < panels_[k].lo) --k;
    if (k + 1 < panels_.size() && z >= panels_[k].hi) ++k;
    const Panel& p = panels_[k];
    const double x = (2.0 * z - p.lo - p.hi) / (p.hi - p.lo);
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int j = kDegree - 1; j >= 1; --j) {
      const double b0 = 2.0 * x * b1 - b2 + p.coef[static_cast<std::size_t>(j)];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + p.coef[0];
  }

 private:
  struct Panel {
    double lo, hi;
    std::array<double, kDegree> coef;
  };
  double q_, a_min_, z0_, z_max_ = 0.0;
  std::vector<Panel> panels_;
};

/// Argument above which the Wright families use the cached interpolants.
inline constexpr double kLargeArgument = 0.5;

// Everything needed for the large-argument path at one nu; interpolants are
// built lazily per family.
struct LargeArgumentCache {
  explicit LargeArgumentCache(double nu) : table(nu) {}
  KanterTable table;
  std::unique_ptr<LargeArgumentInterpolant> m_interp;
  std::unique_ptr<LargeArgumentInterpolant> rl_interp;

  double wright_m(double z) {
    if (z < kLargeArgument) return table.wright_m(z);
    if (!m_interp)
      m_interp = std::make_unique<LargeArgumentInterpolant>(table.nu(), table.a_min(), kLargeArgument,
                                                            [&](double y) { return table.scaled_wright_m(y); });
    return (*m_interp)(z);
  }
  double wright_rl(double z) {
    if (z < kLargeArgument) return table.wright_rl(z);
    if (!rl_interp)
      rl_interp = std::make_unique<LargeArgumentInterpolant>(table.nu(), table.a_min(), kLargeArgument,
                                                             [&](double y) { return table.scaled_wright_rl(y); });
    return (*rl_interp)(z);
  }
};

// Deterministic functions of nu; a small per-thread cache avoids rebuilding
// them while keeping evaluation lock-free.
inline LargeArgumentCache& large_argument_cache(double nu) {
  thread_local std::array<std::shared_ptr<LargeArgumentCache>, 8> cache{};
  thread_local std::size_t next = 0;
  for (const auto& t : cache)
    if (t && t->table.nu() == nu) return *t;
  auto t = std::make_shared<LargeArgumentCache>(nu);
  cache[next] = t;
  next = (next + 1) % cache.size();
  return *t;
}

inline const KanterTable& kanter_table(double nu) { return large_argument_cache(nu).table; }

enum class WrightFamily { m_function, rl_kernel, other };

inline WrightFamily classify(const WrightSpec& spec) {
  const double nu = -spec.lambda;
  if (std::abs(spec.mu - (1.0 - nu)) <= 1e-15) return WrightFamily::m_function;
  if (std::abs(spec.mu - nu) <= 1e-15) return WrightFamily::rl_kernel;
  return WrightFamily::other;
}

}  // namespace detail

/// Number of Wright-function evaluations so far (all threads).
inline std::atomic<std::uint64_t>& wright_evaluation_count() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

/// Wright function W_{lambda,mu}(z) for -1 < lambda < 0 and z <= 0, with an
/// absolute error estimate.
///
/// Small arguments are summed directly. When the series cancels too badly the
/// M-function family (mu = 1 + lambda) and the Riemann-Liouville kernel family
/// (mu = -lambda) switch to their Kanter integral representations; other index
/// pairs raise NonConvergent.
inline Evaluation wright_w_eval(const WrightSpec& spec, double z, const SeriesTolerance& tol = {}) {
  wright_evaluation_count().fetch_add(1, std::memory_order_relaxed);
  tol.validate();
  if (!(spec.lambda > -1.0 && spec.lambda < 0.0))
    throw std::invalid_argument("wright_w: lambda must lie in (-1, 0)");
  if (!(z <= 0.0)) throw std::invalid_argument("wright_w: z must be <= 0");

  const auto family = detail::classify(spec);
  auto large = [&]() -> Evaluation {
    auto& cache = detail::large_argument_cache(-spec.lambda);
    const double v = (family == detail::WrightFamily::m_function) ? cache.wright_m(-z) : cache.wright_rl(-z);
    return {v, 1e-13 * std::abs(v) + 1e-300};
  };
  if (family != detail::WrightFamily::other &&
      -z >= detail::kLargeArgument)
    return large();

  const detail::SeriesOutcome s = detail::wright_series(spec, z, tol);
  // the integral path is exact to ~1e-15, so accept much less cancellation when it exists
  const double loss_cap = family == detail::WrightFamily::other ? kMaxSeriesLoss : 8.0;
  const bool lossy = s.max_term > loss_cap * std::abs(s.sum);
  if (s.converged && !lossy) return {s.sum, s.error};
  if (family != detail::WrightFamily::other) return large();
  std::ostringstream msg;
  msg << "wright_w: series for (lambda=" << spec.lambda << ", mu=" << spec.mu << ", z=" << z
      << ") did not converge within " << tol.max_terms << " terms without cancellation";
  throw NonConvergent(msg.str());
}

inline double wright_w(const WrightSpec& spec, double z, const SeriesTolerance& tol = {}) {
  return wright_w_eval(spec, z, tol).value;
}

/// Mainardi M-function M_alpha(z) = W_{-alpha,1-alpha}(-z), 0 < alpha < 1, z >= 0.
inline Evaluation wright_m_eval(double alpha, double z, const SeriesTolerance& tol = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("wright_m: alpha must lie in (0, 1)");
  if (!(z >= 0.0)) throw std::invalid_argument("wright_m: z must be >= 0");
  return wright_w_eval(WrightSpec{-alpha, 1.0 - alpha}, -z, tol);
}

inline double wright_m(double alpha, double z, const SeriesTolerance& tol = {}) {
  return wright_m_eval(alpha, z, tol).value;
}

namespace detail {

// E_alpha(-x) = sin(alpha pi)/(alpha pi) int_0^inf exp(-X v^{1/alpha}) / (v^2 + 2 v cos(alpha pi) + 1) dv,
// X = x^{1/alpha}; 0 < alpha < 1, beta = 1. Positive integrand, no cancellation.
inline double mittag_leffler_integral(double alpha, double x) {
  static const QuadratureRule gl = gauss_legendre(20);
  const double X = std::pow(x, 1.0 / alpha);
  const double c = std::cos(alpha * std::numbers::pi);
  const double inv_a = 1.0 / alpha;
  std::vector<double> br = graded_breaks(0.0, 0.25, 44);
  for (double b : {0.5, 0.625, 0.75, 0.875, 1.0}) br.push_back(b);
  // v in [0, 1]
  const double lower = integrate_panels(gl, br, [&](double v) {
    return std::exp(-X * std::pow(v, inv_a)) / (v * v + 2.0 * v * c + 1.0);
  });
  // v in [1, inf) with v = 1/u
  const double upper = integrate_panels(gl, br, [&](double u) {
    if (u <= 0.0) return 0.0;
    const double e = X * std::pow(u, -inv_a);
    if (e > 745.0) return 0.0;
    return std::exp(-e) / (1.0 + 2.0 * u * c + u * u);
  });
  return std::sin(alpha * std::numbers::pi) / (alpha * std::numbers::pi) * (lower + upper);
}

}  // namespace detail

/// Series |z|^{1/alpha} threshold above which the asymptotic expansion is used.
inline constexpr double kMittagLefflerSwitch = 20.0;

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for z <= 0,
/// 0 < alpha <= 1.
///
/// beta = 1: exp(z) when alpha = 1, otherwise the positive spectral integral
/// for |z| > 0.5. General beta: long-double series while |z|^{1/alpha} <= 20,
/// the algebraic asymptotic expansion -sum_k z^{-k}/Gamma(beta - alpha k) beyond.
inline Evaluation mittag_leffler_eval(double alpha, double beta, double z, const SeriesTolerance& tol = {}) {
  tol.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("mittag_leffler: alpha must lie in (0, 1]");
  if (!(z <= 0.0)) throw std::invalid_argument("mittag_leffler: z must be <= 0");
  if (z == 0.0) return {recip_gamma(beta), 0.0};
  if (alpha == 1.0 && beta == 1.0) return {std::exp(z), 2e-16 * std::exp(z)};
  if (beta == 1.0 && alpha < 0.97 && z < -0.5) {
    const double v = detail::mittag_leffler_integral(alpha, -z);
    return {v, 1e-13 * v};
  }

  const double X = std::pow(-z, 1.0 / alpha);
  if (X <= kMittagLefflerSwitch) {
    long double sum = 0.0L, comp = 0.0L, max_term = 0.0L;
    long double zk = 1.0L;
    int small_run = 0;
    for (int k = 0; k < tol.max_terms; ++k) {
      if (k > 0) zk *= static_cast<long double>(z);
      const long double g = std::tgamma(static_cast<long double>(alpha) * k + beta);
      const long double term = std::isinf(static_cast<double>(g)) ? 0.0L : zk / g;
      // Kahan summation
      const long double y = term - comp;
      const long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      max_term = std::max(max_term, std::abs(term));
      if (std::abs(term) <= tol.rel_tol * 1e-2L * std::abs(sum)) {
        if (++small_run >= 3) {
          const double err = static_cast<double>(8.0L * std::numeric_limits<long double>::epsilon() * max_term);
          return {static_cast<double>(sum), err};
        }
      } else {
        small_run = 0;
      }
    }
    throw NonConvergent("mittag_leffler: series did not converge");
  }
  if (alpha < 1.0) {
    // Divergent asymptotic series: stop at the smallest term.
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double zpow = 1.0;
    for (int k = 1; k <= tol.max_terms; ++k) {
      zpow /= z;
      const double term = -zpow * recip_gamma(beta - alpha * k);
      const double mag = std::abs(term);
      if (mag != 0.0 && mag > prev) return {sum, prev};
      sum += term;
      if (mag != 0.0) {
        prev = mag;
        if (mag <= 1e-3 * tol.rel_tol * std::abs(sum)) return {sum, mag};
      }
    }
    return {sum, prev};
  }
  throw NonConvergent("mittag_leffler: alpha = 1 with beta != 1 is only supported for |z| <= 20");
}

inline double mittag_leffler(double alpha, double beta, double z, const SeriesTolerance& tol = {}) {
  return mittag_leffler_eval(alpha, beta, z, tol).value;
}

}  // namespace tfd
