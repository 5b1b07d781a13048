#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace tfd {

/// Nodes and weights of an interpolatory rule on a reference interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule on [0, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]; nodes ascending
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

/// Gauss-Jacobi rule for the weight u^p on [0, 1], p > -1 (Golub-Welsch).
///
/// Integrates u^p * f(u) exactly for polynomials f of degree < 2n.
inline QuadratureRule gauss_jacobi_left(std::size_t n, double p) {
  if (n == 0) throw std::invalid_argument("gauss_jacobi_left: n must be positive");
  if (!(p > -1.0)) throw std::invalid_argument("gauss_jacobi_left: p must exceed -1");
  // Jacobi weight (1-x)^a (1+x)^b on [-1, 1] with a = 0, b = p.
  const double a = 0.0, b = p;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    double diag;
    if (k == 0) {
      diag = (b - a) / (a + b + 2.0);
    } else {
      diag = (b * b - a * a) / (s * (s + 2.0));
    }
    J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = diag;
    if (k + 1 < n) {
      const double k1 = kk + 1.0;
      const double s1 = 2.0 * k1 + a + b;
      const double off = std::sqrt(4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) /
                                   (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
      J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = off;
      J(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double x = eig.eigenvalues()(kk);
    const double v0 = eig.eigenvectors()(0, kk);
    // x in [-1, 1] -> u = (1+x)/2; (1+x)^p = 2^p u^p, dx = 2 du
    rule.nodes[k] = 0.5 * (1.0 + x);
    rule.weights[k] = mu0 * v0 * v0 / std::pow(2.0, p + 1.0);
  }
  return rule;
}

/// Apply a [0, 1] rule to f on [a, b].
template <class F>
double integrate(const QuadratureRule& rule, double a, double b, F&& f) {
  const double h = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(a + h * rule.nodes[i]);
  return sum * h;
}

/// Composite rule over consecutive breakpoints.
template <class F>
double integrate_panels(const QuadratureRule& rule, const std::vector<double>& breaks, F&& f) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) sum += integrate(rule, breaks[k], breaks[k + 1], f);
  return sum;
}

/// Breakpoints a, a + r^K (b-a), ..., a + r (b-a), b: geometric grading toward a.
inline std::vector<double> graded_breaks(double a, double b, int levels, double ratio = 0.5) {
  std::vector<double> br;
  br.reserve(static_cast<std::size_t>(levels) + 2);
  br.push_back(a);
  for (int k = levels; k >= 1; --k) br.push_back(a + (b - a) * std::pow(ratio, k));
  br.push_back(b);
  return br;
}

/// Shared Gauss-Legendre rules (built once, read-only afterwards).
inline const QuadratureRule& gl8() {
  static const QuadratureRule r = gauss_legendre(8);
  return r;
}
inline const QuadratureRule& gl16() {
  static const QuadratureRule r = gauss_legendre(16);
  return r;
}

/// Integral value with an error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// GL16 on [a, b], error estimated against GL8 on both halves.
template <class F>
Estimate integrate_checked(double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double fine = integrate(gl16(), a, b, f);
  const double coarse = integrate(gl8(), a, mid, f) + integrate(gl8(), mid, b, f);
  return {fine, std::abs(fine - coarse)};
}

template <class F>
Estimate integrate_checked_panels(const std::vector<double>& breaks, F&& f) {
  Estimate e;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (!(breaks[k + 1] > breaks[k])) continue;
    const Estimate p = integrate_checked(breaks[k], breaks[k + 1], f);
    e.value += p.value;
    e.error += p.error;
  }
  return e;
}

/// Sorted, de-duplicated breakpoints restricted to [a, b] (a and b included).
inline std::vector<double> merge_breaks(std::vector<double> br, double a, double b) {
  br.push_back(a);
  br.push_back(b);
  std::vector<double> out;
  for (double x : br)
    if (x >= a && x <= b) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [&](double u, double v) { return v - u <= 1e-14 * (b - a); }),
            out.end());
  if (out.back() != b) out.back() = b;
  return out;
}

}  // namespace tfd
