#pragma once

// Independent reference solutions: the L1 finite-difference scheme for the
// Caputo derivative with Neumann conditions, and the cosine expansion with
// Mittag-Leffler time factors (g = 0).

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tfd/error.hpp"
#include "tfd/kernel.hpp"
#include "tfd/solver.hpp"
#include "tfd/specfun.hpp"

namespace tfd {

struct L1Config {
  int nx_fd = 201;
  int nt_fd = 2048;
  double t_max = 1.0;
  /// Weight of the new time level in the space operator (1 = fully implicit).
  double theta_scheme = 1.0;

  void validate() const {
    if (nx_fd < 5 || nt_fd < 5) throw std::invalid_argument("L1Config: nx_fd and nt_fd must be >= 5");
    if (!(t_max > 0.0)) throw std::invalid_argument("L1Config: t_max must be positive");
    if (!(theta_scheme >= 0.5 && theta_scheme <= 1.0))
      throw std::invalid_argument("L1Config: theta_scheme must lie in [0.5, 1]");
  }

  SpaceTimeGrid grid() const { return {nx_fd, nt_fd, t_max}; }
};

namespace detail {

// Thomas algorithm; a = sub-, b = main, c = super-diagonal. Overwrites d.
inline void solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                              std::vector<double>& d) {
  const std::size_t n = b.size();
  std::vector<double> cp(n), dp(n);
  double piv = b[0];
  if (!(std::abs(piv) > 1e-300)) throw SingularSystem("l1_solve: zero pivot in tridiagonal solve");
  cp[0] = c[0] / piv;
  dp[0] = d[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = b[i] - a[i] * cp[i - 1];
    if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
      throw SingularSystem("l1_solve: zero pivot in tridiagonal solve");
    cp[i] = i + 1 < n ? c[i] / piv : 0.0;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / piv;
  }
  d[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = dp[i] - cp[i] * d[i + 1];
}

}  // namespace detail

/// L1 time stepping with weights b_k = (k+1)^{1-alpha} - k^{1-alpha}, central
/// differences in x and ghost-node Neumann conditions u_x(0,.) = h0,
/// u_x(1,.) = g~ (the extension of data.g).
inline SolutionField l1_solve(const CauchyData& data, const ScalarFunction& h0, const FractionalOrder& order,
                              const L1Config& cfg = {}) {
  data.validate();
  cfg.validate();
  if (!h0) throw std::invalid_argument("l1_solve: h0 must be set");
  const double alpha = order.alpha();
  const int N = cfg.nx_fd - 1;
  const auto n_nodes = static_cast<std::size_t>(cfg.nx_fd);
  const double hx = 1.0 / N;
  const double dt = cfg.t_max / cfg.nt_fd;
  const double c = std::pow(dt, -alpha) / std::tgamma(2.0 - alpha);
  const double th = cfg.theta_scheme;
  const NeumannExtension gext(data.g, data.T);

  std::vector<double> bw(static_cast<std::size_t>(cfg.nt_fd));
  for (int k = 0; k < cfg.nt_fd; ++k) bw[static_cast<std::size_t>(k)] = std::pow(k + 1.0, 1.0 - alpha) - std::pow(k, 1.0 - alpha);

  // levels[n] = u at time n dt; increments are stored for the history sum
  std::vector<std::vector<double>> levels;
  levels.reserve(static_cast<std::size_t>(cfg.nt_fd) + 1);
  std::vector<double> u(n_nodes);
  for (int i = 0; i <= N; ++i) u[static_cast<std::size_t>(i)] = data.u0(i == N ? 1.0 : i * hx);
  levels.push_back(u);

  // (D2 u)_i with ghost nodes for the flux values (left, right)
  auto apply_d2 = [&](const std::vector<double>& v, double left, double right, std::vector<double>& out) {
    const double inv = 1.0 / (hx * hx);
    out[0] = (2.0 * v[1] - 2.0 * v[0] - 2.0 * hx * left) * inv;
    for (int i = 1; i < N; ++i) {
      const auto is = static_cast<std::size_t>(i);
      out[is] = (v[is - 1] - 2.0 * v[is] + v[is + 1]) * inv;
    }
    const auto ns = static_cast<std::size_t>(N);
    out[ns] = (2.0 * v[ns - 1] - 2.0 * v[ns] + 2.0 * hx * right) * inv;
  };

  std::vector<double> a(n_nodes), b(n_nodes), cc(n_nodes), rhs(n_nodes), d2(n_nodes), hist(n_nodes);
  const double inv = th / (hx * hx);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    a[i] = -inv;
    b[i] = c + 2.0 * inv;
    cc[i] = -inv;
  }
  a[0] = 0.0;
  cc[0] = -2.0 * inv;
  a[n_nodes - 1] = -2.0 * inv;
  cc[n_nodes - 1] = 0.0;

  std::vector<double> result;
  result.reserve(n_nodes * static_cast<std::size_t>(cfg.nt_fd));
  for (int n = 1; n <= cfg.nt_fd; ++n) {
    const double tn = n == cfg.nt_fd ? cfg.t_max : n * dt;
    const double tp = (n - 1) * dt;
    std::fill(hist.begin(), hist.end(), 0.0);
    for (int k = 1; k < n; ++k) {
      const auto& hi = levels[static_cast<std::size_t>(n - k)];
      const auto& lo = levels[static_cast<std::size_t>(n - k - 1)];
      const double wk = bw[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < n_nodes; ++i) hist[i] += wk * (hi[i] - lo[i]);
    }
    const auto& prev = levels.back();
    if (th < 1.0) {
      apply_d2(prev, h0(tp), gext(tp), d2);
    } else {
      std::fill(d2.begin(), d2.end(), 0.0);
    }
    for (std::size_t i = 0; i < n_nodes; ++i) rhs[i] = c * prev[i] - c * hist[i] + (1.0 - th) * d2[i];
    rhs[0] -= th * 2.0 * h0(tn) / hx;
    rhs[n_nodes - 1] += th * 2.0 * gext(tn) / hx;
    detail::solve_tridiagonal(a, b, cc, rhs);
    levels.push_back(rhs);
    result.insert(result.end(), rhs.begin(), rhs.end());
  }
  return SolutionField(cfg.grid(), Provenance::l1_oracle, std::move(result));
}

/// u(x, t) = sum_n a_n E_alpha(-n^2 pi^2 t^alpha) cos(n pi x), 0 < alpha <= 1
/// (alpha = 1 gives the classical heat solution).
inline SolutionField spectral_solve(const std::vector<double>& coeffs, double alpha, const SpaceTimeGrid& grid) {
  grid.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("spectral_solve: alpha must lie in (0, 1]");
  const std::size_t nx = static_cast<std::size_t>(grid.nx);
  std::vector<double> values(nx * static_cast<std::size_t>(grid.nt), 0.0);
  for (int k = 0; k < grid.nt; ++k) {
    const double ta = std::pow(grid.t(k), alpha);
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      if (coeffs[n] == 0.0) continue;
      const double lam = std::numbers::pi * std::numbers::pi * static_cast<double>(n * n);
      const double amp = coeffs[n] * (n == 0 ? 1.0 : mittag_leffler(alpha, 1.0, -lam * ta));
      for (int i = 0; i < grid.nx; ++i)
        values[static_cast<std::size_t>(k) * nx + static_cast<std::size_t>(i)] +=
            amp * std::cos(std::numbers::pi * static_cast<double>(n) * grid.x(i));
    }
  }
  return SolutionField(grid, Provenance::spectral_oracle, std::move(values));
}

inline SolutionField spectral_solve(const std::vector<double>& coeffs, const FractionalOrder& order,
                                    const SpaceTimeGrid& grid) {
  return spectral_solve(coeffs, order.alpha(), grid);
}

/// Cosine coefficients a_0..a_{n-1} of u0 on [0, 1] (GL16 over 64 panels).
inline std::vector<double> cosine_coefficients(const ScalarFunction& u0, int n) {
  if (n < 1) throw std::invalid_argument("cosine_coefficients: n must be >= 1");
  std::vector<double> br(65);
  for (int k = 0; k <= 64; ++k) br[static_cast<std::size_t>(k)] = k / 64.0;
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double v = integrate_panels(gl16(), br, [&](double x) { return u0(x) * std::cos(std::numbers::pi * m * x); });
    a[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : 2.0) * v;
  }
  return a;
}

}  // namespace tfd
