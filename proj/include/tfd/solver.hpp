#pragma once

// Representation-formula solver for the Neumann problem
//   d_t^alpha u - u_xx = 0 in (0,1) x (0,inf),  u(., 0) = u0,
//   u_x(0, .) = 0,  u_x(1, .) = g~,
// with u = w + v,
//   w(x,t) = int_0^1 (theta(x-xi,t) + theta(x+xi,t)) u0(xi) dxi,
//   v(x,t) = 2 int_0^t D^{1-alpha} theta(x-1, t-tau) g~(tau) dtau.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "tfd/error.hpp"
#include "tfd/kernel.hpp"
#include "tfd/parallel.hpp"
#include "tfd/quadrature.hpp"

namespace tfd {

using ScalarFunction = std::function<double(double)>;

/// Uniform nodes x_i = i/(nx-1) on [0, 1] and t_j = j t_max / nt, j = 1..nt.
struct SpaceTimeGrid {
  int nx = 21;
  int nt = 20;
  double t_max = 1.0;

  void validate() const {
    if (nx < 3) throw std::invalid_argument("SpaceTimeGrid: nx must be >= 3");
    if (nt < 2) throw std::invalid_argument("SpaceTimeGrid: nt must be >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("SpaceTimeGrid: t_max must be positive");
  }

  double hx() const { return 1.0 / (nx - 1); }
  double ht() const { return t_max / nt; }
  double x(int i) const { return i == nx - 1 ? 1.0 : i * hx(); }
  /// Time of column k = 0..nt-1, i.e. t_{k+1}.
  double t(int k) const { return k == nt - 1 ? t_max : (k + 1) * ht(); }

  std::vector<double> x_nodes() const {
    std::vector<double> v(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) v[static_cast<std::size_t>(i)] = x(i);
    return v;
  }
  std::vector<double> t_nodes() const {
    std::vector<double> v(static_cast<std::size_t>(nt));
    for (int k = 0; k < nt; ++k) v[static_cast<std::size_t>(k)] = t(k);
    return v;
  }

  friend bool operator==(const SpaceTimeGrid&, const SpaceTimeGrid&) = default;
};

/// Samples of a scalar function of time; piecewise linear in between.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> values;

  void validate() const {
    if (t.size() != values.size()) throw std::invalid_argument("TimeSeries: size mismatch");
    if (t.empty()) throw std::invalid_argument("TimeSeries: empty");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) throw std::invalid_argument("TimeSeries: times must increase strictly");
  }

  std::size_t size() const { return t.size(); }

  double at(double s) const {
    if (t.size() == 1 || s <= t.front()) {
      if (s < t.front() - 1e-12 * std::max(1.0, std::abs(t.front())))
        throw std::out_of_range("TimeSeries::at: time before first sample");
      return values.front();
    }
    if (s >= t.back()) {
      if (s > t.back() + 1e-12 * std::max(1.0, std::abs(t.back())))
        throw std::out_of_range("TimeSeries::at: time after last sample");
      return values.back();
    }
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double r = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return values[k - 1] + r * (values[k] - values[k - 1]);
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

enum class Provenance { representation, l1_oracle, spectral_oracle };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::representation: return "representation";
    case Provenance::l1_oracle: return "l1_oracle";
    case Provenance::spectral_oracle: return "spectral_oracle";
  }
  return "unknown";
}

/// u(x_i, t_k) on a grid; column k holds time grid.t(k).
class SolutionField {
 public:
  SolutionField(SpaceTimeGrid grid, Provenance provenance, std::vector<double> values)
      : grid_(grid), provenance_(provenance), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != static_cast<std::size_t>(grid_.nx) * static_cast<std::size_t>(grid_.nt))
      throw std::invalid_argument("SolutionField: value count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw NumericalError("SolutionField: non-finite entry");
  }

  const SpaceTimeGrid& grid() const { return grid_; }
  Provenance provenance() const { return provenance_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(int i, int k) const {
    return values_[static_cast<std::size_t>(k) * static_cast<std::size_t>(grid_.nx) + static_cast<std::size_t>(i)];
  }

  /// Time series u(x_i, .) over the grid times.
  TimeSeries row(int i) const {
    TimeSeries ts;
    ts.t = grid_.t_nodes();
    ts.values.resize(ts.t.size());
    for (int k = 0; k < grid_.nt; ++k) ts.values[static_cast<std::size_t>(k)] = (*this)(i, k);
    return ts;
  }

  /// Bilinear interpolation inside the grid (t >= first grid time).
  double sample(double x, double t) const {
    const double fx = std::clamp(x, 0.0, 1.0) / grid_.hx();
    const int i = std::min(static_cast<int>(fx), grid_.nx - 2);
    const double rx = fx - i;
    const double ft = t / grid_.ht() - 1.0;
    if (ft < -1e-9 || ft > grid_.nt - 1 + 1e-9) throw std::out_of_range("SolutionField::sample: t outside grid");
    const int k = std::clamp(static_cast<int>(ft), 0, grid_.nt - 2);
    const double rt = std::clamp(ft - k, 0.0, 1.0);
    const double a = (*this)(i, k) * (1 - rx) + (*this)(i + 1, k) * rx;
    const double b = (*this)(i, k + 1) * (1 - rx) + (*this)(i + 1, k + 1) * rx;
    return a * (1 - rt) + b * rt;
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  SpaceTimeGrid grid_;
  const Provenance provenance_;
  std::vector<double> values_;
};

/// Largest |a - b| over the nodes of `coarse`, sampling `fine` at those nodes.
inline double max_abs_difference(const SolutionField& coarse, const SolutionField& fine) {
  const SpaceTimeGrid& g = coarse.grid();
  double m = 0.0;
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(coarse(i, k) - fine.sample(g.x(i), g.t(k))));
  return m;
}

/// u0 and the right Neumann trace g on [0, T].
struct CauchyData {
  ScalarFunction u0;
  ScalarFunction g;
  double T = 1.0;

  void validate() const {
    if (!u0 || !g) throw std::invalid_argument("CauchyData: u0 and g must be set");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("CauchyData: T must be positive");
  }

  /// Builds the data from u0 on the uniform nodes of [0, 1] (cubic B-spline)
  /// and g samples covering [0, T] (piecewise linear).
  static CauchyData from_samples(const std::vector<double>& u0_samples, TimeSeries g_samples, double T) {
    if (u0_samples.size() < 3) throw std::invalid_argument("CauchyData: need at least 3 u0 samples");
    g_samples.validate();
    if (g_samples.t.front() > 1e-12 || g_samples.t.back() < T * (1.0 - 1e-12))
      throw std::invalid_argument("CauchyData: g samples must cover [0, T]");
    const double h = 1.0 / static_cast<double>(u0_samples.size() - 1);
    auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        u0_samples.begin(), u0_samples.end(), 0.0, h);
    auto gs = std::make_shared<TimeSeries>(std::move(g_samples));
    CauchyData d;
    d.u0 = [spline](double x) { return (*spline)(std::clamp(x, 0.0, 1.0)); };
    d.g = [gs](double t) { return gs->at(t); };
    d.T = T;
    return d;
  }
};

/// Sup of |f| over n+1 uniform samples of [a, b].
inline double sampled_sup(const ScalarFunction& f, double a, double b, int n = 400) {
  double m = 0.0;
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(f(a + (b - a) * k / n)));
  return m;
}

/// g~: g on [0, T], g(T)(T + 1 - t) on (T, T + 1), 0 afterwards.
class NeumannExtension {
 public:
  NeumannExtension(ScalarFunction g, double T) : g_(std::move(g)), T_(T) {
    if (!g_) throw std::invalid_argument("NeumannExtension: g must be set");
    if (!(T > 0.0)) throw std::invalid_argument("NeumannExtension: T must be positive");
    gT_ = g_(T_);
  }

  double operator()(double t) const {
    if (t < 0.0) return 0.0;
    if (t <= T_) return g_(t);
    if (t < T_ + 1.0) return gT_ * (T_ + 1.0 - t);
    return 0.0;
  }

  double T() const { return T_; }
  /// Points where g~ may fail to be smooth.
  std::array<double, 2> kinks() const { return {T_, T_ + 1.0}; }

 private:
  ScalarFunction g_;
  double T_;
  double gT_ = 0.0;
};

/// Sampled extension of g to [0, t_max]: the samples of g on [0, T] followed by
/// the linear taper, which the piecewise-linear series represents exactly.
inline TimeSeries extend_neumann_data(const TimeSeries& g, double T, double t_max) {
  g.validate();
  if (!(T > 0.0)) throw std::invalid_argument("extend_neumann_data: T must be positive");
  if (!(t_max >= T)) throw std::invalid_argument("extend_neumann_data: t_max must be >= T");
  TimeSeries out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.t[k] > T) break;
    out.t.push_back(g.t[k]);
    out.values.push_back(g.values[k]);
  }
  const double gT = g.at(T);
  if (out.t.empty() || out.t.back() < T) {
    out.t.push_back(T);
    out.values.push_back(gT);
  }
  const double end = std::min(t_max, T + 1.0);
  if (end > T) {
    out.t.push_back(end);
    out.values.push_back(gT * (T + 1.0 - end));
  }
  if (t_max > T + 1.0) {
    out.t.push_back(t_max);
    out.values.push_back(0.0);
  }
  return out;
}

struct SolverOptions {
  ThetaTruncation trunc;
  /// Absolute error allowed in w at any node.
  double w_tol = 1e-9;
  /// Absolute error allowed in the kernel moments of v (scaled by sup |g~|).
  double v_tol = 1e-9;
  /// Extra panel halvings allowed for w before giving up.
  int max_halvings = 8;
  int threads = 1;

  void validate() const {
    trunc.validate();
    if (!(w_tol > 0.0) || !(v_tol > 0.0)) throw std::invalid_argument("SolverOptions: tolerances must be positive");
    if (max_halvings < 0) throw std::invalid_argument("SolverOptions: max_halvings must be >= 0");
  }
};

/// One of the two parts of the representation on a grid.
struct FieldContribution {
  std::vector<double> values;  // same layout as SolutionField
  double error_estimate = 0.0;
};

/// w on the grid: GL8 on the nx-1 panels between spatial nodes, checked against
/// GL8 on both panel halves; panels that fail the check are halved again.
/// theta is tabulated per time on the lattice of all x_i -+ xi arguments.
inline FieldContribution solve_w(const ScalarFunction& u0, const FractionalOrder& order, const SpaceTimeGrid& grid,
                                 const SolverOptions& opts = {}) {
  grid.validate();
  opts.validate();
  const int nx = grid.nx;
  const int panels = nx - 1;
  const double hx = grid.hx();
  const QuadratureRule& r8 = gl8();
  constexpr int kOff = 24;
  // offsets (in panel units): GL8 nodes, then the GL8 nodes of each half
  std::array<double, kOff> off{};
  std::array<double, kOff> wt{};
  std::array<int, kOff> mirror{};  // 1 - off[o] == off[mirror[o]]
  for (int q = 0; q < 8; ++q) {
    const auto qs = static_cast<std::size_t>(q);
    off[qs] = r8.nodes[qs];
    off[qs + 8] = 0.5 * r8.nodes[qs];
    off[qs + 16] = 0.5 + 0.5 * r8.nodes[qs];
    wt[qs] = r8.weights[qs];
    wt[qs + 8] = 0.5 * r8.weights[qs];
    wt[qs + 16] = 0.5 * r8.weights[qs];
    mirror[qs] = 7 - q;
    mirror[qs + 8] = 16 + 7 - q;
    mirror[qs + 16] = 8 + 7 - q;
  }
  std::vector<double> u0v(static_cast<std::size_t>(panels * kOff));
  for (int k = 0; k < panels; ++k)
    for (int o = 0; o < kOff; ++o)
      u0v[static_cast<std::size_t>(k * kOff + o)] = u0((k + off[static_cast<std::size_t>(o)]) * hx);

  FieldContribution out;
  out.values.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(grid.nt), 0.0);
  std::vector<double> col_error(static_cast<std::size_t>(grid.nt), 0.0);
  const double leaf_tol = opts.w_tol * hx;

  parallel_for(static_cast<std::size_t>(grid.nt), opts.threads, [&](std::size_t kt) {
    const double t = grid.t(static_cast<int>(kt));
    const ThetaAtTime th(order, t, ThetaAtTime::Kind::theta, opts.trunc);
    const int nlat = 2 * nx - 2;  // lattice cells n = 0 .. 2(nx-1)-1
    std::vector<double> lat(static_cast<std::size_t>(nlat * kOff));
    for (int n = 0; n < nlat; ++n)
      for (int o = 0; o < kOff; ++o)
        lat[static_cast<std::size_t>(n * kOff + o)] = th((n + off[static_cast<std::size_t>(o)]) * hx);
    auto table = [&](int n, int o) { return lat[static_cast<std::size_t>(n * kOff + o)]; };
    // theta(x_i - xi) + theta(x_i + xi) at xi = (k + off[o]) hx
    auto pair = [&](int i, int k, int o) {
      const double minus = i > k ? table(i - k - 1, mirror[static_cast<std::size_t>(o)]) : table(k - i, o);
      return minus + table(i + k, o);
    };
    // direct evaluation for panels that need further halving
    auto integrand = [&](double x, double xi) {
      return (th(x - xi) + th(std::min(x + xi, 2.0))) * u0(xi);
    };
    double worst = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double x = grid.x(i);
      double sum = 0.0, err = 0.0;
      for (int k = 0; k < panels; ++k) {
        double coarse = 0.0, left = 0.0, right = 0.0;
        for (int q = 0; q < 8; ++q) {
          const auto qs = static_cast<std::size_t>(q);
          coarse += wt[qs] * pair(i, k, q) * u0v[static_cast<std::size_t>(k * kOff + q)];
          left += wt[qs + 8] * pair(i, k, q + 8) * u0v[static_cast<std::size_t>(k * kOff + q + 8)];
          right += wt[qs + 16] * pair(i, k, q + 16) * u0v[static_cast<std::size_t>(k * kOff + q + 16)];
        }
        coarse *= hx;
        left *= hx;
        right *= hx;
        const double a = k * hx, b = (k + 1) * hx;
        // adaptive halving; the first level reuses the tabulated values
        std::function<void(double, double, double, double, double, int)> refine =
            [&](double lo, double hi, double whole, double l, double r, int depth) {
              const double diff = std::abs(l + r - whole);
              if (diff <= leaf_tol * (hi - lo) / hx || depth >= opts.max_halvings) {
                if (diff > leaf_tol * (hi - lo) / hx) {
                  std::ostringstream msg;
                  msg << "solve_w: panel [" << lo << ", " << hi << "] at x = " << x << ", t = " << t
                      << " still has error estimate " << diff << " after " << depth << " halvings";
                  throw QuadratureFailure(msg.str(), diff);
                }
                sum += l + r;
                err += diff;
                return;
              }
              const double mid = 0.5 * (lo + hi);
              auto f = [&](double xi) { return integrand(x, xi); };
              const double q1 = 0.5 * (lo + mid), q3 = 0.5 * (mid + hi);
              refine(lo, mid, l, integrate(r8, lo, q1, f), integrate(r8, q1, mid, f), depth + 1);
              refine(mid, hi, r, integrate(r8, mid, q3, f), integrate(r8, q3, hi, f), depth + 1);
            };
        refine(a, b, coarse, left, right, 0);
      }
      out.values[kt * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] = sum;
      worst = std::max(worst, err);
    }
    col_error[kt] = worst;
  });
  for (double e : col_error) out.error_estimate = std::max(out.error_estimate, e);
  return out;
}

namespace detail {

// Moments P = int_a^b kern, Q = int_a^b kern (s - base)/h over one time panel,
// GL16 checked against GL8 halves.
struct Moments {
  double p = 0.0, q = 0.0, err = 0.0;
};

template <class K>
Moments panel_moments(double a, double b, double base, double h, K&& kern) {
  const QuadratureRule& r16 = gl16();
  const QuadratureRule& r8 = gl8();
  Moments m;
  double p8 = 0.0, q8 = 0.0;
  const double w = b - a;
  for (std::size_t k = 0; k < r16.size(); ++k) {
    const double s = a + w * r16.nodes[k];
    const double v = kern(s);
    m.p += r16.weights[k] * v;
    m.q += r16.weights[k] * v * (s - base) / h;
  }
  for (int half = 0; half < 2; ++half) {
    const double lo = a + 0.5 * w * half;
    for (std::size_t k = 0; k < r8.size(); ++k) {
      const double s = lo + 0.5 * w * r8.nodes[k];
      const double v = kern(s);
      p8 += 0.5 * r8.weights[k] * v;
      q8 += 0.5 * r8.weights[k] * v * (s - base) / h;
    }
  }
  m.p *= w;
  m.q *= w;
  m.err = std::abs(m.p - p8 * w) + std::abs(m.q - q8 * w);
  return m;
}

// Moments of D^{1-alpha} theta(y, .) over [0, h]: geometric grading toward
// sigma = 0 and a Gauss-Jacobi panel with weight sigma^{alpha/2 - 1} at the
// end, which is exact for the leading singular term when y = 0.
inline Moments first_panel_moments(const FractionalOrder& order, double y, double h, const ThetaTruncation& trunc,
                                   int levels) {
  auto kern = [&](double s) { return theta_rl(order, y, s, trunc); };
  const std::vector<double> br = graded_breaks(0.0, h, levels);
  Moments m;
  for (std::size_t k = 1; k + 1 < br.size(); ++k) {
    const Moments p = panel_moments(br[k], br[k + 1], 0.0, h, kern);
    m.p += p.p;
    m.q += p.q;
    m.err += p.err;
  }
  static thread_local std::vector<std::pair<double, QuadratureRule>> jacobi;
  const double pw = order.half() - 1.0;
  const QuadratureRule* gj = nullptr;
  for (const auto& [key, rule] : jacobi)
    if (key == pw) gj = &rule;
  if (!gj) {
    jacobi.emplace_back(pw, gauss_jacobi_left(16, pw));
    gj = &jacobi.back().second;
  }
  const double eps = br[1];
  const double scale = std::pow(eps, pw);
  for (std::size_t k = 0; k < gj->size(); ++k) {
    const double s = eps * gj->nodes[k];
    const double phi = kern(s) * std::pow(s, -pw);
    m.p += eps * scale * gj->weights[k] * phi;
    m.q += eps * scale * gj->weights[k] * phi * s / h;
  }
  return m;
}

}  // namespace detail

/// Values g~(k h), k = 0..nt, on the solver's uniform time lattice.
inline std::vector<double> lattice_samples(const ScalarFunction& g_ext, const SpaceTimeGrid& grid) {
  std::vector<double> v(static_cast<std::size_t>(grid.nt) + 1);
  for (int k = 0; k <= grid.nt; ++k) v[static_cast<std::size_t>(k)] = g_ext(k == grid.nt ? grid.t_max : k * grid.ht());
  return v;
}

/// v on the grid by product integration: g~ is linear between lattice times
/// k h, so v(x, t_j) = 2 sum_l [g_{j-l} (P_l - Q_l) + g_{j-l-1} Q_l] with the
/// kernel moments P_l, Q_l over the lag panel [l h, (l+1) h].
inline FieldContribution solve_v(const TimeSeries& g_ext, const FractionalOrder& order, const SpaceTimeGrid& grid,
                                 const SolverOptions& opts = {}) {
  grid.validate();
  opts.validate();
  g_ext.validate();
  const std::vector<double> gk = lattice_samples([&](double t) { return g_ext.at(t); }, grid);
  const int nx = grid.nx, nt = grid.nt;
  const double h = grid.ht();
  FieldContribution out;
  out.values.assign(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt), 0.0);
  double gmax = 0.0;
  for (double v : gk) gmax = std::max(gmax, std::abs(v));
  if (gmax == 0.0) return out;
  std::vector<double> row_error(static_cast<std::size_t>(nx), 0.0);

  parallel_for(static_cast<std::size_t>(nx), opts.threads, [&](std::size_t is) {
    const int i = static_cast<int>(is);
    const double y = grid.x(i) - 1.0;
    std::vector<double> P(static_cast<std::size_t>(nt)), Q(static_cast<std::size_t>(nt));
    double err = 0.0;
    // for small alpha the kernel behaves like sigma^{alpha/2-1} well below
    // sigma = |y|^{2/alpha}, so every row gets the deep grading
    const detail::Moments m0 = detail::first_panel_moments(order, y, h, opts.trunc, 40);
    P[0] = m0.p;
    Q[0] = m0.q;
    err += m0.err;
    auto kern = [&](double s) { return theta_rl(order, y, s, opts.trunc); };
    for (int l = 1; l < nt; ++l) {
      const double a = l * h;
      const detail::Moments m = detail::panel_moments(a, a + h, a, h, kern);
      P[static_cast<std::size_t>(l)] = m.p;
      Q[static_cast<std::size_t>(l)] = m.q;
      err += m.err;
    }
    if (err > opts.v_tol) {
      std::ostringstream msg;
      msg << "solve_v: kernel moments at x = " << grid.x(i) << " have error estimate " << err;
      throw QuadratureFailure(msg.str(), err);
    }
    for (int j = 1; j <= nt; ++j) {
      double s = 0.0;
      for (int l = 0; l < j; ++l) {
        const auto ls = static_cast<std::size_t>(l);
        s += gk[static_cast<std::size_t>(j - l)] * (P[ls] - Q[ls]) + gk[static_cast<std::size_t>(j - l - 1)] * Q[ls];
      }
      out.values[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(nx) + is] = 2.0 * s;
    }
    row_error[is] = 2.0 * gmax * err;
  });
  for (double e : row_error) out.error_estimate = std::max(out.error_estimate, e);
  return out;
}

/// Field plus the boundary traces used by the lateral Cauchy analysis.
struct IbvpSolution {
  SolutionField field;
  TimeSeries trace_left;   // u(0, .)
  TimeSeries trace_right;  // u(1, .)
  TimeSeries flux_left;    // u_x(0, .) by a one-sided 3-point stencil (lower accuracy)
  double flux_stencil_error = 0.0;
  double w_error = 0.0;
  double v_error = 0.0;
};

inline IbvpSolution solve_ibvp(const CauchyData& data, const FractionalOrder& order, const SpaceTimeGrid& grid,
                               const SolverOptions& opts = {}) {
  data.validate();
  grid.validate();
  const FieldContribution w = solve_w(data.u0, order, grid, opts);
  const NeumannExtension ext(data.g, data.T);
  // piecewise-linear samples of g~ on the solver lattice plus its kinks
  TimeSeries g_ext;
  {
    std::vector<double> times;
    for (int k = 0; k <= grid.nt; ++k) times.push_back(k == grid.nt ? grid.t_max : k * grid.ht());
    for (double kink : ext.kinks())
      if (kink < grid.t_max) times.push_back(kink);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (double t : times) {
      g_ext.t.push_back(t);
      g_ext.values.push_back(ext(t));
    }
  }
  const FieldContribution v = solve_v(g_ext, order, grid, opts);
  std::vector<double> u(w.values.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = w.values[k] + v.values[k];

  IbvpSolution sol{SolutionField(grid, Provenance::representation, std::move(u)), {}, {}, {}, 0.0, w.error_estimate,
                   v.error_estimate};
  const SolutionField& f = sol.field;
  sol.trace_left = f.row(0);
  sol.trace_right = f.row(grid.nx - 1);
  sol.flux_left.t = grid.t_nodes();
  const double hx = grid.hx();
  for (int k = 0; k < grid.nt; ++k) {
    sol.flux_left.values.push_back((-3.0 * f(0, k) + 4.0 * f(1, k) - f(2, k)) / (2.0 * hx));
    if (grid.nx >= 4) {
      // leading stencil error hx^2/3 |u_xxx|
      const double d3 = (-f(0, k) + 3.0 * f(1, k) - 3.0 * f(2, k) + f(3, k)) / (hx * hx * hx);
      sol.flux_stencil_error = std::max(sol.flux_stencil_error, hx * hx / 3.0 * std::abs(d3));
    }
  }
  return sol;
}

/// Pointwise evaluation of the representation at arbitrary (x, t), t > 0,
/// with callable data (no time lattice).
class Representation {
 public:
  Representation(CauchyData data, FractionalOrder order, SolverOptions opts = {})
      : data_(std::move(data)), order_(order), opts_(opts), ext_(data_.g, data_.T) {
    data_.validate();
    opts_.validate();
  }

  const FractionalOrder& order() const { return order_; }
  const CauchyData& data() const { return data_; }
  const NeumannExtension& extension() const { return ext_; }

  Estimate w(double x, double t) const {
    require_positive_time(t, "Representation::w");
    const ThetaAtTime th(order_, t, ThetaAtTime::Kind::theta, opts_.trunc);
    // panels graded away from xi = x on the scale t^{alpha/2} of the peak
    const double scale = std::min(1.0, std::pow(t, order_.half())) / 8.0;
    std::vector<double> br{x};
    for (double d = scale; d < 1.0; d *= 2.0) {
      br.push_back(x - d);
      br.push_back(x + d);
    }
    br = merge_breaks(std::move(br), 0.0, 1.0);
    const auto& u0 = data_.u0;
    return integrate_checked_panels(br, [&](double xi) { return (th(x - xi) + th(std::min(x + xi, 2.0))) * u0(xi); });
  }

  Estimate v(double x, double t) const {
    require_positive_time(t, "Representation::v");
    const double y = x - 1.0;
    // sigma = t - tau; g~ vanishes for tau > T + 1
    const double lo = std::max(0.0, t - (data_.T + 1.0));
    if (!(t > lo)) return {};
    std::vector<double> br;
    for (double kink : ext_.kinks())
      if (t - kink > lo && t - kink < t) br.push_back(t - kink);
    const double len = t - lo;
    const int pieces = static_cast<int>(std::ceil(len / 0.25));
    for (int k = 1; k < pieces; ++k) br.push_back(lo + len * k / pieces);
    Estimate e;
    auto f = [&](double s) { return theta_rl(order_, y, s, opts_.trunc) * ext_(t - s); };
    if (lo == 0.0) {
      // grade toward the (weak) singularity of the m = 0 image at sigma = 0
      const double first = std::min(len, 0.25);
      const std::vector<double> g = graded_breaks(0.0, first, 40);
      for (std::size_t k = 2; k < g.size(); ++k) br.push_back(g[k - 1]);
      br = merge_breaks(std::move(br), 0.0, t);
      const double eps = br[1];
      const double pw = order_.half() - 1.0;
      const QuadratureRule gj = gauss_jacobi_left(16, pw);
      double inner = 0.0;
      for (std::size_t k = 0; k < gj.size(); ++k) {
        const double s = eps * gj.nodes[k];
        inner += gj.weights[k] * f(s) * std::pow(s, -pw);
      }
      e.value += eps * std::pow(eps, pw) * inner;
      br.erase(br.begin());
    } else {
      br = merge_breaks(std::move(br), lo, t);
    }
    const Estimate rest = integrate_checked_panels(br, f);
    e.value = 2.0 * (e.value + rest.value);
    e.error = 2.0 * rest.error;
    return e;
  }

  Estimate operator()(double x, double t) const {
    const Estimate a = w(x, t);
    const Estimate b = v(x, t);
    return {a.value + b.value, a.error + b.error};
  }

  /// u(0, t).
  Estimate trace(double t) const { return (*this)(0.0, t); }

 private:
  CauchyData data_;
  FractionalOrder order_;
  SolverOptions opts_;
  NeumannExtension ext_;
};

}  // namespace tfd
