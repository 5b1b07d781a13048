#pragma once

// Fit-then-validate checks for inequalities |q(p)| <= bound(p).
//
// Samples are sorted by the parameter p. Constants are fitted on the
// even-indexed samples among the first two thirds; the inequality is then
// asserted on every odd-indexed sample, so validation covers both the fitted
// window and an extrapolation window past it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfd {

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct BoundReport {
  std::string estimate_id;
  std::map<std::string, double> fitted_constants;
  ParamRange train_range;
  ParamRange validation_range;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  double worst_ratio = 0.0;
  /// Parameter at which worst_ratio occurs.
  double worst_param = 0.0;
  bool pass = true;
};

/// One sample of a checked quantity.
struct BoundSample {
  double param = 0.0;
  double magnitude = 0.0;  // |q(p)|
};

namespace detail {

struct Split {
  std::vector<BoundSample> train;
  std::vector<BoundSample> validation;
};

inline Split split_samples(std::vector<BoundSample> samples) {
  if (samples.size() < 4) throw std::invalid_argument("bound check: need at least 4 samples");
  for (const auto& s : samples)
    if (!std::isfinite(s.param) || !std::isfinite(s.magnitude) || s.magnitude < 0.0)
      throw std::invalid_argument("bound check: samples must be finite with nonnegative magnitude");
  std::stable_sort(samples.begin(), samples.end(),
                   [](const BoundSample& a, const BoundSample& b) { return a.param < b.param; });
  Split s;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 1)
      s.validation.push_back(samples[i]);
    else if (3 * i < 2 * n)
      s.train.push_back(samples[i]);
  }
  return s;
}

inline ParamRange range_of(const std::vector<BoundSample>& v) {
  if (v.empty()) return {};
  return {v.front().param, v.back().param};
}

// ratio |q| / bound with 0/0 = 0 and q/0 = inf
inline double safe_ratio(double magnitude, double bound) {
  if (magnitude == 0.0) return 0.0;
  if (!(bound > 0.0)) return std::numeric_limits<double>::infinity();
  return magnitude / bound;
}

inline void validate_against(BoundReport& r, const std::vector<BoundSample>& validation,
                             const std::function<double(double)>& bound) {
  r.worst_ratio = 0.0;
  r.worst_param = validation.empty() ? 0.0 : validation.front().param;
  for (const auto& s : validation) {
    const double q = safe_ratio(s.magnitude, bound(s.param));
    if (q > r.worst_ratio || std::isnan(q)) {
      r.worst_ratio = q;
      r.worst_param = s.param;
    }
  }
  r.n_validation = validation.size();
  r.validation_range = range_of(validation);
  r.pass = r.worst_ratio <= 1.0;
}

}  // namespace detail

/// Safety factor applied to fitted multiplicative constants.
inline constexpr double kConstantMargin = 1.02;
/// Fitted exponential rates are shrunk by this factor.
inline constexpr double kRateShrink = 0.9;

/// |q(p)| <= C envelope(p) with C the training maximum of |q|/envelope.
inline BoundReport fit_envelope_bound(std::string id, std::vector<BoundSample> samples,
                                      const std::function<double(double)>& envelope) {
  const auto split = detail::split_samples(std::move(samples));
  BoundReport r;
  r.estimate_id = std::move(id);
  double c = 0.0;
  for (const auto& s : split.train) c = std::max(c, detail::safe_ratio(s.magnitude, envelope(s.param)));
  c *= kConstantMargin;
  r.fitted_constants["C"] = c;
  r.n_train = split.train.size();
  r.train_range = detail::range_of(split.train);
  detail::validate_against(r, split.validation, [&](double p) { return c * envelope(p); });
  return r;
}

/// |q(p)| <= C prefactor(p) exp(-sigma phi(p)).
///
/// sigma is the least-squares slope of log(|q|/prefactor) against phi on the
/// training samples (zeros skipped), shrunk by kRateShrink and floored at 0;
/// C is then the training envelope maximum times kConstantMargin.
inline BoundReport fit_exponential_bound(std::string id, std::vector<BoundSample> samples,
                                         const std::function<double(double)>& prefactor,
                                         const std::function<double(double)>& phi) {
  const auto split = detail::split_samples(std::move(samples));
  BoundReport r;
  r.estimate_id = std::move(id);
  std::vector<double> xs, ys;
  for (const auto& s : split.train) {
    if (s.magnitude > 0.0) {
      xs.push_back(phi(s.param));
      ys.push_back(std::log(s.magnitude / prefactor(s.param)));
    }
  }
  double sigma = 0.0;
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx > 0.0) sigma = std::max(0.0, -kRateShrink * sxy / sxx);
  }
  // log-domain envelope so that tiny magnitudes do not underflow the ratio
  double log_c = -std::numeric_limits<double>::infinity();
  for (const auto& s : split.train)
    if (s.magnitude > 0.0)
      log_c = std::max(log_c, std::log(s.magnitude / prefactor(s.param)) + sigma * phi(s.param));
  const double c = std::isfinite(log_c) ? kConstantMargin * std::exp(log_c) : 0.0;
  r.fitted_constants["C"] = c;
  r.fitted_constants["sigma"] = sigma;
  r.n_train = split.train.size();
  r.train_range = detail::range_of(split.train);
  r.worst_ratio = 0.0;
  const auto& val = split.validation;
  r.worst_param = val.empty() ? 0.0 : val.front().param;
  for (const auto& s : val) {
    double q = 0.0;
    if (s.magnitude > 0.0)
      q = c > 0.0 ? std::exp(std::log(s.magnitude / prefactor(s.param)) + sigma * phi(s.param) - std::log(c))
                  : std::numeric_limits<double>::infinity();
    if (q > r.worst_ratio) {
      r.worst_ratio = q;
      r.worst_param = s.param;
    }
  }
  r.n_validation = val.size();
  r.validation_range = detail::range_of(val);
  r.pass = r.worst_ratio <= 1.0;
  return r;
}

/// |q(p)| <= bound(p) with no fitted constants; every sample validates.
inline BoundReport explicit_bound(std::string id, std::vector<BoundSample> samples,
                                  const std::function<double(double)>& bound,
                                  std::map<std::string, double> constants = {}) {
  if (samples.empty()) throw std::invalid_argument("bound check: need at least one sample");
  std::stable_sort(samples.begin(), samples.end(),
                   [](const BoundSample& a, const BoundSample& b) { return a.param < b.param; });
  BoundReport r;
  r.estimate_id = std::move(id);
  r.fitted_constants = std::move(constants);
  detail::validate_against(r, samples, bound);
  return r;
}

inline bool all_pass(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.pass; });
}

}  // namespace tfd
