#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "covereval/empirical.hpp"
#include "covereval/error.hpp"

namespace covereval {

/// Candidate families, in the fixed order used to break KS ties.
enum class Family { PowerLaw, Beta, Cauchy, Exponential, Gamma, Logistic, LogNormal, Normal, Uniform, Weibull };

inline constexpr std::array<Family, 10> all_families = {
    Family::PowerLaw, Family::Beta,      Family::Cauchy, Family::Exponential, Family::Gamma,
    Family::Logistic, Family::LogNormal, Family::Normal, Family::Uniform,     Family::Weibull};

/// Short column code (PL, BE, CA, E, GM, LO, LN, N, U, WB).
inline std::string_view family_code(Family f) {
  constexpr std::array<std::string_view, 10> codes = {"PL", "BE", "CA", "E", "GM", "LO", "LN", "N", "U", "WB"};
  return codes[static_cast<std::size_t>(f)];
}

inline std::string_view family_name(Family f) {
  constexpr std::array<std::string_view, 10> names = {"PowerLaw", "Beta",      "Cauchy", "Exponential", "Gamma",
                                                      "Logistic", "LogNormal", "Normal", "Uniform",     "Weibull"};
  return names[static_cast<std::size_t>(f)];
}

/// Accepts either the name or the code.
inline std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : all_families)
    if (s == family_name(f) || s == family_code(f)) return f;
  return std::nullopt;
}

/// Families whose support is (0, inf).
inline bool positive_support(Family f) {
  return f == Family::PowerLaw || f == Family::Exponential || f == Family::Gamma || f == Family::LogNormal ||
         f == Family::Weibull;
}

/// Affine map of the raw data into (0, 1) used by Beta fits:
/// z = (x - lo + eps) / (width + 2 eps).
struct BetaRescale {
  double lo = 0;
  double width = 1;
  double eps = 1e-9;

  double operator()(double x) const { return (x - lo + eps) / (width + 2.0 * eps); }
  bool operator==(const BetaRescale&) const = default;
};

namespace detail {

/// Hurwitz zeta function sum_{k>=0} (k + q)^-s for s > 1, q > 0
/// (Euler-Maclaurin summation).
inline double hurwitz_zeta(double s, double q) {
  constexpr int direct = 12;
  double sum = 0.0;
  for (int k = 0; k < direct; ++k) sum += std::pow(q + k, -s);
  const double a = q + direct;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // B_2j / (2j)!
  constexpr std::array<double, 6> bern = {1.0 / 12.0,       -1.0 / 720.0,         1.0 / 30240.0,
                                          -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0};
  double rising = s;                    // s (s+1) ... (s+2j-2)
  double power = std::pow(a, -s - 1.0);  // a^(-s-2j+1)
  for (std::size_t j = 0; j < bern.size(); ++j) {
    sum += bern[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= a * a;
  }
  return sum;
}

}  // namespace detail

/// A family with fitted parameters and its KS distance to the fitted data.
///
/// Parameter layout: PowerLaw (alpha, xmin); Beta (shape a, shape b) on
/// rescaled data; Cauchy, Logistic, Normal (location, scale);
/// Exponential (rate); Gamma, Weibull (shape, scale); LogNormal (mu, sigma)
/// of log x; Uniform (min, max).
struct FittedDistribution {
  Family family = Family::Normal;
  std::vector<double> params;
  double ks = 0;
  std::uint64_t n = 0;
  /// Non-positive samples dropped before fitting a positive-support family.
  std::uint64_t excluded = 0;
  /// Uniform with min == max.
  bool degenerate = false;
  /// Power law fitted with the discrete (zeta) likelihood.
  bool discrete = false;
  std::optional<BetaRescale> rescale;

  double cdf(double x) const {
    const auto& p = params;
    switch (family) {
      case Family::PowerLaw:
        if (discrete) {
          if (x < p[1]) return 0.0;
          return 1.0 - detail::hurwitz_zeta(p[0], std::floor(x) + 1.0) / detail::hurwitz_zeta(p[0], p[1]);
        }
        return x < p[1] ? 0.0 : 1.0 - std::pow(x / p[1], 1.0 - p[0]);
      case Family::Beta: {
        const double z = (*rescale)(x);
        if (z <= 0.0) return 0.0;
        if (z >= 1.0) return 1.0;
        return boost::math::ibeta(p[0], p[1], z);
      }
      case Family::Cauchy:
        return 0.5 + std::atan((x - p[0]) / p[1]) / std::numbers::pi;
      case Family::Exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
      case Family::Gamma:
        return x <= 0.0 ? 0.0 : boost::math::gamma_p(p[0], x / p[1]);
      case Family::Logistic:
        return 1.0 / (1.0 + std::exp(-(x - p[0]) / p[1]));
      case Family::LogNormal:
        return x <= 0.0 ? 0.0 : 0.5 * std::erfc(-(std::log(x) - p[0]) / (p[1] * std::numbers::sqrt2));
      case Family::Normal:
        return 0.5 * std::erfc(-(x - p[0]) / (p[1] * std::numbers::sqrt2));
      case Family::Uniform:
        if (x < p[0]) return 0.0;
        if (x >= p[1]) return 1.0;
        return (x - p[0]) / (p[1] - p[0]);
      case Family::Weibull:
        return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / p[1], p[0]));
    }
    return 0.0;
  }

  /// lim_{t -> x-} F(t). Equals cdf(x) except at atoms (discrete power law,
  /// degenerate uniform).
  double cdf_left(double x) const {
    if (family == Family::PowerLaw && discrete) {
      const double k = std::ceil(x);
      if (k <= params[1]) return 0.0;
      return 1.0 - detail::hurwitz_zeta(params[0], k) / detail::hurwitz_zeta(params[0], params[1]);
    }
    if (family == Family::Uniform && degenerate) return x <= params[0] ? 0.0 : 1.0;
    return cdf(x);
  }

  /// Log density (log mass for the discrete power law); -inf off support.
  double log_pdf(double x) const {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    const auto& p = params;
    switch (family) {
      case Family::PowerLaw:
        if (x < p[1]) return ninf;
        if (discrete) return -p[0] * std::log(x) - std::log(detail::hurwitz_zeta(p[0], p[1]));
        return std::log(p[0] - 1.0) - std::log(p[1]) - p[0] * std::log(x / p[1]);
      case Family::Beta: {
        const double z = (*rescale)(x);
        if (z <= 0.0 || z >= 1.0) return ninf;
        return (p[0] - 1.0) * std::log(z) + (p[1] - 1.0) * std::log1p(-z) - boost::math::lgamma(p[0]) -
               boost::math::lgamma(p[1]) + boost::math::lgamma(p[0] + p[1]) -
               std::log(rescale->width + 2.0 * rescale->eps);
      }
      case Family::Cauchy: {
        const double z = (x - p[0]) / p[1];
        return -std::log(std::numbers::pi * p[1]) - std::log1p(z * z);
      }
      case Family::Exponential:
        return x < 0.0 ? ninf : std::log(p[0]) - p[0] * x;
      case Family::Gamma:
        if (x <= 0.0) return ninf;
        return (p[0] - 1.0) * std::log(x) - x / p[1] - boost::math::lgamma(p[0]) - p[0] * std::log(p[1]);
      case Family::Logistic: {
        const double z = std::abs((x - p[0]) / p[1]);
        return -z - std::log(p[1]) - 2.0 * std::log1p(std::exp(-z));
      }
      case Family::LogNormal: {
        if (x <= 0.0) return ninf;
        const double z = (std::log(x) - p[0]) / p[1];
        return -std::log(x) - std::log(p[1]) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
      }
      case Family::Normal: {
        const double z = (x - p[0]) / p[1];
        return -std::log(p[1]) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
      }
      case Family::Uniform:
        if (x < p[0] || x > p[1]) return ninf;
        return degenerate ? 0.0 : -std::log(p[1] - p[0]);
      case Family::Weibull: {
        if (x <= 0.0) return ninf;
        const double r = x / p[1];
        return std::log(p[0]) - std::log(p[1]) + (p[0] - 1.0) * std::log(r) - std::pow(r, p[0]);
      }
    }
    return ninf;
  }

  /// Inverse CDF for p in (0, 1). Not available for the discrete power law.
  double quantile(double q) const {
    const auto& p = params;
    switch (family) {
      case Family::PowerLaw:
        if (discrete) throw ValidationError("quantile of a discrete power law is not supported");
        return p[1] * std::pow(1.0 - q, -1.0 / (p[0] - 1.0));
      case Family::Beta:
        return rescale->lo - rescale->eps + boost::math::ibeta_inv(p[0], p[1], q) * (rescale->width + 2.0 * rescale->eps);
      case Family::Cauchy:
        return p[0] + p[1] * std::tan(std::numbers::pi * (q - 0.5));
      case Family::Exponential:
        return -std::log1p(-q) / p[0];
      case Family::Gamma:
        return boost::math::gamma_p_inv(p[0], q) * p[1];
      case Family::Logistic:
        return p[0] + p[1] * std::log(q / (1.0 - q));
      case Family::LogNormal:
        return std::exp(p[0] + p[1] * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * q - 1.0));
      case Family::Normal:
        return p[0] + p[1] * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * q - 1.0);
      case Family::Uniform:
        return p[0] + q * (p[1] - p[0]);
      case Family::Weibull:
        return p[1] * std::pow(-std::log1p(-q), 1.0 / p[0]);
    }
    return 0.0;
  }

  bool operator==(const FittedDistribution&) const = default;
};

/// Sum of log densities over the samples.
inline double log_likelihood(const FittedDistribution& fit, const EmpiricalDistribution& data) {
  return data.accumulate([&](double x) { return fit.log_pdf(x); });
}

/// Kolmogorov-Smirnov statistic sup |ECDF - F|, evaluated on both sides of
/// every jump of the ECDF. A value tied k times jumps by k/n.
inline double ks_statistic(const FittedDistribution& fit, const EmpiricalDistribution& data) {
  if (data.empty()) throw ValidationError("KS statistic of an empty sample");
  const auto values = data.values();
  const auto counts = data.counts();
  const double n = static_cast<double>(data.size());
  std::uint64_t below = 0;
  double ks = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double lower = static_cast<double>(below) / n;
    below += counts[i];
    const double upper = static_cast<double>(below) / n;
    ks = std::max({ks, std::abs(upper - fit.cdf(values[i])), std::abs(lower - fit.cdf_left(values[i]))});
  }
  return ks;
}

// ---------------------------------------------------------------------------
// Maximum likelihood
// ---------------------------------------------------------------------------

namespace detail {

struct AscentOptions {
  double rel_tol = 1e-8;
  int max_sweeps = 500;
};

/// Maximizes g along one coordinate starting at t0: expands a bracket with
/// doubling steps, then refines with Brent's method.
template <typename G>
double line_maximize(G&& g, double t0, double step) {
  auto f = [&](double t) {
    const double v = g(t);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  double b = t0, fb = f(b);
  double h = step;
  double a = b - h, fa = f(a);
  double c = b + h, fc = f(c);
  for (int i = 0; i < 80 && fa > fb; ++i) {
    c = b;
    fc = fb;
    b = a;
    fb = fa;
    h *= 2.0;
    a = b - h;
    fa = f(a);
  }
  for (int i = 0; i < 80 && fc > fb; ++i) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    h *= 2.0;
    c = b + h;
    fc = f(c);
  }
  std::uintmax_t max_iter = 200;
  auto [t, neg] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, a, c,
                                                        std::numeric_limits<double>::digits / 2, max_iter);
  return -neg >= fb ? t : b;
}

struct AscentResult {
  std::vector<double> x;
  double value = 0;
  int sweeps = 0;
};

/// Derivative-free coordinate ascent. `steps` gives the initial bracketing
/// step per coordinate. Stops when a sweep moves no coordinate by more than
/// rel_tol (relative) or no longer improves the objective beyond rounding.
template <typename F>
AscentResult coordinate_ascent(F&& objective, std::vector<double> x, const std::vector<double>& steps,
                               const AscentOptions& opts = {}) {
  double fx = objective(x);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double max_change = 0.0;
    const double before = fx;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto along = [&](double t) {
        auto y = x;
        y[i] = t;
        return objective(y);
      };
      const double t = line_maximize(along, x[i], steps[i]);
      const double ft = along(t);
      if (ft >= fx) {
        max_change = std::max(max_change, std::abs(t - x[i]) / std::max(1.0, std::abs(x[i])));
        x[i] = t;
        fx = ft;
      }
    }
    if (!std::isfinite(fx)) break;
    if (max_change <= opts.rel_tol || fx - before <= 1e-12 * std::max(1.0, std::abs(fx)))
      return {std::move(x), fx, sweep};
  }
  throw ConvergenceError("maximum likelihood search did not converge", std::move(x));
}

inline double median_of(const EmpiricalDistribution& d) { return d.percentile(50); }

inline double quartile_spread(const EmpiricalDistribution& d) { return d.percentile(75) - d.percentile(25); }

}  // namespace detail

enum class FitStatus { Fitted, Inapplicable, Failed };

inline std::string_view fit_status_name(FitStatus s) {
  switch (s) {
    case FitStatus::Fitted: return "fitted";
    case FitStatus::Inapplicable: return "inapplicable";
    case FitStatus::Failed: return "failed";
  }
  return "";
}

/// Outcome of fitting one family. `fit` is set only when status == Fitted.
struct FitResult {
  Family family = Family::Normal;
  FitStatus status = FitStatus::Inapplicable;
  std::optional<FittedDistribution> fit;
  std::string note;

  bool ok() const noexcept { return status == FitStatus::Fitted; }
  bool operator==(const FitResult&) const = default;
};

struct FitOptions {
  /// Fit power laws to integer data with the discrete (zeta) likelihood
  /// instead of the continuous one.
  bool discrete_power_law = false;
  /// Smallest sample count accepted by any family.
  std::uint64_t min_samples = 5;
};

namespace detail {

inline FitResult inapplicable(Family f, std::string why) { return {f, FitStatus::Inapplicable, std::nullopt, std::move(why)}; }

inline FittedDistribution make_fit(Family f, std::vector<double> params, const EmpiricalDistribution& used) {
  FittedDistribution d;
  d.family = f;
  d.params = std::move(params);
  d.n = used.size();
  return d;
}

inline bool all_integers(const EmpiricalDistribution& d) {
  for (double v : d.values())
    if (v != std::floor(v)) return false;
  return true;
}

}  // namespace detail

/// Fits one family by maximum likelihood and computes its KS distance to the
/// data the fit used. Closed forms: Normal, LogNormal, Exponential, Uniform
/// and the continuous power law (xmin = smallest sample). Gamma and Weibull
/// maximize the profile likelihood over the shape; Beta, Cauchy and Logistic
/// use coordinate ascent over both parameters. Positive-support families drop
/// non-positive samples first; Beta rescales the data into (0, 1).
///
/// Support violations give an Inapplicable result. Throws ConvergenceError
/// if the numeric search does not converge.
inline FitResult fit_mle(Family family, const EmpiricalDistribution& data, const FitOptions& opts = {}) {
  if (data.size() < opts.min_samples)
    throw ValidationError("distribution fitting needs at least " + std::to_string(opts.min_samples) + " samples");

  EmpiricalDistribution used = data;
  std::uint64_t excluded = 0;
  if (positive_support(family)) {
    used = data.positive_part();
    excluded = data.size() - used.size();
    if (used.size() < opts.min_samples)
      return detail::inapplicable(family, "fewer than " + std::to_string(opts.min_samples) + " positive samples");
  }

  const double n = static_cast<double>(used.size());
  const double mean = used.mean();
  const double var = used.variance();
  const double sd = std::sqrt(var);
  const bool constant = used.min() == used.max();

  FittedDistribution fit;
  switch (family) {
    case Family::PowerLaw: {
      if (constant) return detail::inapplicable(family, "all samples equal");
      const double xmin = used.min();
      if (opts.discrete_power_law && detail::all_integers(used)) {
        const double sum_log = used.accumulate([](double x) { return std::log(x); });
        auto ll = [&](const std::vector<double>& t) {
          const double alpha = 1.0 + std::exp(t[0]);
          return -alpha * sum_log - n * std::log(detail::hurwitz_zeta(alpha, xmin));
        };
        const double start = 1.0 + n / used.accumulate([&](double x) { return std::log(x / (xmin - 0.5)); });
        auto r = detail::coordinate_ascent(ll, {std::log(std::max(start - 1.0, 1e-3))}, {0.1});
        fit = detail::make_fit(family, {1.0 + std::exp(r.x[0]), xmin}, used);
        fit.discrete = true;
      } else {
        const double s = used.accumulate([&](double x) { return std::log(x / xmin); });
        fit = detail::make_fit(family, {1.0 + n / s, xmin}, used);
      }
      break;
    }
    case Family::Beta: {
      if (constant) return detail::inapplicable(family, "all samples equal; cannot rescale into (0, 1)");
      BetaRescale rs{used.min(), used.max() - used.min(), 1e-9};
      if (!std::isfinite(rs.width)) return detail::inapplicable(family, "sample range overflows");
      const double slog = used.accumulate([&](double x) { return std::log(rs(x)); });
      const double slog1m = used.accumulate([&](double x) { return std::log1p(-rs(x)); });
      const double zm = used.accumulate([&](double x) { return rs(x); }) / n;
      const double zv = used.accumulate([&](double x) { return (rs(x) - zm) * (rs(x) - zm); }) / n;
      double common = zv > 0.0 ? zm * (1.0 - zm) / zv - 1.0 : 1.0;
      if (!(common > 0.0)) common = 1.0;
      const double a0 = std::max(zm * common, 1e-3), b0 = std::max((1.0 - zm) * common, 1e-3);
      auto ll = [&](const std::vector<double>& t) {
        const double a = std::exp(t[0]), b = std::exp(t[1]);
        return (a - 1.0) * slog + (b - 1.0) * slog1m -
               n * (boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b));
      };
      auto r = detail::coordinate_ascent(ll, {std::log(a0), std::log(b0)}, {0.1, 0.1});
      fit = detail::make_fit(family, {std::exp(r.x[0]), std::exp(r.x[1])}, used);
      fit.rescale = rs;
      break;
    }
    case Family::Cauchy: {
      std::uint64_t max_tie = 0;
      for (auto c : used.counts()) max_tie = std::max(max_tie, c);
      if (2 * max_tie >= used.size())
        return detail::inapplicable(family, "half or more of the samples are tied; likelihood unbounded");
      const double m0 = detail::median_of(used);
      double s0 = detail::quartile_spread(used) / 2.0;
      if (!(s0 > 0.0)) s0 = sd > 0.0 ? sd : 1.0;
      auto ll = [&](const std::vector<double>& t) {
        const double s = std::exp(t[1]);
        return used.accumulate([&](double x) {
          const double z = (x - t[0]) / s;
          return -std::log(std::numbers::pi * s) - std::log1p(z * z);
        });
      };
      auto r = detail::coordinate_ascent(ll, {m0, std::log(s0)}, {s0, 0.1});
      fit = detail::make_fit(family, {r.x[0], std::exp(r.x[1])}, used);
      break;
    }
    case Family::Exponential:
      fit = detail::make_fit(family, {1.0 / mean}, used);
      break;
    case Family::Gamma: {
      if (constant) return detail::inapplicable(family, "all samples equal");
      const double slog = used.accumulate([](double x) { return std::log(x); });
      // Profile likelihood: for shape k the optimal scale is mean / k.
      auto ll = [&](const std::vector<double>& t) {
        const double k = std::exp(t[0]);
        return (k - 1.0) * slog - n * k - n * k * std::log(mean / k) - n * boost::math::lgamma(k);
      };
      auto r = detail::coordinate_ascent(ll, {std::log(mean * mean / var)}, {0.1});
      const double k = std::exp(r.x[0]);
      fit = detail::make_fit(family, {k, mean / k}, used);
      break;
    }
    case Family::Logistic: {
      if (!(sd > 0.0 && std::isfinite(sd))) return detail::inapplicable(family, "zero or non-finite variance");
      auto ll = [&](const std::vector<double>& t) {
        const double s = std::exp(t[1]);
        return used.accumulate([&](double x) {
          const double z = std::abs((x - t[0]) / s);
          return -z - t[1] - 2.0 * std::log1p(std::exp(-z));
        });
      };
      const double s0 = sd * std::numbers::sqrt3 / std::numbers::pi;
      auto r = detail::coordinate_ascent(ll, {mean, std::log(s0)}, {s0, 0.1});
      fit = detail::make_fit(family, {r.x[0], std::exp(r.x[1])}, used);
      break;
    }
    case Family::LogNormal: {
      const double mu = used.accumulate([](double x) { return std::log(x); }) / n;
      const double s2 = used.accumulate([&](double x) {
        const double d = std::log(x) - mu;
        return d * d;
      }) / n;
      if (!(s2 > 0.0)) return detail::inapplicable(family, "zero variance of log samples");
      fit = detail::make_fit(family, {mu, std::sqrt(s2)}, used);
      break;
    }
    case Family::Normal:
      if (!(sd > 0.0 && std::isfinite(sd))) return detail::inapplicable(family, "zero or non-finite variance");
      fit = detail::make_fit(family, {mean, sd}, used);
      break;
    case Family::Uniform:
      fit = detail::make_fit(family, {used.min(), used.max()}, used);
      fit.degenerate = constant;
      break;
    case Family::Weibull: {
      if (constant) return detail::inapplicable(family, "all samples equal");
      const double slog = used.accumulate([](double x) { return std::log(x); });
      const double xmax = used.max();
      // Profile likelihood: for shape k the optimal scale is (mean x^k)^(1/k).
      // Powers are taken relative to the largest sample to avoid overflow.
      auto scale_of = [&](double k) {
        return xmax * std::pow(used.accumulate([&](double x) { return std::pow(x / xmax, k); }) / n, 1.0 / k);
      };
      auto ll = [&](const std::vector<double>& t) {
        const double k = std::exp(t[0]);
        const double lam = scale_of(k);
        return n * std::log(k) - n * k * std::log(lam) + (k - 1.0) * slog - n;
      };
      const double k0 = std::pow(sd / mean, -1.086);
      auto r = detail::coordinate_ascent(ll, {std::log(k0)}, {0.1});
      const double k = std::exp(r.x[0]);
      fit = detail::make_fit(family, {k, scale_of(k)}, used);
      break;
    }
  }
  fit.excluded = excluded;
  fit.ks = ks_statistic(fit, used);
  return {family, FitStatus::Fitted, std::move(fit), excluded ? std::to_string(excluded) + " non-positive samples excluded" : ""};
}

/// Per-family fit results (all ten, in family order) and the winner: the
/// smallest KS, ties resolved by family order.
struct FitReport {
  std::vector<FitResult> results;
  Family best = Family::PowerLaw;

  const FitResult& result(Family f) const { return results.at(static_cast<std::size_t>(f)); }
  const FittedDistribution& best_fit() const { return *result(best).fit; }

  /// Fitted families by increasing KS (ties in family order).
  std::vector<Family> ranking() const {
    std::vector<Family> out;
    for (const auto& r : results)
      if (r.ok()) out.push_back(r.family);
    std::stable_sort(out.begin(), out.end(),
                     [&](Family a, Family b) { return result(a).fit->ks < result(b).fit->ks; });
    return out;
  }

  bool operator==(const FitReport&) const = default;
};

/// Same as fit_mle, but convergence failures become a Failed result.
inline FitResult try_fit(Family family, const EmpiricalDistribution& data, const FitOptions& opts = {}) {
  try {
    return fit_mle(family, data, opts);
  } catch (const ConvergenceError& e) {
    return {family, FitStatus::Failed, std::nullopt, e.what()};
  }
}

/// Fits all ten families and selects the one with the smallest KS distance.
inline FitReport best_fit(const EmpiricalDistribution& data, const FitOptions& opts = {}) {
  if (data.size() < opts.min_samples)
    throw ValidationError("distribution fitting needs at least " + std::to_string(opts.min_samples) + " samples");
  FitReport report;
  for (Family f : all_families) report.results.push_back(try_fit(f, data, opts));
  const auto order = report.ranking();
  if (order.empty()) throw ComputationError("no candidate family applies to the data");
  report.best = order.front();
  return report;
}

}  // namespace covereval
