#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cra/random.hpp"
#include "cra/root_finding.hpp"

namespace cra {

// Conditional interference distribution (CID): law of the PT interference at
// an ST given that its sensor, `d` metres away, measured `m` watts.
//
// The nearest PT is placed at the distance r1_hat that explains `m` once the
// other PTs are replaced by their mean contribution T. The ST then sits at a
// uniformly distributed angle theta around the sensor, which maps through the
// law of cosines to the nearest-PT term at the ST. Pathloss is the unbounded
// r^-alpha throughout.

/// Mean interference from a PPP of PTs beyond radius r1_hat.
inline double compute_T(double r1_hat, double power_p, double lambda_p, double alpha) {
  return 2.0 * power_p * std::numbers::pi * lambda_p * std::pow(r1_hat, 2.0 - alpha) / (alpha - 2.0);
}

/// Distance r such that power_p * r^-alpha + T(r) == m.
inline double solve_r1(double m, double power_p, double lambda_p, double alpha) {
  if (!(m > 0.0)) throw std::domain_error("solve_r1: measurement m must be > 0");
  if (!(power_p > 0.0)) throw std::domain_error("solve_r1: power_p must be > 0");
  if (!(alpha > 2.0)) throw std::domain_error("solve_r1: alpha must be > 2");
  if (!(lambda_p >= 0.0)) throw std::domain_error("solve_r1: lambda_p must be >= 0");
  auto g = [&](double r) { return power_p * std::pow(r, -alpha) + compute_T(r, power_p, lambda_p, alpha) - m; };
  // g(start) = T(start) >= 0 and g decreases to -m, so start is a lower bracket.
  const double start = std::pow(power_p / m, 1.0 / alpha);
  return bisect_decreasing_from(g, start, BisectionOptions{1e-12, 200});
}

/// Everything needed to turn a measurement into a CID.
struct CidContext {
  double power_p = 1.0;
  double lambda_p = 0.0;
  double alpha = 4.0;
  double d = 1.0;
};

struct CidModel {
  double m = 0.0;
  double power_p = 0.0;
  double lambda_p = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double r1_hat = 0.0;
  double t_resid = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;  // +inf when r1_hat == d

  /// Nearest PT estimated closer than the ST is to its sensor. Formulas still
  /// apply but `m` may fall outside the support.
  bool near_field() const { return r1_hat < d; }
};

/// (x_min, x_max): nearest-PT term at theta = pi and theta = 0, plus T.
inline std::pair<double, double> support_bounds(const CidModel& model) {
  const double lo = model.power_p * std::pow(model.r1_hat + model.d, -model.alpha) + model.t_resid;
  const double gap = std::fabs(model.r1_hat - model.d);
  const double hi = gap == 0.0 ? std::numeric_limits<double>::infinity()
                               : model.power_p * std::pow(gap, -model.alpha) + model.t_resid;
  return {lo, hi};
}

inline CidModel make_cid_model(double m, const CidContext& ctx) {
  if (!(ctx.d >= 0.0)) throw std::domain_error("make_cid_model: d must be >= 0");
  CidModel model;
  model.m = m;
  model.power_p = ctx.power_p;
  model.lambda_p = ctx.lambda_p;
  model.alpha = ctx.alpha;
  model.d = ctx.d;
  model.r1_hat = solve_r1(m, ctx.power_p, ctx.lambda_p, ctx.alpha);
  model.t_resid = compute_T(model.r1_hat, ctx.power_p, ctx.lambda_p, ctx.alpha);
  std::tie(model.x_min, model.x_max) = support_bounds(model);
  return model;
}

/// Counts arccos arguments that left [-1, 1] by more than the rounding slop.
struct CidDiagnostics {
  std::size_t clamped = 0;
};

inline constexpr double kArccosSlop = 1e-9;

namespace detail {

// cos(theta_x): the angle at which the nearest-PT term at the ST equals x - T.
inline double cid_angle_cosine(const CidModel& model, double x) {
  const double r2_sq = std::pow(model.power_p / (x - model.t_resid), 2.0 / model.alpha);
  return (model.r1_hat * model.r1_hat + model.d * model.d - r2_sq) / (2.0 * model.r1_hat * model.d);
}

}  // namespace detail

/// Pr{I <= x | I_m = m} = 1 - theta_x / pi.
inline double cdf_eval(const CidModel& model, double x, CidDiagnostics* diag = nullptr) {
  if (x >= model.x_max) return 1.0;
  if (x <= model.x_min) return 0.0;
  double c = detail::cid_angle_cosine(model, x);
  if (c < -1.0 || c > 1.0) {
    if (diag && std::fabs(c) > 1.0 + kArccosSlop) ++diag->clamped;
    c = std::clamp(c, -1.0, 1.0);
  }
  return 1.0 - std::acos(c) / std::numbers::pi;
}

/// Density of the CID on the open support (x_min, x_max).
inline double pdf_eval(const CidModel& model, double x) {
  if (!(x > model.x_min && x < model.x_max)) throw std::domain_error("pdf_eval: x outside open support");
  const double p = model.power_p;
  const double a = model.alpha;
  const double r1 = model.r1_hat;
  const double d = model.d;
  const double excess = x - model.t_resid;
  const double ratio = p / excess;
  const double numerator =
      p / (std::numbers::pi * d * r1 * a * excess * excess) * std::pow(ratio, 2.0 / a - 1.0);
  const double spread = r1 * r1 + d * d - std::pow(ratio, 2.0 / a);
  const double denominator = std::sqrt(1.0 - spread * spread / (4.0 * d * d * r1 * r1));
  return numerator / denominator;
}

/// Interference at the ST when it sits at angle `theta` from the nearest PT.
inline double cid_value_at_angle(const CidModel& model, double theta) {
  const double r2_sq =
      model.r1_hat * model.r1_hat + model.d * model.d - 2.0 * model.r1_hat * model.d * std::cos(theta);
  return model.t_resid + model.power_p * std::pow(r2_sq, -0.5 * model.alpha);
}

/// Exact inverse-transform draw: theta ~ U(0, pi) through the law of cosines.
inline double sample_cid(const CidModel& model, Rng& rng) {
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
  return cid_value_at_angle(model, theta(rng));
}

struct CidMoments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double variance = std::numeric_limits<double>::quiet_NaN();
  double skewness = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

/// Mean, variance and skewness by adaptive Gauss-Kronrod in theta, where the
/// integrand is smooth (no endpoint singularities as in x).
inline CidMoments moments(const CidModel& model) {
  CidMoments out;
  if (!std::isfinite(model.x_max)) return out;
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double pi = std::numbers::pi;
  constexpr double tol = 1e-12;
  constexpr unsigned depth = 20;
  bool ok = true;
  auto average = [&](auto&& f) {
    double err = 0.0;
    const double v = Quadrature::integrate(f, 0.0, pi, depth, tol, &err);
    if (!std::isfinite(v) || err > 1e-8 * std::fabs(v) + 1e-300) ok = false;
    return v / pi;
  };
  out.mean = average([&](double t) { return cid_value_at_angle(model, t); });
  const double mu = out.mean;
  out.variance = average([&](double t) {
    const double dev = cid_value_at_angle(model, t) - mu;
    return dev * dev;
  });
  const double third = average([&](double t) {
    const double dev = cid_value_at_angle(model, t) - mu;
    return dev * dev * dev;
  });
  out.skewness = out.variance > 0.0 ? third / std::pow(out.variance, 1.5) : 0.0;
  out.converged = ok;
  return out;
}

}  // namespace cra
