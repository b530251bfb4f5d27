#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "cra/geometry.hpp"
#include "cra/radio_params.hpp"
#include "cra/random.hpp"

namespace cra {

enum class FadingKind {
  rayleigh,  // unit-mean exponential power gain
  none,
};

namespace detail {

// r^-alpha from r^2; alpha == 4 is the common case and skips pow().
inline double inverse_power_sq(double r2, double alpha) {
  if (alpha == 4.0) return 1.0 / (r2 * r2);
  return std::pow(r2, -0.5 * alpha);
}

inline double pathloss_sq(double r2, double alpha, bool bounded) {
  if (bounded) return r2 <= 1.0 ? 1.0 : inverse_power_sq(r2, alpha);
  if (r2 == 0.0) throw std::domain_error("pathloss: coincident points in unbounded mode");
  return inverse_power_sq(r2, alpha);
}

}  // namespace detail

/// min{1, r^-alpha} when bounded, r^-alpha otherwise.
inline double pathloss(double r, double alpha, bool bounded) {
  if (!(alpha > 2.0)) throw std::domain_error("pathloss: alpha must be > 2");
  return detail::pathloss_sq(r * r, alpha, bounded);
}

inline double pathloss(Point tx, Point rx, double alpha, bool bounded) {
  return pathloss(distance(tx, rx), alpha, bounded);
}

/// Homogeneous PPP over [0, side)^2.
inline std::vector<Point> sample_ppp(double density, double area_side, Rng& rng) {
  if (!(density >= 0.0)) throw std::invalid_argument("sample_ppp: density must be >= 0");
  if (!(area_side > 0.0)) throw std::invalid_argument("sample_ppp: area_side must be > 0");
  std::vector<Point> points;
  const double mean = density * area_side * area_side;
  if (mean == 0.0) return points;
  const auto n = std::poisson_distribution<long long>(mean)(rng);
  std::uniform_real_distribution<double> coord(0.0, area_side);
  points.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double x = coord(rng);
    points.push_back({x, coord(rng)});
  }
  return points;
}

/// Homogeneous PPP over the disk of `radius` around `center`.
inline std::vector<Point> sample_ppp_disk(double density, Point center, double radius, Rng& rng) {
  std::vector<Point> points;
  const double mean = density * std::numbers::pi * radius * radius;
  if (!(mean > 0.0)) return points;
  const auto n = std::poisson_distribution<long long>(mean)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  points.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    points.push_back(offset_at_angle(center, r, 2.0 * std::numbers::pi * unit(rng)));
  }
  return points;
}

inline double draw_fading(FadingKind kind, Rng& rng) {
  if (kind == FadingKind::none) return 1.0;
  // -log(U) with U in (0, 1] keeps the draw strictly positive.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return -std::log1p(-unit(rng)) + std::numeric_limits<double>::denorm_min();
}

/// Fading power gains for every (transmitter, receiver) pair of a snapshot,
/// generated on demand from a key so that any subset of active links sees the
/// same draws.
struct FadingField {
  std::uint64_t key = 0;
  FadingKind kind = FadingKind::rayleigh;

  double operator()(std::size_t tx, std::size_t rx) const {
    if (kind == FadingKind::none) return 1.0;
    return -std::log(keyed_uniform(key, tx, rx));
  }
};

/// Sum of power * h * l(z, rx) over `interferers`.
inline double aggregate_interference(Point rx, std::span<const Point> interferers, double power,
                                     const RadioParams& params, FadingKind fading, Rng& rng) {
  const Arena arena{params.area_side, params.torus};
  double total = 0.0;
  for (const Point& z : interferers) {
    const double h = draw_fading(fading, rng);
    total += power * h * detail::pathloss_sq(arena.distance_sq(z, rx), params.alpha, params.pathloss_bounded);
  }
  return total;
}

struct InterfererSet {
  std::span<const Point> points;
  double power = 0.0;
};

/// SIR at `rx`, or SINR when params.noise is set.
///
/// Fading is drawn for the desired link first, then for each interferer in
/// set order. A zero denominator returns +infinity.
inline double sir_at(Point rx, Point desired_tx, double desired_power,
                     std::span<const InterfererSet> interferer_sets, const RadioParams& params,
                     FadingKind fading, Rng& rng) {
  const Arena arena{params.area_side, params.torus};
  const double signal = desired_power * draw_fading(fading, rng) *
                        detail::pathloss_sq(arena.distance_sq(desired_tx, rx), params.alpha,
                                            params.pathloss_bounded);
  double denominator = params.noise.value_or(0.0);
  for (const InterfererSet& set : interferer_sets)
    denominator += aggregate_interference(rx, set.points, set.power, params, fading, rng);
  if (denominator == 0.0) return std::numeric_limits<double>::infinity();
  return signal / denominator;
}

/// One realization of the two-tier network.
///
/// Transmitter ids for `fading`: PT j is j, ST i is pts.size() + i.
/// Receiver ids: primary receiver j is j, secondary receiver i is pts.size() + i.
struct NetworkSnapshot {
  std::vector<Point> pts;
  std::vector<Point> sts;
  std::vector<Point> sensors;      // sensors[i] pairs with sts[i]
  std::vector<Point> p_receivers;  // p_receivers[j] pairs with pts[j]
  std::vector<Point> s_receivers;  // s_receivers[i] pairs with sts[i]
  FadingField fading;
  std::uint64_t coin_key = 0;  // transmit-decision uniforms, shared across policies

  std::size_t pt_id(std::size_t j) const { return j; }
  std::size_t st_id(std::size_t i) const { return pts.size() + i; }
};

inline NetworkSnapshot sample_snapshot(const RadioParams& params, FadingKind fading, Rng& rng) {
  const Arena arena{params.area_side, params.torus};
  NetworkSnapshot snap;
  snap.pts = sample_ppp(params.lambda_p, params.area_side, rng);
  snap.sts = sample_ppp(params.lambda_s, params.area_side, rng);
  snap.sensors.reserve(snap.sts.size());
  snap.s_receivers.reserve(snap.sts.size());
  snap.p_receivers.reserve(snap.pts.size());
  for (const Point& st : snap.sts) {
    snap.sensors.push_back(arena.wrap(place_offset(st, params.d, rng)));
    snap.s_receivers.push_back(arena.wrap(place_offset(st, params.r_s, rng)));
  }
  for (const Point& pt : snap.pts) snap.p_receivers.push_back(arena.wrap(place_offset(pt, params.r_p, rng)));
  snap.fading = FadingField{rng(), fading};
  snap.coin_key = rng();
  return snap;
}

/// Fading-free aggregate PT interference at every sensor.
inline std::vector<double> sensor_measurements(const NetworkSnapshot& snap, const RadioParams& params) {
  const Arena arena{params.area_side, params.torus};
  std::vector<double> m;
  m.reserve(snap.sensors.size());
  for (const Point& s : snap.sensors) {
    double total = 0.0;
    for (const Point& pt : snap.pts)
      total += params.power_p * detail::pathloss_sq(arena.distance_sq(pt, s), params.alpha, params.pathloss_bounded);
    m.push_back(total);
  }
  return m;
}

}  // namespace cra
