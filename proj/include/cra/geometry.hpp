#pragma once

#include <cmath>
#include <numbers>

#include "cra/random.hpp"

namespace cra {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Square arena [0, side)^2, optionally wrapped into a torus.
struct Arena {
  double side = 100.0;
  bool torus = false;

  double distance_sq(Point a, Point b) const {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    if (torus) {
      dx = fold(dx);
      dy = fold(dy);
    }
    return dx * dx + dy * dy;
  }

  double distance(Point a, Point b) const {
    if (!torus) return cra::distance(a, b);
    return std::hypot(fold(a.x - b.x), fold(a.y - b.y));
  }

  Point wrap(Point p) const {
    if (!torus) return p;
    auto w = [this](double v) {
      v = std::fmod(v, side);
      return v < 0.0 ? v + side : v;
    };
    return {w(p.x), w(p.y)};
  }

 private:
  // Minimum-image separation along one axis.
  double fold(double delta) const {
    delta = std::fmod(std::fabs(delta), side);
    return delta > 0.5 * side ? side - delta : delta;
  }
};

/// Point at `distance` from `anchor` in direction `angle` (radians).
inline Point offset_at_angle(Point anchor, double distance, double angle) {
  return {anchor.x + distance * std::cos(angle), anchor.y + distance * std::sin(angle)};
}

/// Point at exactly `distance` from `anchor`, direction uniform on [0, 2pi).
inline Point place_offset(Point anchor, double distance, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double phi = angle(rng);
  if (distance == 0.0) return anchor;
  return offset_at_angle(anchor, distance, phi);
}

}  // namespace cra
