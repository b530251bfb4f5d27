#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "cra/units.hpp"

namespace cra {

/// Physical and protocol constants of one network configuration, in SI units.
///
/// Defaults are the reference operating point: 23/5 dBm PT/ST powers,
/// 3 dB target SIR, 2 dBm interference threshold, -70 dBm noise, 3 m links,
/// 1 m sensor offset, 100 m square arena.
struct RadioParams {
  double lambda_p = 0.001;  // PT density (1/m^2)
  double lambda_s = 0.01;   // ST density (1/m^2)
  double power_p = dbm_to_watts(23.0);
  double power_s = dbm_to_watts(5.0);
  double alpha = 4.0;
  double beta = db_to_linear(3.0);
  double tau = 0.05;
  double d = 1.0;    // ST to sensor
  double r_s = 3.0;  // ST to its receiver
  double r_p = 3.0;  // PT to its receiver
  double i_th = dbm_to_watts(2.0);
  std::optional<double> noise = dbm_to_watts(-70.0);
  double area_side = 100.0;
  bool pathloss_bounded = true;
  bool torus = false;  // wrap arena edges (minimum-image distances)
  double log_base = 2.0;

  double area() const { return area_side * area_side; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
    };
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    require(std::isfinite(alpha) && alpha > 2.0, "alpha", "must be > 2");
    require(finite_nonneg(lambda_p), "lambda_p", "must be >= 0");
    require(finite_nonneg(lambda_s), "lambda_s", "must be >= 0");
    require(finite_nonneg(power_p), "power_p", "must be >= 0");
    require(finite_nonneg(power_s), "power_s", "must be >= 0");
    require(std::isfinite(beta) && beta > 0.0, "beta", "must be > 0");
    require(tau > 0.0 && tau < 1.0, "tau", "must lie in (0, 1)");
    require(finite_nonneg(d), "d", "must be >= 0");
    require(finite_nonneg(r_s), "r_s", "must be >= 0");
    require(finite_nonneg(r_p), "r_p", "must be >= 0");
    require(finite_nonneg(i_th), "i_th", "must be >= 0");
    require(!noise || finite_nonneg(*noise), "noise", "must be >= 0");
    require(std::isfinite(area_side) && area_side > 0.0, "area_side", "must be > 0");
    require(std::isfinite(log_base) && log_base > 0.0 && log_base != 1.0, "log_base",
            "must be positive and != 1");
  }
};

}  // namespace cra
