#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cra/radio_params.hpp"

namespace cra {

/// C(alpha) = (2 pi / alpha) Gamma(2/alpha) Gamma(1 - 2/alpha).
inline double c_alpha(double alpha) {
  if (!(alpha > 2.0)) throw std::domain_error("c_alpha: alpha must be > 2");
  const double delta = 2.0 / alpha;
  return 2.0 * std::numbers::pi / alpha * std::tgamma(delta) * std::tgamma(1.0 - delta);
}

struct ClosedFormInputs {
  RadioParams params;
  double mean_p = 0.0;  // E[p_i]
};

namespace detail {

inline void check_mean_p(double mean_p) {
  if (!(mean_p >= 0.0 && mean_p <= 1.0)) throw std::domain_error("mean_p must lie in [0, 1]");
}

}  // namespace detail

/// Success probability of a typical secondary link. Every interferer is taken
/// at PT power, so with P_p != P_s this is not the two-population answer.
inline double secondary_success_prob(const ClosedFormInputs& in) {
  detail::check_mean_p(in.mean_p);
  const RadioParams& p = in.params;
  const double density = p.lambda_p + p.lambda_s * in.mean_p;
  const double scale = std::pow(p.power_p * p.beta / p.power_s, 2.0 / p.alpha);
  return std::exp(-density * p.r_s * p.r_s * scale * c_alpha(p.alpha));
}

/// Outage probability of a typical primary link, all interferers at ST power.
inline double primary_outage(const ClosedFormInputs& in) {
  detail::check_mean_p(in.mean_p);
  const RadioParams& p = in.params;
  const double density = p.lambda_p + p.lambda_s * in.mean_p;
  const double scale = std::pow(p.power_s * p.beta / p.power_p, 2.0 / p.alpha);
  return -std::expm1(-density * p.r_p * p.r_p * scale * c_alpha(p.alpha));
}

/// Area spectral efficiency lambda_s E[p] p_s log(1 + beta), in log_base units.
inline double ase_closed_form(const ClosedFormInputs& in) {
  const RadioParams& p = in.params;
  return p.lambda_s * in.mean_p * secondary_success_prob(in) * std::log(1.0 + p.beta) /
         std::log(p.log_base);
}

}  // namespace cra
