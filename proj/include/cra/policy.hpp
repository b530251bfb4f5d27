#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "cra/analytics.hpp"
#include "cra/cid.hpp"
#include "cra/radio_params.hpp"
#include "cra/random.hpp"

namespace cra {

/// Which closed form to use for the constraint-tight mean probability.
enum class PStarForm {
  outage_consistent,  // inverts the primary outage expression exactly
  as_printed,         // carries an extra 2/alpha factor in the denominator
};

/// Largest mean ST transmission probability that keeps the closed-form primary
/// outage at or below tau, clamped to [0, 1].
inline double expected_p_star(const RadioParams& p, PStarForm form = PStarForm::outage_consistent) {
  if (!(p.lambda_s > 0.0)) throw std::domain_error("expected_p_star: lambda_s must be > 0");
  const double budget = -std::log1p(-p.tau);  // ln(1 / (1 - tau))
  double k = p.r_p * p.r_p * std::pow(p.power_s * p.beta / p.power_p, 2.0 / p.alpha) * c_alpha(p.alpha);
  if (form == PStarForm::as_printed) k *= 2.0 / p.alpha;
  const double raw = (budget / k - p.lambda_p) / p.lambda_s;
  return std::clamp(raw, 0.0, 1.0);
}

/// Cognitive access: p_i proportional to Pr{I_i <= i_th | m_i}.
struct CognitiveCid {
  // Normaliser E[w]. Unset: sample mean of the weights in each snapshot.
  std::optional<double> mean_weight;
  PStarForm form = PStarForm::outage_consistent;
};

/// Slotted ALOHA with one probability for every ST. Unset: expected_p_star.
struct Aloha {
  std::optional<double> p;
};

/// Transmit iff the sensor reads below the threshold. Unset: params.i_th.
struct HardThreshold {
  std::optional<double> i_th;
};

using PolicyKind = std::variant<CognitiveCid, Aloha, HardThreshold>;

inline std::string_view policy_name(const PolicyKind& policy) {
  return std::visit(
      [](const auto& p) -> std::string_view {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CognitiveCid>) return "cid";
        else if constexpr (std::is_same_v<T, Aloha>) return "aloha";
        else return "threshold";
      },
      policy);
}

inline PolicyKind parse_policy(std::string_view name) {
  if (name == "cid") return CognitiveCid{};
  if (name == "aloha") return Aloha{};
  if (name == "threshold") return HardThreshold{};
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected cid, aloha or threshold)");
}

struct PolicyAssignment {
  std::vector<double> probs;
  std::vector<bool> decisions;
  std::vector<double> weights;
  double mean_target = 0.0;
  std::size_t clipped = 0;        // entries whose raw value exceeded 1
  bool uniform_fallback = false;  // every weight was zero
};

/// w_i = F_{I;m_i}(i_th).
inline double weight(double m_i, double i_th, const CidContext& ctx) {
  if (!(m_i > 0.0)) throw std::domain_error("weight: measurement must be > 0");
  return cdf_eval(make_cid_model(m_i, ctx), i_th);
}

/// p_i = min(1, w_i / E[w] * mean_target) in a single pass.
///
/// `mean_weight` overrides the sample mean of `weights` as E[w].
inline PolicyAssignment assign_probabilities(std::span<const double> weights, double mean_target,
                                             std::optional<double> mean_weight = std::nullopt) {
  if (weights.empty()) throw std::invalid_argument("assign_probabilities: no weights");
  if (!(mean_target >= 0.0 && mean_target <= 1.0))
    throw std::invalid_argument("assign_probabilities: mean_target must lie in [0, 1]");
  PolicyAssignment out;
  out.weights.assign(weights.begin(), weights.end());
  out.mean_target = mean_target;
  const double ew = mean_weight.value_or(std::accumulate(weights.begin(), weights.end(), 0.0) /
                                         static_cast<double>(weights.size()));
  if (!(ew > 0.0)) {
    out.probs.assign(weights.size(), mean_target);
    out.uniform_fallback = true;
    return out;
  }
  out.probs.reserve(weights.size());
  for (double w : weights) {
    const double raw = w / ew * mean_target;
    if (raw > 1.0) ++out.clipped;
    out.probs.push_back(std::min(1.0, raw));
  }
  return out;
}

inline PolicyAssignment baseline_aloha(std::size_t n_st, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("baseline_aloha: p must lie in [0, 1]");
  PolicyAssignment out;
  out.probs.assign(n_st, p);
  out.mean_target = p;
  return out;
}

inline PolicyAssignment baseline_threshold(std::span<const double> measurements, double i_th) {
  PolicyAssignment out;
  out.probs.reserve(measurements.size());
  for (double m : measurements) out.probs.push_back(m < i_th ? 1.0 : 0.0);
  if (!out.probs.empty())
    out.mean_target = std::accumulate(out.probs.begin(), out.probs.end(), 0.0) /
                      static_cast<double>(out.probs.size());
  return out;
}

/// Transmit iff uniforms[i] < probs[i]; uniforms lie in (0, 1).
inline void decide(PolicyAssignment& a, std::span<const double> uniforms) {
  if (uniforms.size() != a.probs.size()) throw std::invalid_argument("decide: size mismatch");
  a.decisions.resize(a.probs.size());
  for (std::size_t i = 0; i < a.probs.size(); ++i) a.decisions[i] = uniforms[i] < a.probs[i];
}

inline void decide(PolicyAssignment& a, Rng& rng) {
  a.decisions.resize(a.probs.size());
  for (std::size_t i = 0; i < a.probs.size(); ++i) a.decisions[i] = std::bernoulli_distribution(a.probs[i])(rng);
}

}  // namespace cra
