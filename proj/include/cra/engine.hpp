#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cra/cid.hpp"
#include "cra/core_model.hpp"
#include "cra/policy.hpp"
#include "cra/radio_params.hpp"
#include "cra/random.hpp"
#include "cra/stats.hpp"

namespace cra {

/// Link counts of one policy on one snapshot.
struct SnapshotRecord {
  std::uint64_t index = 0;
  std::size_t n_pt = 0;
  std::size_t n_st = 0;
  std::size_t primary_links = 0;
  std::size_t primary_failures = 0;
  std::size_t secondary_attempts = 0;
  std::size_t secondary_successes = 0;
  double sum_assigned_p = 0.0;
  std::size_t clipped = 0;
  bool uniform_fallback = false;
};

struct MetricsEstimate {
  Estimate ase;  // log_base units per Hz per m^2
  Estimate primary_outage;
  Estimate secondary_success;
  double mean_assigned_p = 0.0;
  double clip_fraction = 0.0;
  std::uint64_t snapshots = 0;
  std::uint64_t fallback_snapshots = 0;
};

struct SimulationOptions {
  std::uint64_t snapshots = 20000;
  std::uint64_t master_seed = 1;
  unsigned workers = 0;  // 0: one per hardware thread
  FadingKind fading = FadingKind::rayleigh;
};

/// Per-ST probabilities for `policy` given the sensor readings.
///
/// A zero reading (no PT anywhere) is the m -> 0 limit of the CID: all of its
/// support lies at zero, so w = 1.
inline PolicyAssignment assign_policy(std::span<const double> measurements, const RadioParams& params,
                                      const PolicyKind& policy) {
  return std::visit(
      [&](const auto& pol) -> PolicyAssignment {
        using T = std::decay_t<decltype(pol)>;
        if constexpr (std::is_same_v<T, CognitiveCid>) {
          const double target = params.lambda_s > 0.0 ? expected_p_star(params, pol.form) : 0.0;
          if (measurements.empty()) {
            PolicyAssignment empty;
            empty.mean_target = target;
            return empty;
          }
          const CidContext ctx{params.power_p, params.lambda_p, params.alpha, params.d};
          std::vector<double> w;
          w.reserve(measurements.size());
          for (double m : measurements) w.push_back(m > 0.0 ? weight(m, params.i_th, ctx) : 1.0);
          return assign_probabilities(w, target, pol.mean_weight);
        } else if constexpr (std::is_same_v<T, Aloha>) {
          const double p = pol.p ? *pol.p : (params.lambda_s > 0.0 ? expected_p_star(params) : 0.0);
          return baseline_aloha(measurements.size(), p);
        } else {
          return baseline_threshold(measurements, pol.i_th.value_or(params.i_th));
        }
      },
      policy);
}

/// Coin uniforms for the transmit decisions, shared by every policy on `snap`.
inline std::vector<double> decision_uniforms(const NetworkSnapshot& snap) {
  std::vector<double> u(snap.sts.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = keyed_uniform(snap.coin_key, i, 0x5eed);
  return u;
}

/// SIR/SINR at every primary receiver and every active secondary receiver.
/// Primary links fail when SIR <= beta; secondary links succeed when SIR > beta.
inline SnapshotRecord evaluate_links(const NetworkSnapshot& snap, const RadioParams& params,
                                     const PolicyAssignment& assignment) {
  const Arena arena{params.area_side, params.torus};
  const double noise = params.noise.value_or(0.0);
  const double alpha = params.alpha;
  const bool bounded = params.pathloss_bounded;
  const std::size_t n_pt = snap.pts.size();

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < assignment.decisions.size(); ++i)
    if (assignment.decisions[i]) active.push_back(i);

  auto gain = [&](Point tx, Point rx) { return detail::pathloss_sq(arena.distance_sq(tx, rx), alpha, bounded); };
  auto sir = [&](double signal, double interference) {
    const double denom = interference + noise;
    return denom == 0.0 ? std::numeric_limits<double>::infinity() : signal / denom;
  };

  SnapshotRecord rec;
  rec.n_pt = n_pt;
  rec.n_st = snap.sts.size();
  for (std::size_t j = 0; j < n_pt; ++j) {
    const Point rx = snap.p_receivers[j];
    const std::size_t rx_id = j;
    const double signal = params.power_p * snap.fading(snap.pt_id(j), rx_id) * gain(snap.pts[j], rx);
    double interference = 0.0;
    for (std::size_t k = 0; k < n_pt; ++k)
      if (k != j) interference += params.power_p * snap.fading(snap.pt_id(k), rx_id) * gain(snap.pts[k], rx);
    for (std::size_t i : active)
      interference += params.power_s * snap.fading(snap.st_id(i), rx_id) * gain(snap.sts[i], rx);
    ++rec.primary_links;
    if (sir(signal, interference) <= params.beta) ++rec.primary_failures;
  }
  for (std::size_t i : active) {
    const Point rx = snap.s_receivers[i];
    const std::size_t rx_id = n_pt + i;
    const double signal = params.power_s * snap.fading(snap.st_id(i), rx_id) * gain(snap.sts[i], rx);
    double interference = 0.0;
    for (std::size_t k = 0; k < n_pt; ++k)
      interference += params.power_p * snap.fading(snap.pt_id(k), rx_id) * gain(snap.pts[k], rx);
    for (std::size_t o : active)
      if (o != i) interference += params.power_s * snap.fading(snap.st_id(o), rx_id) * gain(snap.sts[o], rx);
    ++rec.secondary_attempts;
    if (sir(signal, interference) > params.beta) ++rec.secondary_successes;
  }
  for (double p : assignment.probs) rec.sum_assigned_p += p;
  rec.clipped = assignment.clipped;
  rec.uniform_fallback = assignment.uniform_fallback;
  return rec;
}

/// Every policy in `policies` on one common snapshot drawn from `rng`.
inline std::vector<SnapshotRecord> run_snapshot_paired(const RadioParams& params,
                                                       std::span<const PolicyKind> policies, Rng& rng,
                                                       FadingKind fading = FadingKind::rayleigh) {
  const NetworkSnapshot snap = sample_snapshot(params, fading, rng);
  const std::vector<double> m = sensor_measurements(snap, params);
  const std::vector<double> u = decision_uniforms(snap);
  std::vector<SnapshotRecord> out;
  out.reserve(policies.size());
  for (const PolicyKind& policy : policies) {
    PolicyAssignment a = assign_policy(m, params, policy);
    decide(a, u);
    out.push_back(evaluate_links(snap, params, a));
  }
  return out;
}

inline SnapshotRecord run_snapshot(const RadioParams& params, const PolicyKind& policy, Rng& rng,
                                   FadingKind fading = FadingKind::rayleigh) {
  return run_snapshot_paired(params, std::span<const PolicyKind>(&policy, 1), rng, fading).front();
}

/// Record streams, one per policy, each sorted by snapshot index.
///
/// Snapshot i is seeded from derive_seed(master_seed, i), and the worker
/// count only decides who computes it, so results do not depend on it.
inline std::vector<std::vector<SnapshotRecord>> run_policies(const RadioParams& params,
                                                             std::span<const PolicyKind> policies,
                                                             const SimulationOptions& opts) {
  params.validate();
  std::vector<std::vector<SnapshotRecord>> records(policies.size(),
                                                   std::vector<SnapshotRecord>(opts.snapshots));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(opts.workers == 0 ? hw : opts.workers, 1, std::max<std::uint64_t>(1, opts.snapshots)));

  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t i = w; i < opts.snapshots; i += workers) {
        Rng rng(derive_seed(opts.master_seed, i));
        auto recs = run_snapshot_paired(params, policies, rng, opts.fading);
        for (std::size_t p = 0; p < policies.size(); ++p) {
          recs[p].index = i;
          records[p][i] = recs[p];
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

inline double spectral_efficiency(const RadioParams& params) {
  return std::log(1.0 + params.beta) / std::log(params.log_base);
}

/// Per-snapshot ASE values (successes * log(1 + beta) / area).
inline std::vector<double> snapshot_ase(std::span<const SnapshotRecord> records, const RadioParams& params) {
  const double scale = spectral_efficiency(params) / params.area();
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(static_cast<double>(r.secondary_successes) * scale);
  return v;
}

inline MetricsEstimate estimate_metrics(std::span<const SnapshotRecord> records, const RadioParams& params) {
  if (records.empty()) throw std::invalid_argument("estimate_metrics: empty record stream");
  const std::size_t n = records.size();
  std::vector<double> fails(n), links(n), succ(n), attempts(n);
  double sum_p = 0.0;
  double n_st = 0.0;
  double clipped = 0.0;
  MetricsEstimate out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    fails[i] = static_cast<double>(r.primary_failures);
    links[i] = static_cast<double>(r.primary_links);
    succ[i] = static_cast<double>(r.secondary_successes);
    attempts[i] = static_cast<double>(r.secondary_attempts);
    sum_p += r.sum_assigned_p;
    n_st += static_cast<double>(r.n_st);
    clipped += static_cast<double>(r.clipped);
    if (r.uniform_fallback) ++out.fallback_snapshots;
  }
  const std::vector<double> ase = snapshot_ase(records, params);
  out.ase = batched_mean(ase);
  out.primary_outage = batched_ratio(fails, links);
  out.secondary_success = batched_ratio(succ, attempts);
  out.mean_assigned_p = n_st > 0.0 ? sum_p / n_st : 0.0;
  out.clip_fraction = n_st > 0.0 ? clipped / n_st : 0.0;
  out.snapshots = n;
  return out;
}

/// ASE(a) - ASE(b) on paired snapshots, with the batched standard error of
/// the per-snapshot differences.
inline Estimate paired_ase_difference(std::span<const SnapshotRecord> a, std::span<const SnapshotRecord> b,
                                      const RadioParams& params) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_ase_difference: stream lengths differ");
  const auto va = snapshot_ase(a, params);
  const auto vb = snapshot_ase(b, params);
  std::vector<double> diff(va.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = va[i] - vb[i];
  return batched_mean(diff);
}

/// Monte Carlo E[w] over the marginal law of sensor readings, for the
/// distributed variant of the cognitive policy.
inline double estimate_mean_weight(const RadioParams& params, std::uint64_t snapshots, std::uint64_t seed) {
  const CidContext ctx{params.power_p, params.lambda_p, params.alpha, params.d};
  double total = 0.0;
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < snapshots; ++i) {
    Rng rng(derive_seed(seed, i));
    const NetworkSnapshot snap = sample_snapshot(params, FadingKind::none, rng);
    for (double m : sensor_measurements(snap, params)) {
      total += m > 0.0 ? weight(m, params.i_th, ctx) : 1.0;
      ++count;
    }
  }
  if (count == 0) throw std::runtime_error("estimate_mean_weight: no STs sampled");
  return total / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Empirical CID by rejection.

struct CidValidationOptions {
  std::size_t bins = 60;
  std::uint64_t min_trials_before_abort = 1'000'000;
  double min_acceptance_rate = 1e-5;
};

struct CidValidation {
  CidModel model;
  std::vector<double> samples;  // ST interference of accepted fields, sorted
  Histogram histogram;
  std::vector<double> analytic_density;  // bin averages of the CID pdf
  double ks = 0.0;
  double mode = 0.0;  // centre of the fullest histogram bin
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  double field_radius = 0.0;
  double nearest_mean = 0.0;  // true sensor-to-nearest-PT distance of accepted fields
  double nearest_sd = 0.0;
  std::size_t clamped = 0;

  double acceptance_rate() const { return trials == 0 ? 0.0 : static_cast<double>(accepted) / trials; }
};

/// Draws PT fields around a sensor at the origin, keeps those whose
/// fading-free reading lies within m (1 +- band), and records the
/// fading-free interference at a point `d` away in a uniform direction.
///
/// Pathloss is unbounded. The field covers a disk large enough that the
/// missing tail is under 0.1% of T. With lambda_p == 0 the field is a single
/// PT uniform over a disk of 10 r1_hat.
inline CidValidation validate_cid_empirical(double m, double band, const RadioParams& params,
                                            std::uint64_t n_target, Rng& rng,
                                            const CidValidationOptions& opts = {}) {
  if (!(band > 0.0)) throw std::invalid_argument("validate_cid_empirical: band must be > 0");
  if (n_target == 0) throw std::invalid_argument("validate_cid_empirical: n_target must be >= 1");
  const double P = params.power_p;
  const double alpha = params.alpha;
  CidValidation out;
  out.model = make_cid_model(m, CidContext{P, params.lambda_p, alpha, params.d});
  const double r1 = out.model.r1_hat;
  const bool single = params.lambda_p == 0.0;
  const double radius = single ? 10.0 * r1 : r1 * std::max(10.0, std::pow(1000.0, 1.0 / (alpha - 2.0)));
  out.field_radius = radius;
  const double lo = m * (1.0 - band);
  const double hi = m * (1.0 + band);
  const double mean_count = params.lambda_p * std::numbers::pi * radius * radius;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> r2;
  std::vector<double> nearest;
  const double r2_max = radius * radius;

  while (out.accepted < n_target) {
    ++out.trials;
    r2.clear();
    const long long n = single ? 1 : (mean_count > 0.0 ? std::poisson_distribution<long long>(mean_count)(rng) : 0);
    double reading = 0.0;
    bool over = false;
    for (long long k = 0; k < n; ++k) {
      const double s = r2_max * unit(rng);
      r2.push_back(s);
      reading += P * detail::pathloss_sq(s, alpha, false);
      if (reading > hi) {
        over = true;
        break;
      }
    }
    if (!over && reading >= lo) {
      // Directions only matter for accepted fields.
      const Point st = offset_at_angle({0.0, 0.0}, params.d, 2.0 * std::numbers::pi * unit(rng));
      double at_st = 0.0;
      double near_sq = std::numeric_limits<double>::infinity();
      for (double s : r2) {
        const Point pt = offset_at_angle({0.0, 0.0}, std::sqrt(s), 2.0 * std::numbers::pi * unit(rng));
        at_st += P * detail::pathloss_sq((pt.x - st.x) * (pt.x - st.x) + (pt.y - st.y) * (pt.y - st.y), alpha, false);
        near_sq = std::min(near_sq, s);
      }
      out.samples.push_back(at_st);
      nearest.push_back(std::sqrt(near_sq));
      ++out.accepted;
    }
    if (out.trials >= opts.min_trials_before_abort && out.acceptance_rate() < opts.min_acceptance_rate)
      throw std::runtime_error("validate_cid_empirical: acceptance rate " + std::to_string(out.acceptance_rate()) +
                               " below " + std::to_string(opts.min_acceptance_rate) +
                               "; widen the conditioning band");
  }

  std::sort(out.samples.begin(), out.samples.end());
  CidDiagnostics diag;
  out.ks = ks_statistic(out.samples, [&](double x) { return cdf_eval(out.model, x, &diag); });
  out.clamped = diag.clamped;

  double mean = 0.0;
  for (double v : nearest) mean += v;
  mean /= static_cast<double>(nearest.size());
  double var = 0.0;
  for (double v : nearest) var += (v - mean) * (v - mean);
  out.nearest_mean = mean;
  out.nearest_sd = nearest.size() > 1 ? std::sqrt(var / static_cast<double>(nearest.size() - 1)) : 0.0;

  // Bins span the bulk of both the empirical and the analytic law.
  const double q_hi = out.samples[std::min(out.samples.size() - 1,
                                           static_cast<std::size_t>(0.995 * static_cast<double>(out.samples.size())))];
  double h_lo = std::min(out.samples.front(), out.model.x_min);
  double h_hi = std::max(q_hi, std::isfinite(out.model.x_max) ? std::min(out.model.x_max, 2.0 * q_hi) : q_hi);
  if (!(h_hi > h_lo)) h_hi = h_lo + std::max(1e-12, 1e-9 * std::fabs(h_lo));
  out.histogram = make_histogram(out.samples, h_lo, h_hi, opts.bins);
  out.mode = out.histogram.center(out.histogram.mode_bin());
  const double w = out.histogram.width();
  for (std::size_t i = 0; i < opts.bins; ++i) {
    const double a = h_lo + static_cast<double>(i) * w;
    out.analytic_density.push_back((cdf_eval(out.model, a + w) - cdf_eval(out.model, a)) / w);
  }
  return out;
}

}  // namespace cra
