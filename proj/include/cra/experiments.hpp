#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cra/analytics.hpp"
#include "cra/cid.hpp"
#include "cra/config.hpp"
#include "cra/engine.hpp"
#include "cra/format.hpp"
#include "cra/policy.hpp"

namespace cra {

// Each experiment writes one comma-separated data file: a '#' header that
// embeds the full configuration, a column line, rows, and '#' footer lines.

inline void write_config_header(std::ostream& out, const ExperimentConfig& config) {
  out << "# cra " << experiment_name(config.experiment) << '\n'
      << kConfigBegin << '\n'
      << emit_config(config, "# ") << kConfigEnd << '\n';
}

inline void write_key(std::ostream& out, std::string_view key, double value) {
  out << "# " << key << " = " << format_double(value) << '\n';
}

inline CidContext cid_context(const ExperimentConfig& config) {
  const RadioParams p = config.radio();
  return {p.power_p, p.lambda_p, p.alpha, p.d};
}

/// pdf and cdf of the CID for config.m on `grid` interior points spanning
/// 0.1% to 99.9% of the support.
inline CidModel cmd_cid_dump(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  const CidModel model = make_cid_model(config.m, cid_context(config));
  if (!(model.x_max > model.x_min)) throw std::domain_error("cid-dump: degenerate support (d = 0)");
  // With r1_hat == d the support is unbounded; stop at the 99.9% quantile.
  const double hi = std::isfinite(model.x_max) ? model.x_max : cid_value_at_angle(model, 1e-3 * std::numbers::pi);
  const double width = hi - model.x_min;

  write_config_header(out, config);
  write_key(out, "r1_hat", model.r1_hat);
  write_key(out, "t", model.t_resid);
  write_key(out, "x_min", model.x_min);
  write_key(out, "x_max", model.x_max);
  out << "# near_field = " << (model.near_field() ? "true" : "false") << '\n';
  out << "x_watts,pdf,cdf\n";
  const auto n = config.grid;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double frac = 0.001 + 0.998 * static_cast<double>(k) / static_cast<double>(n - 1);
    const double x = model.x_min + frac * width;
    out << format_double(x) << ',' << format_double(pdf_eval(model, x)) << ','
        << format_double(cdf_eval(model, x)) << '\n';
  }
  return model;
}

/// Empirical CID by rejection against the analytic one.
inline CidValidation cmd_validate_cid(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  Rng rng(derive_seed(config.master_seed, 0));
  CidValidationOptions opts;
  opts.bins = config.bins;
  RadioParams params = config.radio();
  const CidValidation v = validate_cid_empirical(config.m, config.band, params, config.n_target, rng, opts);

  write_config_header(out, config);
  write_key(out, "r1_hat", v.model.r1_hat);
  write_key(out, "t", v.model.t_resid);
  write_key(out, "x_min", v.model.x_min);
  write_key(out, "x_max", v.model.x_max);
  write_key(out, "field_radius", v.field_radius);
  out << "bin_center,empirical_density,analytic_density\n";
  for (std::size_t i = 0; i < v.histogram.counts.size(); ++i)
    out << format_double(v.histogram.center(i)) << ',' << format_double(v.histogram.density(i)) << ','
        << format_double(v.analytic_density[i]) << '\n';
  write_key(out, "ks", v.ks);
  write_key(out, "acceptance_rate", v.acceptance_rate());
  out << "# accepted = " << v.accepted << '\n' << "# trials = " << v.trials << '\n';
  write_key(out, "mode", v.mode);
  write_key(out, "nearest_mean", v.nearest_mean);
  write_key(out, "nearest_sd", v.nearest_sd);
  out << "# arccos_clamped = " << v.clamped << '\n';
  return v;
}

struct SweepRow {
  double sweep_value = 0.0;
  double p_star = 0.0;
  double ase_closed_form = 0.0;
  double outage_target = 0.0;
  MetricsEstimate cid;
  MetricsEstimate aloha;
  MetricsEstimate threshold;
  Estimate diff_cid_aloha;      // paired
  Estimate diff_cid_threshold;  // paired
};

inline RadioParams sweep_point(const ExperimentConfig& config, double value) {
  RadioParams p = config.radio();
  if (config.experiment == Experiment::ase_sweep_lambda_s) p.lambda_s = value;
  else if (config.experiment == Experiment::ase_sweep_lambda_p) p.lambda_p = value;
  else throw std::invalid_argument("ase-sweep: experiment must be ase-sweep-lambda-s or ase-sweep-lambda-p");
  return p;
}

/// All three policies on common snapshots at each grid point.
inline std::vector<SweepRow> cmd_ase_sweep(const ExperimentConfig& config, std::ostream& out, unsigned workers = 0) {
  config.validate();
  if (config.sweep.empty()) throw std::invalid_argument("sweep: grid is empty");
  std::vector<SweepRow> rows;
  for (double value : config.sweep) {
    const RadioParams params = sweep_point(config, value);
    params.validate();
    CognitiveCid cid{std::nullopt, config.p_star_kind()};
    if (config.mean_weight == "precomputed")
      cid.mean_weight =
          estimate_mean_weight(params, config.mean_weight_snapshots, derive_seed(config.master_seed, ~0ULL));
    const std::vector<PolicyKind> policies{cid, Aloha{}, HardThreshold{}};
    SimulationOptions opts;
    opts.snapshots = config.snapshots;
    opts.master_seed = config.master_seed;
    opts.workers = workers;
    opts.fading = config.fading_kind();
    const auto records = run_policies(params, policies, opts);

    SweepRow row;
    row.sweep_value = value;
    row.p_star = params.lambda_s > 0.0 ? expected_p_star(params, config.p_star_kind()) : 0.0;
    row.ase_closed_form = ase_closed_form({params, row.p_star});
    row.outage_target = params.tau;
    row.cid = estimate_metrics(records[0], params);
    row.aloha = estimate_metrics(records[1], params);
    row.threshold = estimate_metrics(records[2], params);
    row.diff_cid_aloha = paired_ase_difference(records[0], records[1], params);
    row.diff_cid_threshold = paired_ase_difference(records[0], records[2], params);
    rows.push_back(row);
  }

  write_config_header(out, config);
  out << "sweep_value,ase_cid,ase_aloha,ase_threshold,ase_closed_form,outage_cid,outage_target,"
         "se_ase_cid,se_ase_aloha,se_ase_threshold,outage_aloha,outage_threshold,se_outage_cid,"
         "success_cid,success_aloha,success_threshold,p_star,mean_assigned_p_cid,clip_fraction_cid,"
         "diff_cid_aloha,se_diff_cid_aloha,diff_cid_threshold,se_diff_cid_threshold\n";
  for (const SweepRow& r : rows) {
    const double cols[] = {r.sweep_value,
                           r.cid.ase.value,
                           r.aloha.ase.value,
                           r.threshold.ase.value,
                           r.ase_closed_form,
                           r.cid.primary_outage.value,
                           r.outage_target,
                           r.cid.ase.se,
                           r.aloha.ase.se,
                           r.threshold.ase.se,
                           r.aloha.primary_outage.value,
                           r.threshold.primary_outage.value,
                           r.cid.primary_outage.se,
                           r.cid.secondary_success.value,
                           r.aloha.secondary_success.value,
                           r.threshold.secondary_success.value,
                           r.p_star,
                           r.cid.mean_assigned_p,
                           r.cid.clip_fraction,
                           r.diff_cid_aloha.value,
                           r.diff_cid_aloha.se,
                           r.diff_cid_threshold.value,
                           r.diff_cid_threshold.se};
    bool first = true;
    for (double c : cols) {
      out << (first ? "" : ",") << format_double(c);
      first = false;
    }
    out << '\n';
  }
  return rows;
}

/// One topology with the assigned probability of every ST.
inline PolicyAssignment cmd_snapshot_dump(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  const RadioParams params = config.radio();
  Rng rng(derive_seed(config.master_seed, 0));
  const NetworkSnapshot snap = sample_snapshot(params, config.fading_kind(), rng);
  const std::vector<double> m = sensor_measurements(snap, params);
  PolicyKind policy = parse_policy(config.policy);
  if (auto* cid = std::get_if<CognitiveCid>(&policy)) {
    cid->form = config.p_star_kind();
    if (config.mean_weight == "precomputed")
      cid->mean_weight =
          estimate_mean_weight(params, config.mean_weight_snapshots, derive_seed(config.master_seed, ~0ULL));
  }
  PolicyAssignment a = assign_policy(m, params, policy);

  write_config_header(out, config);
  out << "kind,x,y,prob\n";
  for (const Point& p : snap.pts) out << "pt," << format_double(p.x) << ',' << format_double(p.y) << ",\n";
  for (std::size_t i = 0; i < snap.sts.size(); ++i)
    out << "st," << format_double(snap.sts[i].x) << ',' << format_double(snap.sts[i].y) << ','
        << format_double(a.probs[i]) << '\n';
  for (const Point& p : snap.sensors) out << "sensor," << format_double(p.x) << ',' << format_double(p.y) << ",\n";
  return a;
}

}  // namespace cra
