#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cra/core_model.hpp"
#include "cra/format.hpp"
#include "cra/policy.hpp"
#include "cra/radio_params.hpp"
#include "cra/units.hpp"

namespace cra {

enum class Experiment { cid_dump, validate_cid, ase_sweep_lambda_s, ase_sweep_lambda_p, snapshot_dump };

inline std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::cid_dump: return "cid-dump";
    case Experiment::validate_cid: return "validate-cid";
    case Experiment::ase_sweep_lambda_s: return "ase-sweep-lambda-s";
    case Experiment::ase_sweep_lambda_p: return "ase-sweep-lambda-p";
    case Experiment::snapshot_dump: return "snapshot-dump";
  }
  return "?";
}

inline Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::cid_dump, Experiment::validate_cid, Experiment::ase_sweep_lambda_s,
                 Experiment::ase_sweep_lambda_p, Experiment::snapshot_dump})
    if (experiment_name(e) == name) return e;
  throw std::invalid_argument("experiment: unknown value '" + std::string(name) + "'");
}

/// One run, in human units (dBm, dB). Converted to RadioParams once.
struct ExperimentConfig {
  double lambda_p = 0.001;
  double lambda_s = 0.01;
  double p_p_dbm = 23.0;
  double p_s_dbm = 5.0;
  double alpha = 4.0;
  double beta_db = 3.0;
  double tau = 0.05;
  double d = 1.0;
  double r_s = 3.0;
  double r_p = 3.0;
  double i_th_dbm = 2.0;
  std::optional<double> noise_dbm = -70.0;  // "none" disables noise
  double area_side = 100.0;
  bool pathloss_bounded = true;
  bool torus = false;
  double log_base = 2.0;
  std::string fading = "rayleigh";

  Experiment experiment = Experiment::ase_sweep_lambda_s;
  std::vector<double> sweep{0.005, 0.01, 0.02, 0.03};
  std::uint64_t snapshots = 20000;
  std::uint64_t master_seed = 1;
  std::string policy = "cid";
  std::string p_star_form = "outage_consistent";  // or "as_printed"
  std::string mean_weight = "per_snapshot";       // or "precomputed"
  std::uint64_t mean_weight_snapshots = 2000;

  double m = 0.01;  // W, conditioning measurement for cid-dump / validate-cid
  std::uint64_t grid = 200;
  double band = 0.025;
  std::uint64_t n_target = 10000;
  std::uint64_t bins = 60;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  RadioParams radio() const {
    RadioParams p;
    p.lambda_p = lambda_p;
    p.lambda_s = lambda_s;
    p.power_p = dbm_to_watts(p_p_dbm);
    p.power_s = dbm_to_watts(p_s_dbm);
    p.alpha = alpha;
    p.beta = db_to_linear(beta_db);
    p.tau = tau;
    p.d = d;
    p.r_s = r_s;
    p.r_p = r_p;
    p.i_th = dbm_to_watts(i_th_dbm);
    p.noise = noise_dbm ? std::optional<double>(dbm_to_watts(*noise_dbm)) : std::nullopt;
    p.area_side = area_side;
    p.pathloss_bounded = pathloss_bounded;
    p.torus = torus;
    p.log_base = log_base;
    return p;
  }

  FadingKind fading_kind() const { return fading == "none" ? FadingKind::none : FadingKind::rayleigh; }
  PStarForm p_star_kind() const {
    return p_star_form == "as_printed" ? PStarForm::as_printed : PStarForm::outage_consistent;
  }

  /// Throws std::invalid_argument naming the offending key.
  void validate() const {
    radio().validate();
    auto require = [](bool ok, const char* key, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
    };
    require(fading == "rayleigh" || fading == "none", "fading", "must be rayleigh or none");
    require(policy == "cid" || policy == "aloha" || policy == "threshold", "policy", "must be cid, aloha or threshold");
    require(p_star_form == "outage_consistent" || p_star_form == "as_printed", "p_star_form",
            "must be outage_consistent or as_printed");
    require(mean_weight == "per_snapshot" || mean_weight == "precomputed", "mean_weight",
            "must be per_snapshot or precomputed");
    require(m > 0.0, "m", "must be > 0");
    require(band > 0.0, "band", "must be > 0");
    require(grid >= 2, "grid", "must be >= 2");
    require(bins >= 1, "bins", "must be >= 1");
    require(snapshots >= 1, "snapshots", "must be >= 1");
  }
};

namespace detail {

struct ConfigKey {
  const char* name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

inline std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v[i]);
  return out;
}

inline std::vector<double> split_doubles(std::string_view text, std::string_view key) {
  std::vector<double> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string one_of(std::string_view v, std::initializer_list<std::string_view> allowed, const char* key) {
  for (auto a : allowed)
    if (v == a) return std::string(v);
  throw std::invalid_argument(std::string(key) + ": unknown value '" + std::string(v) + "'");
}

#define CRA_DOUBLE_KEY(field)                                                                            \
  ConfigKey {                                                                                            \
    #field, [](ExperimentConfig& c, std::string_view v) { c.field = parse_double(v, #field); },          \
        [](const ExperimentConfig& c) { return format_double(c.field); }                                 \
  }
#define CRA_U64_KEY(field)                                                                               \
  ConfigKey {                                                                                            \
    #field, [](ExperimentConfig& c, std::string_view v) { c.field = parse_u64(v, #field); },             \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                                \
  }
#define CRA_BOOL_KEY(field)                                                                              \
  ConfigKey {                                                                                            \
    #field, [](ExperimentConfig& c, std::string_view v) { c.field = parse_bool(v, #field); },            \
        [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); }                \
  }
#define CRA_CHOICE_KEY(field, ...)                                                                       \
  ConfigKey {                                                                                            \
    #field, [](ExperimentConfig& c, std::string_view v) { c.field = one_of(v, {__VA_ARGS__}, #field); }, \
        [](const ExperimentConfig& c) { return c.field; }                                                \
  }

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys{
      ConfigKey{"experiment",
                [](ExperimentConfig& c, std::string_view v) { c.experiment = parse_experiment(v); },
                [](const ExperimentConfig& c) { return std::string(experiment_name(c.experiment)); }},
      CRA_DOUBLE_KEY(lambda_p),
      CRA_DOUBLE_KEY(lambda_s),
      CRA_DOUBLE_KEY(p_p_dbm),
      CRA_DOUBLE_KEY(p_s_dbm),
      CRA_DOUBLE_KEY(alpha),
      CRA_DOUBLE_KEY(beta_db),
      CRA_DOUBLE_KEY(tau),
      CRA_DOUBLE_KEY(d),
      CRA_DOUBLE_KEY(r_s),
      CRA_DOUBLE_KEY(r_p),
      CRA_DOUBLE_KEY(i_th_dbm),
      ConfigKey{"noise_dbm",
                [](ExperimentConfig& c, std::string_view v) {
                  v = trim(v);
                  c.noise_dbm = v == "none" ? std::nullopt : std::optional<double>(parse_double(v, "noise_dbm"));
                },
                [](const ExperimentConfig& c) { return c.noise_dbm ? format_double(*c.noise_dbm) : "none"; }},
      CRA_DOUBLE_KEY(area_side),
      CRA_BOOL_KEY(pathloss_bounded),
      CRA_BOOL_KEY(torus),
      CRA_DOUBLE_KEY(log_base),
      CRA_CHOICE_KEY(fading, "rayleigh", "none"),
      ConfigKey{"sweep", [](ExperimentConfig& c, std::string_view v) { c.sweep = split_doubles(v, "sweep"); },
                [](const ExperimentConfig& c) { return join_doubles(c.sweep); }},
      CRA_U64_KEY(snapshots),
      CRA_U64_KEY(master_seed),
      CRA_CHOICE_KEY(policy, "cid", "aloha", "threshold"),
      CRA_CHOICE_KEY(p_star_form, "outage_consistent", "as_printed"),
      CRA_CHOICE_KEY(mean_weight, "per_snapshot", "precomputed"),
      CRA_U64_KEY(mean_weight_snapshots),
      CRA_DOUBLE_KEY(m),
      CRA_U64_KEY(grid),
      CRA_DOUBLE_KEY(band),
      CRA_U64_KEY(n_target),
      CRA_U64_KEY(bins),
  };
  return keys;
}

#undef CRA_DOUBLE_KEY
#undef CRA_U64_KEY
#undef CRA_BOOL_KEY
#undef CRA_CHOICE_KEY

}  // namespace detail

/// Sets one key from its text value. Unknown keys and bad values throw
/// std::invalid_argument naming the key.
inline void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& k : detail::config_keys()) {
    if (key == k.name) {
      k.set(config, trim(value));
      return;
    }
  }
  throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

/// Flat `key = value` lines; '#' starts a comment. Missing keys keep their
/// defaults.
inline ExperimentConfig parse_config(std::string_view text, bool check = true) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
  if (check) config.validate();
  return config;
}

/// Every key, one per line, in a form parse_config reads back unchanged.
inline std::string emit_config(const ExperimentConfig& config, std::string_view prefix = "") {
  std::ostringstream out;
  for (const auto& k : detail::config_keys()) out << prefix << k.name << " = " << k.get(config) << '\n';
  return out.str();
}

inline constexpr std::string_view kConfigBegin = "# config-begin";
inline constexpr std::string_view kConfigEnd = "# config-end";

/// Recovers the run configuration from the '#'-prefixed header of a data file.
inline ExperimentConfig config_from_data_file(std::string_view text) {
  const auto begin = text.find(kConfigBegin);
  const auto end = text.find(kConfigEnd);
  if (begin == std::string_view::npos || end == std::string_view::npos || end < begin)
    throw std::invalid_argument("data file has no config header");
  std::string body;
  std::string_view block = text.substr(begin + kConfigBegin.size(), end - begin - kConfigBegin.size());
  while (!block.empty()) {
    const auto nl = block.find('\n');
    std::string_view line = trim(block.substr(0, nl));
    block = nl == std::string_view::npos ? std::string_view{} : block.substr(nl + 1);
    if (line.starts_with("# ")) line.remove_prefix(2);
    body.append(line).push_back('\n');
  }
  return parse_config(body);
}

}  // namespace cra
