// Command-line front end: one subcommand per experiment, CSV out.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cra/cra.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> snapshots;
  std::optional<std::string> policy;
  std::string out = "-";
  unsigned workers = 0;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--snapshots", f.snapshots, "Monte Carlo snapshots per grid point");
  cmd->add_option("--policy", f.policy, "cid, aloha or threshold (snapshot)");
  cmd->add_option("--out", f.out, "output file, '-' for stdout");
  cmd->add_option("--workers", f.workers, "worker threads, 0 for one per core");
  cmd->add_option("--set", f.settings, "override one key: --set key=value (repeatable)");
}

cra::ExperimentConfig build_config(const CommonFlags& f, cra::Experiment experiment,
                                   const std::optional<std::string>& axis) {
  std::string text;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::runtime_error("cannot read " + f.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  cra::ExperimentConfig config = cra::parse_config(text, false);
  const bool sweep = experiment == cra::Experiment::ase_sweep_lambda_s;
  // A sweep keeps the axis named in the file; --set and --axis override it.
  if (!sweep || config.experiment != cra::Experiment::ase_sweep_lambda_p) config.experiment = experiment;
  for (const std::string& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    cra::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (sweep && axis)
    config.experiment =
        *axis == "lambda_p" ? cra::Experiment::ase_sweep_lambda_p : cra::Experiment::ase_sweep_lambda_s;
  if (f.seed) config.master_seed = *f.seed;
  if (f.snapshots) config.snapshots = *f.snapshots;
  if (f.policy) cra::apply_setting(config, "policy", *f.policy);
  config.validate();
  return config;
}

void write_output(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive random access: CID analytics and Monte Carlo experiments"};
  app.require_subcommand(1);

  CommonFlags cid_flags, validate_flags, sweep_flags, snapshot_flags;
  std::optional<std::string> axis;
  auto* cid = app.add_subcommand("cid", "dump pdf/cdf of the conditional interference distribution");
  add_common(cid, cid_flags);
  auto* validate = app.add_subcommand("validate-cid", "rejection Monte Carlo check of the CID");
  add_common(validate, validate_flags);
  auto* sweep = app.add_subcommand("ase-sweep", "ASE of cid/aloha/threshold over a density grid");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "lambda_s or lambda_p")->check(CLI::IsMember({"lambda_s", "lambda_p"}));
  auto* snapshot = app.add_subcommand("snapshot", "one topology with assigned probabilities");
  add_common(snapshot, snapshot_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostringstream data;
    const CommonFlags* flags = nullptr;
    if (cid->parsed()) {
      flags = &cid_flags;
      cra::cmd_cid_dump(build_config(cid_flags, cra::Experiment::cid_dump, std::nullopt), data);
    } else if (validate->parsed()) {
      flags = &validate_flags;
      cra::cmd_validate_cid(build_config(validate_flags, cra::Experiment::validate_cid, std::nullopt), data);
    } else if (sweep->parsed()) {
      flags = &sweep_flags;
      cra::cmd_ase_sweep(build_config(sweep_flags, cra::Experiment::ase_sweep_lambda_s, axis), data,
                         sweep_flags.workers);
    } else {
      flags = &snapshot_flags;
      cra::cmd_snapshot_dump(build_config(snapshot_flags, cra::Experiment::snapshot_dump, std::nullopt), data);
    }
    write_output(flags->out, data.str());
  } catch (const std::exception& e) {
    std::cerr << "cra: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
