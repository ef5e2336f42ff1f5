#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leobf/experiment.hpp"
#include "leobf/validate.hpp"

namespace {

int run_validate(bool full) {
  const auto results = leobf::run_validation(full);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %s%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.pass ? "" : ": ", r.detail.c_str());
    failed += !r.pass;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative downlink beamforming simulator for networked LEO constellations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run the configured solver over n_drops scenes");
  simulate->add_option("--config", config_path, "JSON experiment configuration")->required();
  simulate->add_option("--out", out_dir, "Output directory (defaults to config output_dir)");

  std::string axis;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Sweep one axis and aggregate per value");
  sweep->add_option("--config", config_path, "JSON experiment configuration")->required();
  sweep->add_option("--axis", axis, "power_dbm | n_antennas | n_sats | n_uts");
  sweep->add_option("--values", values, "Axis values")->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory (defaults to config output_dir)");

  bool full = false;
  auto* validate = app.add_subcommand("validate", "Run the invariant checks");
  validate->add_flag("--full", full, "Include the Monte-Carlo and oracle suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return run_validate(full);

    const leobf::ExperimentConfig cfg = leobf::load_config(config_path);
    const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
    if (app.got_subcommand(simulate)) return leobf::cmd_simulate(cfg, dir);

    const std::string use_axis = axis.empty() ? cfg.sweep_axis : axis;
    const std::vector<double> use_values = values.empty() ? cfg.sweep_values : values;
    if (use_axis.empty() || use_values.empty()) {
      std::fprintf(stderr, "sweep needs --axis/--values or a sweep section in the config\n");
      return 2;
    }
    return leobf::cmd_sweep(cfg, use_axis, use_values, dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
