#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msdd/io/commands.hpp"

using namespace msdd::io;

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral Maxwell-Schroedinger simulator and estimate checker"};
  app.require_subcommand(1);

  std::string config_path;

  auto* simulate = app.add_subcommand("simulate", "run a simulation and write diagnostics.csv");
  simulate->add_option("config", config_path, "configuration file")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("config", config_path, "configuration file")->required();
  verify->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(verify_suites()));

  std::string task;
  auto* spectrum = app.add_subcommand("spectrum", "run a spectral estimate task");
  spectrum->add_option("config", config_path, "configuration file")->required();
  spectrum->add_option("--task", task, "task name")->required()->check(CLI::IsMember(spectrum_tasks()));

  std::string in_path, out_path;
  auto* snapshot = app.add_subcommand("snapshot", "decode and re-encode a snapshot file");
  snapshot->add_option("--in", in_path, "input snapshot")->required();
  snapshot->add_option("--out", out_path, "output snapshot")->required();
  snapshot->add_option("--config", config_path, "configuration whose grid the snapshot must match");

  std::vector<std::string> csvs;
  std::string plot_dir;
  auto* plots = app.add_subcommand("plots", "emit gnuplot scripts for diagnostics CSV files");
  plots->add_option("--csv", csvs, "diagnostics CSV (several for an overlay)")->required();
  plots->add_option("--out", plot_dir, "directory for the scripts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  return guarded(std::cerr, [&]() -> int {
    std::optional<RunConfig> cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (*simulate) return cmd_simulate(*cfg, std::cout);
    if (*verify) return cmd_verify(*cfg, suite, std::cout);
    if (*spectrum) return cmd_spectrum(*cfg, task, std::cout);
    if (*snapshot) return cmd_snapshot(in_path, out_path, cfg ? &*cfg : nullptr, std::cout);
    return cmd_plots(csvs, plot_dir, std::cout);
  });
}
