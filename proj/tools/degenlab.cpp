// degenlab: command-line driver for the experiments.
//
//   degenlab run <config> [--out DIR] [--seed N]
//   degenlab sweep <config> --deltas d1,d2,... [--out DIR]
//   degenlab validate <config>
//
// Exit status: 0 all checks passed, 1 a check or runtime invariant failed,
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "degen/config.hpp"
#include "degen/experiments.hpp"
#include "degen/initial_data.hpp"
#include "degen/solver.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

int report(const degen::Verdict& v) {
  degen::write_verdict(std::cout, v);
  return v.passed() ? kPass : kFail;
}

// Builds everything the config describes without running it.
void dry_build(const degen::ExperimentConfig& c) {
  const degen::Grid g = c.make_grid();
  (void)c.make_motility();
  (void)degen::make_u0(g, c.init, c.seed);
  (void)degen::make_v0(g, c.init, c.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for a degenerate taxis-consumption system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas;

  auto* run = app.add_subcommand("run", "Run the experiment named in the config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (default: output.dir from the config)");
  run->add_option("--seed", seed, "Override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Sweep the mass of v0 and locate the pattern threshold");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--deltas", deltas, "Masses of v0, positive and decreasing")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory (default: output.dir from the config)");
  sweep->add_option("--seed", seed, "Override the config seed");

  auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
  validate->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  degen::ExperimentConfig config;
  try {
    config = degen::load_config(config_path);
    if (seed) config.seed = *seed;
    config.validate();
    dry_build(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return kUsage;
  }

  if (validate->parsed()) {
    std::cout << "config ok: " << config.experiment << " on a " << config.grid.dim << "D grid\n";
    return kPass;
  }

  const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
  try {
    if (run->parsed()) return report(degen::run_experiment(config, dir));
    return report(degen::run_sweep(config, deltas, dir));
  } catch (const degen::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kFail;
  }
}
