#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "degen/config.hpp"
#include "degen/solver.hpp"

namespace degen {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Verdict {
  std::string experiment;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void add(std::string name, bool passed, std::string detail);
  bool passed() const;
};

/// One line per check ("PASS name: detail" / "FAIL ..."), notes, then the overall result.
void write_verdict(std::ostream& os, const Verdict& verdict);

/// Conservation, comparison and budget checks shared by every coupled run.
void check_trajectory_invariants(Verdict& verdict, const std::string& label, const Trajectory& tr);

struct PatternOutcome {
  double nonconstancy_u0 = 0.0;
  double ratio_degenerate = 0.0;  // nonconstancy(u(t_end)) / nonconstancy(u0)
  double ratio_control = 0.0;
  Trajectory degenerate;
  Trajectory control;
};

/// Runs the configured motility and its shifted control on the same data.
/// Throws std::invalid_argument when the configured motility is not degenerate.
PatternOutcome pattern_pair(const ExperimentConfig& config);

struct ThresholdRow {
  double delta = 0.0;  // int v0
  double ratio = 0.0;  // final nonconstancy ratio
  double proxy = 0.0;  // dual_norm_proxy(u(t_end) - u0)
};

struct ThresholdReport {
  std::vector<ThresholdRow> rows;
  bool found = false;
  double largest_retaining_delta = 0.0;  // largest delta with ratio >= retain_ratio
  double xi_hat = 0.0;                   // proxy / delta at the largest delta
  double c3 = 0.0;                       // plateau value of the normalized bumps
  double kappa = 0.0;                    // (c2 - c1) / 2 read off u0 on the two bump supports
  double ball_volume = 0.0;              // |B_R|
  double predicted_delta = 0.0;          // c3 kappa |B_R| / (2 xi_hat)
  int proxy_inversions = 0;              // decreases of proxy when delta grows
};

/// Fixed u0, v0 = the configured bump rescaled to each mass in `deltas`
/// (positive, decreasing); runs are independent and dispatched in parallel.
ThresholdReport sweep_v0_mass(const ExperimentConfig& config, const std::vector<double>& deltas);
void write_threshold_csv(std::ostream& os, const ThresholdReport& report);

/// Runs config.experiment, writing diagnostics, reports, snapshots and
/// verdict.txt into out_dir (created if needed).
Verdict run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// The sweep driver behind `degenlab sweep`: sweep_v0_mass plus its verdict.
Verdict run_sweep(const ExperimentConfig& config, const std::vector<double>& deltas,
                  const std::filesystem::path& out_dir);

}  // namespace degen
