#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "degen/grid.hpp"
#include "degen/motility.hpp"
#include "degen/state.hpp"

namespace degen {

/// Parse or validation failure; line() is the offending config line (0 when
/// the problem concerns a defaulted key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct GridConfig {
  int dim = 1;
  int nx = 256;
  int ny = 1;
  double lx = 1.0;
  double ly = 1.0;
  bool operator==(const GridConfig&) const = default;
};

struct MotilityConfig {
  std::string kind = "linear";  // linear | exp_decay | saturating | shifted | tabulated
  double beta = 1.0;            // exp_decay rate
  double shift = 0.5;           // c0 of the shifted kind
  std::string base = "linear";  // base kind of the shifted kind
  std::string table;            // two-column file for the tabulated kind
  bool operator==(const MotilityConfig&) const = default;
};

struct InitConfig {
  std::string u = "two_bump";  // constant | two_bump | gaussian | random_smooth
  double u_base = 1.0;
  double u_height = 2.0;
  double u_lo = 0.55;          // two_bump plateau [u_lo, u_hi]
  double u_hi = 0.8;
  double u_ramp = 0.05;
  double u_center = 0.5;       // gaussian
  double u_width = 0.1;
  double u_amplitude = 0.5;    // random_smooth
  std::string v = "bump";      // constant | bump | random_smooth
  double v_level = 1.0;        // constant
  double v_peak = 0.1;         // bump peak, the sup bound K
  double v_center = 0.3;
  double v_width = 0.15;       // half-width of the cos^2 bump
  double v_mass = 0.01;        // rescale the bump to this mass; 0 keeps the shape
  double v_amplitude = 0.5;    // random_smooth
  bool operator==(const InitConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> eps_list{0.1, 0.025, 0.00625};
  std::vector<double> deltas{0.01, 0.005, 0.0025, 0.00125};
  bool operator==(const SweepConfig&) const = default;
};

struct MPConfig {
  double p1 = 4.0, q1 = 4.0, p2 = 2.0, q2 = 2.0;
  double L = 4.0;
  double T = 1.0;
  double tau = 0.1;
  std::string family = "mixed";  // zero | smooth | concentrating | mixed
  std::string data = "random";   // random | constant
  int instances = 32;
  int cells = 128;
  double coupled_time = 0.25;
  std::vector<double> coupled_eps{0.1, 0.01, 0.001};
  bool operator==(const MPConfig&) const = default;
};

struct CEConfig {
  double alpha = 0.5;
  double T = 1.0;
  double p = 1.0;
  double q = 1.0;
  int k_min = 1;
  int k_max = 6;
  int dim = 1;
  int cells = 512;
  bool operator==(const CEConfig&) const = default;
};

struct IneqConfig {
  double p = 2.0;
  int corpus = 200;
  std::vector<double> eta_grid{0.1, 0.5, 1.0, 2.0, 10.0};
  int cells = 128;
  int modes = 8;
  double amplitude = 2.0;
  double validation_factor = 1.1;
  int refine_top = 10;         // worst pairs pushed further by random-search ascent
  int refine_iterations = 200;
  bool operator==(const IneqConfig&) const = default;
};

struct PatternConfig {
  double control_shift = 0.5;
  double retain_ratio = 0.5;   // degenerate run must keep at least this share of nonconstancy
  double flatten_ratio = 0.1;  // control run must keep at most this share
  bool operator==(const PatternConfig&) const = default;
};

struct ExperimentConfig {
  std::string experiment = "E1_boundedness";
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  GridConfig grid;
  MotilityConfig motility;
  InitConfig init;
  SimParams sim;
  SweepConfig sweep;
  MPConfig mp;
  CEConfig ce;
  IneqConfig ineq;
  PatternConfig pattern;
  int tv_points = 10;
  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError (line 0) naming the offending key.
  void validate() const;
  Grid make_grid() const;
  MotilitySpec make_motility() const;
};

const std::vector<std::string>& experiment_ids();

/// Parses "section.key = value" lines ('#' comments, blank lines ignored),
/// fills defaults for omitted keys and validates. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Every key with full precision; parse_config(serialize(c)) == c.
std::string serialize(const ExperimentConfig& config);

}  // namespace degen
