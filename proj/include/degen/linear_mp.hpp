#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degen/field.hpp"

namespace degen {

/// Largest dt keeping every coefficient of the explicit update
///   V + dt (lap V + div(a V) + b V)
/// nonnegative: 1 / (sum_d 2/h_d^2 + sum_d 2 max|a_d|/h_d + max b_-).
double linear_cfl_limit(const VectorField& a, const ScalarField& b);

/// One explicit step of V_t = lap V + div(a V) + b V with no-flux walls.
/// Throws std::invalid_argument when dt <= 0 or dt > linear_cfl_limit(a, b),
/// or when a has a nonzero normal component on the boundary.
ScalarField step_linear(const ScalarField& V, const VectorField& a, const ScalarField& b, double dt);

/// Fills a(t) and b(t); both arrive sized for the grid.
using CoefficientProvider = std::function<void(double t, VectorField& a, ScalarField& b)>;
/// Called with (t, V) at t = 0 and after every step.
using LinearObserver = std::function<void(double t, const ScalarField& V)>;

struct LinearRunOptions {
  double T = 1.0;
  double cfl_safety = 0.9;
  /// For each tau, the run reports inf V over (tau, T].
  std::vector<double> windows;
  // Exponents for the coefficient budgets int_0^T ||a||_p1^q1 and int_0^T ||b||_p2^q2.
  double p1 = 2.0, q1 = 2.0, p2 = 1.0, q2 = 1.0;
  LinearObserver observer;
};

struct LinearRun {
  ScalarField final_V;
  std::vector<double> inf_after;  // one per window
  double budget_a = 0.0;          // left Riemann sum over the actual steps
  double budget_b = 0.0;
  std::size_t steps = 0;
};

/// Evolves V0 to T with dt = cfl_safety * linear_cfl_limit recomputed from the
/// coefficients at the old time (clipped to land on T).
LinearRun evolve_linear(const ScalarField& V0, const CoefficientProvider& coeffs, const LinearRunOptions& opts);

enum class CoefficientFamily { zero, smooth, concentrating, mixed };
enum class ProbeDataKind { random, constant };

std::string to_string(CoefficientFamily f);
CoefficientFamily coefficient_family_from_string(const std::string& s);

struct MPProbeConfig {
  double p1 = 4.0, q1 = 4.0;  // a in L^q1((0,T); L^p1)
  double p2 = 2.0, q2 = 2.0;  // b in L^q2((0,T); L^p2)
  double L = 4.0;
  double T = 1.0;
  double tau = 0.1;
  std::uint64_t seed = 1;
  CoefficientFamily family = CoefficientFamily::mixed;
  ProbeDataKind data = ProbeDataKind::random;
  double length = 1.0;  // probes run on [0, length] (1D) ...
  int cells = 128;
  int dim = 1;          // ... or on the square [0, length]^2
  double cfl_safety = 0.9;

  /// 1/q1 + n/(2 p1) < 1/2 and 1/q2 + n/(2 p2) < 1.
  bool integrability_condition() const;
  /// Throws std::invalid_argument on out-of-range exponents, L <= 0, T <= 0,
  /// tau outside (0, T) or an invalid grid.
  void validate() const;
};

struct ProbeInstance {
  std::uint64_t seed = 0;
  std::string family;
  double inf_V = 0.0;       // over (tau, T]
  double inf_V_2tau = 0.0;  // over (2 tau, T]
  double budget_a = 0.0;    // int_0^T ||a||_p1^q1
  double budget_b = 0.0;    // int_0^T ||b||_p2^q2
  double max_V0 = 0.0;
  double int_V0 = 0.0;
  bool within_budget = false;
};

struct MPProbeResult {
  bool condition = false;
  double empirical_C = 0.0;       // inf over instances of inf_V
  double empirical_C_2tau = 0.0;  // same over (2 tau, T]
  std::vector<ProbeInstance> instances;
  bool all_within_budget = false;
};

/// Thrown when the generated coefficients or data cannot meet the declared budget.
class GeneratorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generates `instances` random coefficient pairs, each scaled so that both
/// budgets equal L, plus data with max V0 <= L and int V0 >= 1/L, and evolves
/// them in parallel. Throws std::invalid_argument when the integrability
/// condition fails or instances == 0.
MPProbeResult probe_lower_bound(const MPProbeConfig& config, std::size_t instances);

}  // namespace degen
