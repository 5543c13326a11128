#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "degen/diagnostics.hpp"
#include "degen/motility.hpp"
#include "degen/state.hpp"

namespace degen {

/// A step produced a state that breaks positivity, the sup bound on v, or
/// mass conservation. The message carries a short state dump.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// cfl_safety * min( h_min^2 / (2 dim max(eps + phi(v))), 1 / (2 dim / h_min^2 + max u) ).
/// Below both factors every coefficient of the explicit u- and v-stencils is
/// nonnegative. The first factor is +inf when eps + phi(v) vanishes
/// everywhere (u frozen); the second is always finite.
double cfl_timestep(const SolverState& state, const MotilitySpec& phi, const SimParams& params);

/// True when eps = 0 and phi(v) = 0 in every cell: the u-equation does not move.
bool u_is_frozen(const SolverState& state, const MotilitySpec& phi, const SimParams& params);

/// One explicit step of
///   u_t = lap(u (eps + phi(v))),   v_t = lap(v) - u v
/// with old-time fields on the right, written in nonnegative-coefficient form.
/// Throws std::invalid_argument if dt exceeds cfl_timestep and
/// InvariantViolation if the result fails a SolverState invariant.
SolverState step(const SolverState& state, const MotilitySpec& phi, const SimParams& params, double dt);

struct Snapshot {
  double t = 0.0;
  ScalarField u;
  ScalarField v;
  double cumulative_uv = 0.0;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  SolverState final_state;
  std::size_t steps = 0;
  bool u_frozen_at_start = false;
  /// sup_t ||u||_inf exceeded 1e3 * ||u0||_inf at some step.
  bool blowup_warning = false;
};

/// Runs to params.t_end with dt = cfl_timestep recomputed every step.
/// Records diagnostics at t = 0, every diag_stride steps and at t_end.
Trajectory simulate(ScalarField u0, ScalarField v0, const MotilitySpec& phi, const SimParams& params);

struct EpsPair {
  double eps_a = 0.0;
  double eps_b = 0.0;
  double l1_u = 0.0;    // ||u_a - u_b||_{L^1} at t_end
  double linf_v = 0.0;  // ||v_a - v_b||_{L^inf} at t_end
};

struct ConvergenceReport {
  std::vector<double> eps;
  std::vector<EpsPair> pairs;
  std::vector<SolverState> finals;  // one per eps, same order
};

/// Runs simulate once per eps (params.eps is overridden) in parallel and
/// reports consecutive distances. eps_list must be positive and
/// nonincreasing; throws std::invalid_argument otherwise.
ConvergenceReport epsilon_sweep(const ScalarField& u0, const ScalarField& v0, const MotilitySpec& phi,
                                const SimParams& params, const std::vector<double>& eps_list);

}  // namespace degen
