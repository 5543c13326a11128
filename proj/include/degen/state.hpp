#pragma once

#include <vector>

#include "degen/field.hpp"

namespace degen {

struct SimParams {
  double eps = 0.0;          // regularization; 0 runs the limit system
  double t_end = 1.0;
  double cfl_safety = 0.9;   // in (0, 1]
  int diag_stride = 100;     // steps between diagnostics records
  std::vector<double> snapshot_times;  // steps are clipped to land on these

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
  bool operator==(const SimParams&) const = default;
};

/// (u, v) at time t together with the running space-time integrals
///   cumulative_uv      = sum dt * int u v
///   cumulative_u2v     = sum dt * int u^2 v
///   cumulative_gradv4  = sum dt * int |grad v|^4 / (v + floor)^3
/// evaluated with the old-time fields of each explicit step.
struct SolverState {
  double t = 0.0;
  ScalarField u;
  ScalarField v;
  double cumulative_uv = 0.0;
  double cumulative_u2v = 0.0;
  double cumulative_gradv4 = 0.0;

  // Reference data fixed at t = 0.
  double mass_u0 = 0.0;
  double l1_v0 = 0.0;
  double max_v0 = 0.0;
  double gradv_floor = 0.0;  // 1e-12 * max v0

  /// Throws std::invalid_argument when u0 or v0 is negative somewhere or has
  /// zero integral, or when the grids differ.
  static SolverState initial(ScalarField u0, ScalarField v0);
};

}  // namespace degen
