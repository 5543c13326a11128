#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "degen/field.hpp"
#include "degen/state.hpp"

namespace degen {

struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;  // step that produced this state (0 at t = 0)
  double mass_u = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double l1_v = 0.0;
  double max_v = 0.0;
  double min_v = 0.0;
  double cumulative_uv = 0.0;
  double cumulative_u2v = 0.0;
  double cumulative_gradv4 = 0.0;
  double lp_u2 = 0.0;
  double lp_u4 = 0.0;
  double lp_u8 = 0.0;
  double sup_gradv = 0.0;
  double nonconstancy_u = 0.0;
};

/// ||F - mean(F)||_{L^1} / |Omega|.
double nonconstancy(const ScalarField& f);

/// int |grad v|^4 / (v + floor)^3 with the cell-centered |grad v|^2.
double gradv4_over_v3(const ScalarField& v, double floor);

DiagnosticsRecord diagnostics_step(const SolverState& state, double dt = 0.0);

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);
void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records);

/// Empirical boundedness of the monitored a-priori quantities over a run
/// ending at t_end.
struct BoundednessCheck {
  double u2v_tail_fraction = 0.0;     // share of cumulative_u2v added in the last 10% of time
  double gradv4_tail_fraction = 0.0;  // same for cumulative_gradv4
  double l4_ratio = 0.0;              // sup_{[T/2,T]} ||u||_4 / sup_{[T/4,T/2]} ||u||_4
  double gradv_ratio = 0.0;           // same for ||grad v||_inf
  bool passed = false;
};

/// Thresholds: tail fractions <= 0.05, ratios <= 1.05. Fractions of a zero
/// total count as 0; ratios with a zero denominator count as 1 when the
/// numerator is also zero.
BoundednessCheck check_boundedness(std::span<const DiagnosticsRecord> records, double t_end);

}  // namespace degen
