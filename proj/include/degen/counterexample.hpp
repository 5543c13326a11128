#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "degen/field.hpp"

namespace degen {

/// Radial profile g: constant `height` on [0, plateau_end], quintic smoothstep
/// down to 0 at support_end, zero beyond.
struct PlateauProfile {
  double height = 0.0;
  double plateau_end = 0.0;
  double support_end = 0.0;

  double value(double xi) const;
  /// int_0^inf g(xi) dxi.
  double integral() const;
  /// Height 2n + alpha, plateau end sqrt((2n + alpha) / (1 - alpha)), support end one further.
  static PlateauProfile standard(int n, double alpha);
};

/// Blow-down potentials b_k(x, t) = -(T_k - t)^(-1) g(|x - x0| / sqrt(T_k - t))
/// with T_k = T + 2^(-k), and the barriers
///   Vbar_k(x, t) = (T_k - t)^alpha (|x - x0|^2 / (T_k - t) + 1).
struct CounterexampleSpec {
  double alpha = 0.5;
  PlateauProfile g;
  double p = 1.0;
  double q = 1.0;
  double T = 1.0;
  double R = 0.9;   // B_R(x0) inside the domain
  double R0 = 1.0;  // domain inside B_R0(x0)
  std::array<double, 2> x0{1.0, 0.0};
  int dim = 1;
  std::vector<double> lengths{2.0};
  std::vector<int> cells{512};
  double cfl_safety = 0.9;

  /// Standard spec on [0, 2] (1D) or [0, 2]^2 (2D) centered at x0, R = 0.45 min L.
  static CounterexampleSpec standard(int dim, double alpha, int cells = 512);

  /// 1/q + n/(2p) >= 1: the regime in which the budget stays bounded while
  /// no uniform positive lower bound exists.
  bool budget_condition() const;
  /// Throws std::invalid_argument for alpha outside (0, 1), p or q below 1,
  /// T <= 0, a bad grid, or B_R not inside the domain.
  void validate() const;
  Grid grid() const;
  double T_k(int k) const;
  /// min{T^alpha, (T + 1)^(alpha - 1) R^2}.
  double initial_value() const;
};

/// min over a dense xi grid on [0, support_end + 1] of
/// (xi^2 + 1) g(xi) - (2n + alpha - (1 - alpha) xi^2).
double verify_g_condition(const CounterexampleSpec& spec);

struct CounterexampleProblem {
  std::function<void(double t, ScalarField& b)> b_at;
  ScalarField V0;
  double T_k = 0.0;
};

/// Throws std::invalid_argument when the spec fails verify_g_condition or T_k <= T.
CounterexampleProblem build_counterexample(const CounterexampleSpec& spec, int k);

double barrier(const CounterexampleSpec& spec, int k, std::array<double, 2> x, double t);

/// Vbar_t - lap Vbar - b_k Vbar at radius r from x0, from the analytic
/// derivatives of Vbar (the r = 0 term uses the limit f'(xi)/xi -> f''(0)).
double supersolution_residual(const CounterexampleSpec& spec, int k, double r, double t);

struct CounterexampleRow {
  int k = 0;
  double gap = 0.0;                // T_k - T
  double budget = 0.0;             // int_0^T ||b_k||_p^q dt
  double min_V_at_x0 = 0.0;        // min over the run of V_k at x0
  double max_domination_ratio = 0.0;  // max V_k / Vbar_k on B_R at recorded times
  double min_supersolution_residual = 0.0;
  std::size_t steps = 0;
};

struct CounterexampleReport {
  double g_margin = 0.0;
  /// Analytic uniform bound on the budgets, c (T + 1)^(1 - gamma) / (1 - gamma)
  /// with gamma = q (1 - n / (2p)) and c = (|S^(n-1)| int g^p xi^(n-1) dxi)^(q/p);
  /// 0 when gamma >= 1.
  double budget_bound = 0.0;
  std::vector<CounterexampleRow> rows;
};

/// Solves V_t = lap V + b_k V (no drift) on the spec's grid for every k, in
/// parallel, recording the quantities above. V at x0 is the mean of the cells
/// touching x0 when x0 lies on a cell boundary.
CounterexampleReport run_counterexample(const CounterexampleSpec& spec, const std::vector<int>& k_list);

void write_counterexample_csv(std::ostream& os, const CounterexampleReport& report);

}  // namespace degen
