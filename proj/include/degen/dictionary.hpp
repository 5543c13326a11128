#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "degen/field.hpp"
#include "degen/solver.hpp"

namespace degen {

/// Ball B_R(center); the plateau bump built from it equals its height on B_R
/// and vanishes outside B_{2R}.
struct BumpSpec {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.0;
};

/// Radial plateau bump: 1 on B_R, quintic smoothstep down to 0 on [R, 2R].
ScalarField plateau_bump(const Grid& grid, const BumpSpec& bump);

/// max(|psi|, |grad_h psi|, |D^2_h psi|) over the grid, with face differences
/// for first derivatives and reflected second differences (plus mixed
/// differences in 2D) for the Hessian.
double discrete_w2inf_norm(const ScalarField& psi);

/// Normal face difference at the first interior face next to each wall,
/// relative to h times the second-difference size. Zero-flux test functions
/// stay O(1); a nonzero normal derivative makes it blow up like 1/h.
double neumann_defect(const ScalarField& psi);

struct TestFunction {
  std::string name;
  ScalarField psi;
  ScalarField lap_psi;     // discrete Laplacian of psi
  double certificate = 0;  // W^{2,inf} norm bound (<= 1)
  double lap_sup = 0;      // ||lap_h psi||_inf
};

class TestFunctionDictionary {
 public:
  /// Adds psi after dividing by `scale`. Throws std::invalid_argument when the
  /// normalized certificate exceeds 1 or the Neumann defect exceeds 4.
  void add(std::string name, const ScalarField& psi, double scale, double analytic_certificate);

  /// Constant 1, the first 8 (1D) / 24 (2D) Neumann cosine modes and the two
  /// plateau bumps, each normalized to W^{2,inf} norm at most 1.
  static TestFunctionDictionary standard(const Grid& grid, const BumpSpec& low, const BumpSpec& high);
  /// Standard dictionary with bumps at 0.25 L and 0.675 L (per axis) of radius 0.0375 min(L).
  static TestFunctionDictionary standard(const Grid& grid);
  static BumpSpec default_low_bump(const Grid& grid);
  static BumpSpec default_high_bump(const Grid& grid);

  const std::vector<TestFunction>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const TestFunction& find(const std::string& name) const;

 private:
  std::vector<TestFunction> members_;
};

/// Plateau value c3 of a normalized bump member (its max).
double bump_height(const TestFunction& bump);

/// max over the dictionary of |int F psi|; a lower bound on the dual norm.
double dual_norm_proxy(const ScalarField& f, const TestFunctionDictionary& dict);

struct TVInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double proxy = 0.0;           // dual_norm_proxy(u(t1) - u(t0))
  double certified_bound = 0.0; // max over psi of the per-psi bound
  double max_slack = 0.0;       // max over psi of |int du psi| - bound_psi
};

struct TVReport {
  std::vector<TVInterval> intervals;
  double total_proxy = 0.0;
  double total_bound = 0.0;
  double max_slack = 0.0;  // over all intervals and members
};

/// Total variation of u over consecutive snapshots, with the summation-by-parts
/// bound per (interval, psi):
///   |int (u1 - u0) psi| <= ||lap_h psi||_inf (eps m_u (t1 - t0) + Lambda (C_uv(t1) - C_uv(t0))).
TVReport tv_series(std::span<const Snapshot> snapshots, const TestFunctionDictionary& dict, double eps,
                   double mass_u0, double Lambda);

/// Same, restricted to the snapshots whose times appear in `times` (each must
/// match a snapshot time exactly; throws std::invalid_argument otherwise).
TVReport tv_series(const Trajectory& traj, const TestFunctionDictionary& dict, std::span<const double> times,
                   double eps, double Lambda);

void write_tv_csv(std::ostream& os, const TVReport& report);

}  // namespace degen
