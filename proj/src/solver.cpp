#include "degen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "degen/calculus.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct StepSummary {
  double mass_u = 0.0;
  double min_u = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double max_u = 0.0;
};

// Advances `in` by dt into `out` (same grid). `coef` is scratch for eps + phi(v).
StepSummary advance(const SolverState& in, SolverState& out, const MotilitySpec& phi, double eps,
                    double dt, std::vector<double>& coef) {
  const Grid& g = in.u.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const bool two_d = g.dim() == 2;
  const double ix2 = 1.0 / (g.h(0) * g.h(0));
  const double iy2 = two_d ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  const double ix = 1.0 / g.h(0);
  const double iy = two_d ? 1.0 / g.h(1) : 0.0;
  const double floor = in.gradv_floor;
  const auto u = in.u.values();
  const auto v = in.v.values();
  auto un = out.u.values();
  auto vn = out.v.values();

  coef.resize(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) coef[k] = eps + phi.value(v[k]);

  Neumaier uv, u2v, g4, mass;
  StepSummary s;
  s.min_u = std::numeric_limits<double>::infinity();
  s.min_v = s.min_u;
  s.max_v = -s.min_u;
  s.max_u = -s.min_u;

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      double diag = 0.0;   // sum of 1/h^2 over real neighbours
      double nbr_w = 0.0;  // sum of w_nbr / h^2
      double nbr_v = 0.0;  // sum of v_nbr / h^2
      double gx_sq = 0.0;  // squared face differences of v, summed over the two faces
      double gy_sq = 0.0;
      if (i > 0) {
        diag += ix2;
        nbr_w += u[k - 1] * coef[k - 1] * ix2;
        nbr_v += v[k - 1] * ix2;
        const double d = (v[k] - v[k - 1]) * ix;
        gx_sq += d * d;
      }
      if (i + 1 < nx) {
        diag += ix2;
        nbr_w += u[k + 1] * coef[k + 1] * ix2;
        nbr_v += v[k + 1] * ix2;
        const double d = (v[k + 1] - v[k]) * ix;
        gx_sq += d * d;
      }
      if (two_d) {
        if (j > 0) {
          diag += iy2;
          nbr_w += u[k - nx] * coef[k - nx] * iy2;
          nbr_v += v[k - nx] * iy2;
          const double d = (v[k] - v[k - nx]) * iy;
          gy_sq += d * d;
        }
        if (j + 1 < ny) {
          diag += iy2;
          nbr_w += u[k + nx] * coef[k + nx] * iy2;
          nbr_v += v[k + nx] * iy2;
          const double d = (v[k + nx] - v[k]) * iy;
          gy_sq += d * d;
        }
      }
      const double uk = u[k];
      const double vk = v[k];
      const double keep_u = std::max(0.0, 1.0 - dt * coef[k] * diag);
      const double keep_v = std::max(0.0, 1.0 - dt * (diag + uk));
      const double unew = uk * keep_u + dt * nbr_w;
      const double vnew = vk * keep_v + dt * nbr_v;
      un[k] = unew;
      vn[k] = vnew;

      uv.add(uk * vk);
      u2v.add(uk * uk * vk);
      const double grad_sq = 0.5 * (gx_sq + gy_sq);
      const double den = vk + floor;
      if (den > 0.0) g4.add(grad_sq * grad_sq / (den * den * den));
      mass.add(unew);
      s.min_u = std::min(s.min_u, unew);
      s.max_u = std::max(s.max_u, unew);
      s.min_v = std::min(s.min_v, vnew);
      s.max_v = std::max(s.max_v, vnew);
    }
  }
  const double cv = g.cell_volume();
  out.t = in.t + dt;
  out.cumulative_uv = in.cumulative_uv + dt * uv.value() * cv;
  out.cumulative_u2v = in.cumulative_u2v + dt * u2v.value() * cv;
  out.cumulative_gradv4 = in.cumulative_gradv4 + dt * g4.value() * cv;
  out.mass_u0 = in.mass_u0;
  out.l1_v0 = in.l1_v0;
  out.max_v0 = in.max_v0;
  out.gradv_floor = in.gradv_floor;
  s.mass_u = mass.value() * cv;
  return s;
}

std::string dump(const SolverState& s, const StepSummary& sum, double dt, double prev_max_v) {
  std::ostringstream os;
  os.precision(17);
  os << " [t=" << s.t << " dt=" << dt << " min_u=" << sum.min_u << " min_v=" << sum.min_v
     << " max_v=" << sum.max_v << " prev_max_v=" << prev_max_v << " mass_u=" << sum.mass_u
     << " mass_u0=" << s.mass_u0 << "]";
  return os.str();
}

void check_invariants(const SolverState& out, const StepSummary& sum, double prev_max_v, double dt) {
  const double mass_tol = 1e-10 * out.mass_u0;
  if (sum.min_u < 0.0) throw InvariantViolation("u became negative" + dump(out, sum, dt, prev_max_v));
  if (sum.min_v < 0.0) throw InvariantViolation("v became negative" + dump(out, sum, dt, prev_max_v));
  if (sum.max_v > prev_max_v + 1e-14 * std::max(1.0, out.max_v0)) {
    throw InvariantViolation("max v increased" + dump(out, sum, dt, prev_max_v));
  }
  if (std::abs(sum.mass_u - out.mass_u0) > mass_tol) {
    throw InvariantViolation("mass of u drifted" + dump(out, sum, dt, prev_max_v));
  }
}

double max_coefficient(const SolverState& s, const MotilitySpec& phi, double eps) {
  double m = 0.0;
  for (double v : s.v.values()) m = std::max(m, eps + phi.value(v));
  return m;
}

}  // namespace

void SimParams::validate() const {
  if (!(eps >= 0.0)) throw std::invalid_argument("sim: eps must be >= 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("sim: t_end must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw std::invalid_argument("sim: cfl_safety must lie in (0,1]");
  if (diag_stride < 1) throw std::invalid_argument("sim: diag_stride must be >= 1");
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_end)) throw std::invalid_argument("sim: snapshot times must lie in [0, t_end]");
  }
}

double cfl_timestep(const SolverState& state, const MotilitySpec& phi, const SimParams& params) {
  const Grid& g = state.u.grid();
  const double h2 = g.h_min() * g.h_min();
  const double two_dim = 2.0 * g.dim();
  const double c = max_coefficient(state, phi, params.eps);
  const double diffusive = c > 0.0 ? h2 / (two_dim * c) : std::numeric_limits<double>::infinity();
  const double reactive = 1.0 / (two_dim / h2 + state.u.max());
  return params.cfl_safety * std::min(diffusive, reactive);
}

bool u_is_frozen(const SolverState& state, const MotilitySpec& phi, const SimParams& params) {
  return max_coefficient(state, phi, params.eps) == 0.0;
}

SolverState step(const SolverState& state, const MotilitySpec& phi, const SimParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const double limit = cfl_timestep(state, phi, params);
  if (dt > limit * (1.0 + 1e-12)) throw std::invalid_argument("step: dt exceeds the CFL bound");
  SolverState out = state;
  std::vector<double> coef;
  const StepSummary sum = advance(state, out, phi, params.eps, dt, coef);
  check_invariants(out, sum, state.v.max(), dt);
  return out;
}

Trajectory simulate(ScalarField u0, ScalarField v0, const MotilitySpec& phi, const SimParams& params) {
  params.validate();
  SolverState cur = SolverState::initial(std::move(u0), std::move(v0));
  SolverState next = cur;
  std::vector<double> snaps = params.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> snapshots;
  records.push_back(diagnostics_step(cur));
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) {
    snapshots.push_back(Snapshot{0.0, cur.u, cur.v, 0.0});
    ++next_snap;
  }
  const bool frozen = u_is_frozen(cur, phi, params);
  const double blowup_level = 1e3 * cur.u.max();
  bool blowup = false;

  std::vector<double> coef;
  std::size_t steps = 0;
  double max_v = cur.v.max();
  while (cur.t < params.t_end) {
    double dt = cfl_timestep(cur, phi, params);
    const double target = next_snap < snaps.size() ? snaps[next_snap] : params.t_end;
    bool landed = false;
    if (cur.t + dt >= target) {
      dt = target - cur.t;
      landed = true;
    }
    const StepSummary sum = advance(cur, next, phi, params.eps, dt, coef);
    if (landed) next.t = target;
    check_invariants(next, sum, max_v, dt);
    max_v = sum.max_v;
    std::swap(cur, next);
    ++steps;
    if (sum.max_u > blowup_level) blowup = true;

    const bool at_end = cur.t >= params.t_end;
    if (steps % static_cast<std::size_t>(params.diag_stride) == 0 || at_end) {
      records.push_back(diagnostics_step(cur, dt));
    }
    while (landed && next_snap < snaps.size() && snaps[next_snap] <= cur.t) {
      snapshots.push_back(Snapshot{cur.t, cur.u, cur.v, cur.cumulative_uv});
      ++next_snap;
    }
  }
  return Trajectory{.records = std::move(records),
                    .snapshots = std::move(snapshots),
                    .final_state = std::move(cur),
                    .steps = steps,
                    .u_frozen_at_start = frozen,
                    .blowup_warning = blowup};
}

ConvergenceReport epsilon_sweep(const ScalarField& u0, const ScalarField& v0, const MotilitySpec& phi,
                                const SimParams& params, const std::vector<double>& eps_list) {
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw std::invalid_argument("epsilon_sweep: eps values must be positive");
    if (k > 0 && eps_list[k] > eps_list[k - 1]) {
      throw std::invalid_argument("epsilon_sweep: eps list must be decreasing");
    }
  }
  std::vector<std::optional<SolverState>> finals(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t k) {
    SimParams p = params;
    p.eps = eps_list[k];
    p.snapshot_times.clear();
    finals[k] = simulate(u0, v0, phi, p).final_state;
  });
  ConvergenceReport report;
  report.eps = eps_list;
  for (auto& f : finals) report.finals.push_back(std::move(*f));
  for (std::size_t k = 0; k + 1 < eps_list.size(); ++k) {
    const auto& a = report.finals[k];
    const auto& b = report.finals[k + 1];
    report.pairs.push_back(EpsPair{eps_list[k], eps_list[k + 1], lp_norm(a.u - b.u, 1.0),
                                   lp_norm(a.v - b.v, kInfNorm)});
  }
  return report;
}

}  // namespace degen
