#include "degen/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "degen/calculus.hpp"

namespace degen {

double nonconstancy(const ScalarField& f) {
  const double mean = integrate(f) / f.grid().volume();
  std::vector<double> dev(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) dev[k] = std::abs(f[k] - mean);
  return compensated_sum(dev) * f.grid().cell_volume() / f.grid().volume();
}

double gradv4_over_v3(const ScalarField& v, double floor) {
  const ScalarField g2 = cell_grad_sq(v);
  std::vector<double> terms(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = v[k] + floor;
    terms[k] = d > 0.0 ? g2[k] * g2[k] / (d * d * d) : 0.0;
  }
  return compensated_sum(terms) * v.grid().cell_volume();
}

SolverState SolverState::initial(ScalarField u0, ScalarField v0) {
  if (!(u0.grid() == v0.grid())) throw std::invalid_argument("initial data live on different grids");
  if (u0.min() < 0.0 || v0.min() < 0.0) throw std::invalid_argument("initial data must be nonnegative");
  const double mu = integrate(u0);
  const double mv = integrate(v0);
  if (!(mu > 0.0)) throw std::invalid_argument("u0 must not vanish identically");
  if (!(mv > 0.0)) throw std::invalid_argument("v0 must not vanish identically");
  const double vmax = v0.max();
  return SolverState{.t = 0.0,
                     .u = std::move(u0),
                     .v = std::move(v0),
                     .mass_u0 = mu,
                     .l1_v0 = mv,
                     .max_v0 = vmax,
                     .gradv_floor = 1e-12 * vmax};
}

DiagnosticsRecord diagnostics_step(const SolverState& s, double dt) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.dt = dt;
  r.mass_u = integrate(s.u);
  r.min_u = s.u.min();
  r.max_u = s.u.max();
  r.l1_v = integrate(s.v);
  r.max_v = s.v.max();
  r.min_v = s.v.min();
  r.cumulative_uv = s.cumulative_uv;
  r.cumulative_u2v = s.cumulative_u2v;
  r.cumulative_gradv4 = s.cumulative_gradv4;
  r.lp_u2 = lp_norm(s.u, 2.0);
  r.lp_u4 = lp_norm(s.u, 4.0);
  r.lp_u8 = lp_norm(s.u, 8.0);
  r.sup_gradv = sup_grad(s.v);
  r.nonconstancy_u = nonconstancy(s.u);
  return r;
}

void write_diagnostics_header(std::ostream& os) {
  os << "t,dt,mass_u,min_u,max_u,l1_v,max_v,min_v,cumulative_uv,cumulative_u2v,cumulative_gradv4,"
        "lp_u_2,lp_u_4,lp_u_8,sup_gradv,nonconstancy_u\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << std::setprecision(17) << r.t << ',' << r.dt << ',' << r.mass_u << ',' << r.min_u << ','
     << r.max_u << ',' << r.l1_v << ',' << r.max_v << ',' << r.min_v << ',' << r.cumulative_uv << ','
     << r.cumulative_u2v << ',' << r.cumulative_gradv4 << ',' << r.lp_u2 << ',' << r.lp_u4 << ','
     << r.lp_u8 << ',' << r.sup_gradv << ',' << r.nonconstancy_u << '\n';
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records) {
  write_diagnostics_header(os);
  for (const auto& r : records) write_diagnostics_row(os, r);
}

BoundednessCheck check_boundedness(std::span<const DiagnosticsRecord> records, double t_end) {
  BoundednessCheck c;
  if (records.empty()) return c;
  const auto& last = records.back();
  // Cumulative value at the last record not later than 0.9 * t_end.
  double u2v_at = 0.0;
  double g4_at = 0.0;
  for (const auto& r : records) {
    if (r.t <= 0.9 * t_end) {
      u2v_at = r.cumulative_u2v;
      g4_at = r.cumulative_gradv4;
    }
  }
  auto tail = [](double total, double before) { return total > 0.0 ? (total - before) / total : 0.0; };
  c.u2v_tail_fraction = tail(last.cumulative_u2v, u2v_at);
  c.gradv4_tail_fraction = tail(last.cumulative_gradv4, g4_at);

  double l4_late = 0.0, l4_mid = 0.0, g_late = 0.0, g_mid = 0.0;
  for (const auto& r : records) {
    if (r.t >= 0.5 * t_end) {
      l4_late = std::max(l4_late, r.lp_u4);
      g_late = std::max(g_late, r.sup_gradv);
    } else if (r.t >= 0.25 * t_end) {
      l4_mid = std::max(l4_mid, r.lp_u4);
      g_mid = std::max(g_mid, r.sup_gradv);
    }
  }
  auto ratio = [](double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  c.l4_ratio = ratio(l4_late, l4_mid);
  c.gradv_ratio = ratio(g_late, g_mid);
  c.passed = c.u2v_tail_fraction <= 0.05 && c.gradv4_tail_fraction <= 0.05 && c.l4_ratio <= 1.05 &&
             c.gradv_ratio <= 1.05;
  return c;
}

}  // namespace degen
